#include "amo/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace amo {

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  for (const auto& p : pieces) {
    if (!(p.hi >= p.lo) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
      throw std::invalid_argument("IntervalSet: malformed interval");
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& l, const Interval& r) { return l.lo < r.lo || (l.lo == r.lo && l.hi < r.hi); });
  for (const auto& p : pieces) {
    if (!pieces_.empty() && p.lo <= pieces_.back().hi) {
      pieces_.back().hi = std::max(pieces_.back().hi, p.hi);
    } else {
      pieces_.push_back(p);
    }
  }
}

double IntervalSet::measure() const {
  double total = 0.0;
  for (const auto& p : pieces_) total += p.length();
  return total;
}

bool IntervalSet::contains(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Interval& p) { return v < p.lo; });
  if (it == pieces_.begin()) return false;
  --it;
  return x <= it->hi;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all(pieces_.begin(), pieces_.end());
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < other.pieces_.size()) {
    const double lo = std::max(pieces_[i].lo, other.pieces_[j].lo);
    const double hi = std::min(pieces_[i].hi, other.pieces_[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (pieces_[i].hi < other.pieces_[j].hi) ++i; else ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const auto& p : pieces_) {
    double cursor = p.lo;
    while (j < other.pieces_.size() && other.pieces_[j].hi < cursor) ++j;
    std::size_t k = j;
    while (k < other.pieces_.size() && other.pieces_[k].lo <= p.hi) {
      if (other.pieces_[k].lo > cursor) out.push_back({cursor, other.pieces_[k].lo});
      cursor = std::max(cursor, other.pieces_[k].hi);
      ++k;
    }
    if (cursor < p.hi) out.push_back({cursor, p.hi});
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::clip(double lo, double hi) const {
  if (!(hi >= lo)) return {};
  return intersect(single(lo, hi));
}

double IntervalSet::distance(double x) const {
  if (pieces_.empty()) throw std::invalid_argument("IntervalSet::distance on empty set");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Interval& p) { return v < p.lo; });
  double best = std::numeric_limits<double>::infinity();
  if (it != pieces_.end()) best = it->lo - x;
  if (it != pieces_.begin()) {
    --it;
    best = std::min(best, x <= it->hi ? 0.0 : x - it->hi);
  }
  return best;
}

namespace {

// sup over x in a of dist(x, b). dist(., b) is piecewise linear; its maxima
// on an interval sit at the interval ends or at midpoints of gaps of b.
double directed_hausdorff(const IntervalSet& a, const IntervalSet& b) {
  double worst = 0.0;
  const auto gaps = b.intervals();
  for (const auto& p : a.intervals()) {
    worst = std::max({worst, b.distance(p.lo), b.distance(p.hi)});
    for (std::size_t g = 0; g + 1 < gaps.size(); ++g) {
      const double mid = 0.5 * (gaps[g].hi + gaps[g + 1].lo);
      if (mid > p.lo && mid < p.hi) worst = std::max(worst, b.distance(mid));
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty set");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace amo
