#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace amo {

struct Interval {
  double lo;
  double hi;
  [[nodiscard]] double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of closed real intervals kept sorted and disjoint:
// hi_i >= lo_i and hi_i < lo_{i+1}. Overlapping or touching inputs merge.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> pieces);

  static IntervalSet single(double lo, double hi) { return IntervalSet({{lo, hi}}); }

  [[nodiscard]] std::span<const Interval> intervals() const& { return pieces_; }
  std::span<const Interval> intervals() const&& = delete;  // would dangle
  [[nodiscard]] std::size_t size() const { return pieces_.size(); }
  [[nodiscard]] bool empty() const { return pieces_.empty(); }
  [[nodiscard]] double measure() const;
  [[nodiscard]] bool contains(double x) const;
  // Lowest and highest points; requires !empty().
  [[nodiscard]] double lower() const { return pieces_.front().lo; }
  [[nodiscard]] double upper() const { return pieces_.back().hi; }

  [[nodiscard]] IntervalSet unite(const IntervalSet& other) const;
  [[nodiscard]] IntervalSet intersect(const IntervalSet& other) const;
  // Closure of this minus other.
  [[nodiscard]] IntervalSet subtract(const IntervalSet& other) const;
  [[nodiscard]] IntervalSet clip(double lo, double hi) const;

  // Distance from x to the set; requires !empty().
  [[nodiscard]] double distance(double x) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> pieces_;
};

// Hausdorff distance between two non-empty interval unions.
double hausdorff_distance(const IntervalSet& a, const IntervalSet& b);

}  // namespace amo
