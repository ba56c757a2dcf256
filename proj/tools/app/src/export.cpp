#include "amo_app/export.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "amo/errors.hpp"
#include "amo/parallel.hpp"
#include "json.hpp"

namespace amo::app {

namespace {

using Json = nlohmann::ordered_json;

Json num_or_null(double x) { return std::isnan(x) ? Json(nullptr) : Json(x); }

double parse_double(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string fmt(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<BandRow> band_rows(const BandSpectrum& spec, const IntervalSet* x) {
  std::vector<BandRow> rows;
  for (const auto& b : spec.bands()) {
    BandRow r{spec.lambda(), spec.p(), spec.q(), b.k, b.sigma_lo, b.inner_lo, b.inner_hi, b.sigma_hi, x != nullptr, {}};
    if (x && b.has_inner()) {
      const auto inside = x->clip(b.inner_lo, b.inner_hi);
      for (const auto& piece : inside.intervals())
        if (piece.hi > piece.lo) r.in_x.push_back(piece);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_bands_csv(std::ostream& os, const std::vector<BandRow>& rows) {
  const bool with_x = !rows.empty() && rows.front().has_x;
  os << "lambda,p,q,k,sigma_lo,inner_lo,inner_hi,sigma_hi" << (with_x ? ",in_X" : "") << '\n';
  for (const auto& r : rows) {
    os << fmt(r.lambda) << ',' << r.p << ',' << r.q << ',' << r.k << ',' << fmt(r.sigma_lo) << ','
       << fmt(r.inner_lo) << ',' << fmt(r.inner_hi) << ',' << fmt(r.sigma_hi);
    if (with_x) {
      os << ',';
      for (std::size_t i = 0; i < r.in_x.size(); ++i)
        os << (i ? "|" : "") << fmt(r.in_x[i].lo) << ':' << fmt(r.in_x[i].hi);
    }
    os << '\n';
  }
}

void write_bands_json(std::ostream& os, const std::vector<BandRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["lambda"] = r.lambda;
    j["p"] = r.p;
    j["q"] = r.q;
    j["k"] = r.k;
    j["sigma_lo"] = r.sigma_lo;
    j["inner_lo"] = num_or_null(r.inner_lo);
    j["inner_hi"] = num_or_null(r.inner_hi);
    j["sigma_hi"] = r.sigma_hi;
    if (r.has_x) {
      Json x = Json::array();
      for (const auto& piece : r.in_x) x.push_back({piece.lo, piece.hi});
      j["in_X"] = std::move(x);
    }
    arr.push_back(std::move(j));
  }
  os << arr.dump(2) << '\n';
}

std::vector<BandRow> read_bands_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("band CSV: missing header");
  const auto header = split(line, ',');
  const bool with_x = header.size() == 9 && header[8] == "in_X";
  if (!(header.size() == 8 || with_x) || line.rfind("lambda,p,q,k,sigma_lo,inner_lo,inner_hi,sigma_hi", 0) != 0)
    throw std::runtime_error("band CSV: unexpected header '" + line + "'");
  std::vector<BandRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw std::runtime_error("band CSV: wrong field count in '" + line + "'");
    BandRow r{parse_double(f[0]), std::stoll(f[1]), std::stoll(f[2]), std::stoi(f[3]), parse_double(f[4]),
              parse_double(f[5]), parse_double(f[6]), parse_double(f[7]), with_x, {}};
    if (with_x && !f[8].empty()) {
      for (const auto& piece : split(f[8], '|')) {
        const auto ends = split(piece, ':');
        if (ends.size() != 2) throw std::runtime_error("band CSV: bad in_X piece '" + piece + "'");
        r.in_x.push_back({parse_double(ends[0]), parse_double(ends[1])});
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

IntervalSet sigma_set(const std::vector<BandRow>& rows) {
  std::vector<Interval> v;
  for (const auto& r : rows) v.push_back({r.sigma_lo, r.sigma_hi});
  return IntervalSet(std::move(v));
}

IntervalSet inner_set(const std::vector<BandRow>& rows) {
  std::vector<Interval> v;
  for (const auto& r : rows)
    if (!std::isnan(r.inner_lo)) v.push_back({r.inner_lo, r.inner_hi});
  return IntervalSet(std::move(v));
}

std::vector<ButterflyRow> butterfly(double lambda, std::int64_t q_max) {
  if (q_max < 1 || q_max > kButterflyQMax)
    throw DegenerateQ("butterfly: q_max must lie in [1, " + std::to_string(kButterflyQMax) + "]");
  std::vector<std::pair<std::int64_t, std::int64_t>> fractions;
  for (std::int64_t q = 1; q <= q_max; ++q)
    for (std::int64_t p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) fractions.emplace_back(p, q);
  const auto spectra = parallel_map(fractions.size(), [&](std::size_t i) {
    return band_spectrum(lambda, fractions[i].first, fractions[i].second);
  });
  std::vector<ButterflyRow> rows;
  for (const auto& s : spectra)
    for (const auto& b : s.bands()) rows.push_back({s.p(), s.q(), b.k, b.sigma_lo, b.sigma_hi});
  return rows;
}

void write_butterfly_csv(std::ostream& os, const std::vector<ButterflyRow>& rows) {
  os << "p,q,k,sigma_lo,sigma_hi\n";
  for (const auto& r : rows)
    os << r.p << ',' << r.q << ',' << r.k << ',' << fmt(r.sigma_lo) << ',' << fmt(r.sigma_hi) << '\n';
}

void write_butterfly_json(std::ostream& os, double lambda, const std::vector<ButterflyRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back({{"p", r.p}, {"q", r.q}, {"k", r.k}, {"sigma_lo", r.sigma_lo}, {"sigma_hi", r.sigma_hi}});
  Json j;
  j["lambda"] = lambda;
  j["bands"] = std::move(arr);
  os << j.dump(2) << '\n';
}

void write_butterfly_svg(std::ostream& os, double lambda, const std::vector<ButterflyRow>& rows) {
  const double e_max = 2.0 + 2.0 * std::abs(lambda);
  auto x_of = [&](double e) { return 1000.0 * (e + e_max) / (2.0 * e_max); };
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n";
  os << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  os << "<g stroke=\"black\" stroke-width=\"1.5\">\n";
  for (const auto& r : rows) {
    const double y = 1000.0 * (1.0 - static_cast<double>(r.p) / static_cast<double>(r.q));
    std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", x_of(r.sigma_lo), y,
                  x_of(r.sigma_hi), y);
    os << buf;
  }
  os << "</g>\n</svg>\n";
}

void write_pq_json(std::ostream& os, const PqWindow& w, const IntervalSet& intervals) {
  Json list = Json::array();
  for (const auto& piece : intervals.intervals()) list.push_back({piece.lo, piece.hi});
  Json j;
  j["q"] = w.q;
  j["c"] = w.c;
  j["b_lo"] = w.b_lo;
  j["b_hi"] = w.b_hi;
  j["measure"] = intervals.measure();
  j["intervals"] = std::move(list);
  os << j.dump(2) << '\n';
}

void write_pq_csv(std::ostream& os, const IntervalSet& intervals) {
  os << "lo,hi\n";
  for (const auto& piece : intervals.intervals()) os << fmt(piece.lo) << ',' << fmt(piece.hi) << '\n';
}

void write_thouless_csv(std::ostream& os, const ThoulessReport& r) {
  os << "E,L_thouless,L_cocycle,abs_diff\n";
  for (const auto& row : r.rows)
    os << fmt(row.energy) << ',' << fmt(row.l_thouless) << ',' << fmt(row.l_cocycle) << ',' << fmt(row.abs_diff)
       << '\n';
}

void write_thouless_json(std::ostream& os, const ThoulessReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"E", row.energy}, {"L_thouless", row.l_thouless}, {"L_cocycle", row.l_cocycle},
                    {"abs_diff", row.abs_diff}});
  Json j;
  j["lambda"] = r.lambda;
  j["p"] = r.p;
  j["q"] = r.q;
  j["n_steps"] = r.n_steps;
  j["m_samples"] = r.m_samples;
  j["max_diff"] = r.max_diff;
  j["rows"] = std::move(rows);
  os << j.dump(2) << '\n';
}

}  // namespace amo::app
