#include "amo/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "amo/errors.hpp"
#include "amo/parallel.hpp"

namespace amo {

namespace {

constexpr double kInt64Max = 9.2e18;

std::int64_t checked_recurrence(std::int64_t a, std::int64_t x1, std::int64_t x2) {
  std::int64_t prod = 0, sum = 0;
  if (__builtin_mul_overflow(a, x1, &prod) || __builtin_add_overflow(prod, x2, &sum))
    throw BigOverflow("continued fraction convergent exceeds 64-bit range");
  return sum;
}

struct Expansion {
  std::int64_t a0 = 0;
  std::vector<std::int64_t> quotients;
  bool terminated = false;
  bool exhausted = false;  // stopped at the precision limit
};

// Exact Euclid on the binary rational x with the precision rule of cf_expand.
Expansion expand_double(double x, std::size_t n_terms) {
  if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("cf_expand: x must be finite and >= 0");
  Expansion out;
  if (x >= kInt64Max) throw BigOverflow("cf_expand: integer part exceeds 64-bit range");
  int e = 0;
  const double m = std::frexp(x, &e);
  if (x == 0.0 || e >= 53) {
    out.a0 = static_cast<std::int64_t>(x);
    out.terminated = true;
    return out;
  }
  if (53 - e > 126) throw BigOverflow("cf_expand: x too small, first quotient exceeds 64-bit range");
  __extension__ typedef unsigned __int128 u128;
  u128 num = static_cast<u128>(std::ldexp(m, 53));
  u128 den = static_cast<u128>(1) << (53 - e);
  out.a0 = static_cast<std::int64_t>(num / den);
  u128 r = num % den;

  const double limit = 1.0 / (std::nextafter(x, std::numeric_limits<double>::infinity()) - x);
  double q_prev = 0.0, q_cur = 1.0;
  while (out.quotients.size() < n_terms) {
    if (r == 0) {
      out.terminated = true;
      break;
    }
    const u128 a = den / r;
    const u128 rest = den % r;
    den = r;
    r = rest;
    const double ad = static_cast<double>(a);
    const double q_next = ad * q_cur + q_prev;
    if (q_next * q_next > limit) {
      if (q_cur * q_next >= limit / 4.0 && ad >= 64.0) {
        out.terminated = true;
        // [..., a, 1] and [..., a + 1] are the same rational; keep the canonical form.
        if (out.quotients.size() >= 2 && out.quotients.back() == 1) {
          out.quotients.pop_back();
          ++out.quotients.back();
        }
      } else {
        out.exhausted = true;
      }
      break;
    }
    if (a > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
      throw BigOverflow("cf_expand: partial quotient exceeds 64-bit range");
    out.quotients.push_back(static_cast<std::int64_t>(a));
    q_prev = q_cur;
    q_cur = q_next;
  }
  return out;
}

// Sum of (-1)^j / (q_j q_{j+1}) for j in [from, n), smallest terms first.
double tail_sum(const std::vector<std::int64_t>& q, std::size_t from) {
  double s = 0.0;
  for (std::size_t j = q.size() - 1; j > from; --j) {
    const double term = 1.0 / (static_cast<double>(q[j - 1]) * static_cast<double>(q[j]));
    s += ((j - 1) % 2 == 0) ? term : -term;
  }
  return s;
}

}  // namespace

ContinuedFraction ContinuedFraction::from_quotients(std::int64_t a0, std::vector<std::int64_t> quotients,
                                                    bool terminated) {
  ContinuedFraction cf;
  cf.a0_ = a0;
  cf.terminated_ = terminated;
  std::int64_t p_prev = 1, q_prev = 0, p_cur = a0, q_cur = 1;
  cf.p_.push_back(p_cur);
  cf.q_.push_back(q_cur);
  for (const std::int64_t a : quotients) {
    if (a < 1) throw std::invalid_argument("ContinuedFraction: partial quotients must be positive");
    const std::int64_t p_next = checked_recurrence(a, p_cur, p_prev);
    const std::int64_t q_next = checked_recurrence(a, q_cur, q_prev);
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    cf.p_.push_back(p_cur);
    cf.q_.push_back(q_cur);
  }
  cf.quotients_ = std::move(quotients);
  return cf;
}

double ContinuedFraction::value() const { return static_cast<double>(a0_) + tail_sum(q_, 0); }

double ContinuedFraction::offset(std::size_t k) const {
  if (k > size()) throw std::out_of_range("ContinuedFraction::offset: index past last convergent");
  return tail_sum(q_, k);
}

Frequency ContinuedFraction::frequency(std::size_t k) const {
  return Frequency::perturbed(p(k), q(k), offset(k));
}

ContinuedFraction cf_expand(double x, std::size_t n_terms) {
  const Expansion e = expand_double(x, n_terms);
  if (e.exhausted)
    throw PrecisionExhausted("cf_expand: only " + std::to_string(e.quotients.size()) +
                             " quotients are resolved at double precision");
  return ContinuedFraction::from_quotients(e.a0, e.quotients, e.terminated);
}

ContinuedFraction cf_expand(std::int64_t p, std::int64_t q, std::size_t n_terms) {
  if (q < 1 || p < 0) throw std::invalid_argument("cf_expand: need p >= 0 and q >= 1");
  std::vector<std::int64_t> a;
  const std::int64_t a0 = p / q;
  std::int64_t num = q, den = p % q;
  bool terminated = den == 0;
  while (!terminated && a.size() < n_terms) {
    a.push_back(num / den);
    const std::int64_t r = num % den;
    num = den;
    den = r;
    terminated = den == 0;
  }
  return ContinuedFraction::from_quotients(a0, std::move(a), terminated);
}

double beta_estimate(const ContinuedFraction& cf) {
  if (cf.size() < 2) throw std::invalid_argument("beta_estimate: need at least two partial quotients");
  const auto& q = cf.denominators();
  const std::size_t pairs = q.size() - 1;
  const std::size_t tail = std::max<std::size_t>(1, pairs / 2);
  double best = 0.0;
  for (std::size_t n = pairs - tail; n < pairs; ++n)
    best = std::max(best, std::log(static_cast<double>(q[n + 1])) / static_cast<double>(q[n]));
  return best;
}

namespace {

std::vector<std::int64_t> liouville_quotients(double beta, std::size_t n_terms, bool stop_quietly) {
  if (!(beta > 0.0) || beta > 50.0) throw std::invalid_argument("build_liouville: beta must lie in (0, 50]");
  std::vector<std::int64_t> a{1};
  std::int64_t q_prev = 1, q_cur = 1;  // q_0, q_1
  while (a.size() < n_terms) {
    const double log_a = beta * static_cast<double>(q_cur) - std::log(static_cast<double>(q_cur));
    const double next = std::max(1.0, std::ceil(std::exp(log_a)));
    std::int64_t q_next = 0;
    bool overflow = !(log_a < std::log(kInt64Max)) || !(next < kInt64Max);
    if (!overflow) {
      try {
        q_next = checked_recurrence(static_cast<std::int64_t>(next), q_cur, q_prev);
      } catch (const BigOverflow&) {
        overflow = true;
      }
    }
    if (overflow) {
      if (stop_quietly) break;
      throw BigOverflow("build_liouville: q_" + std::to_string(a.size() + 1) + " exceeds 64-bit range for beta = " +
                        std::to_string(beta));
    }
    a.push_back(static_cast<std::int64_t>(next));
    q_prev = q_cur;
    q_cur = q_next;
  }
  return a;
}

}  // namespace

ContinuedFraction build_liouville(double beta, std::size_t n_terms) {
  if (n_terms < 1) throw std::invalid_argument("build_liouville: n_terms must be >= 1");
  return ContinuedFraction::from_quotients(0, liouville_quotients(beta, n_terms, false));
}

ContinuedFraction build_liouville_max(double beta) {
  return ContinuedFraction::from_quotients(0, liouville_quotients(beta, std::numeric_limits<std::size_t>::max(), true));
}

PqWindow make_window(std::int64_t q, double c) {
  if (q < 1 || !(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("make_window: need q >= 1 and c > 0");
  const double cq = c * static_cast<double>(q);
  const double upper = std::exp(cq / 2.0);
  if (!(upper <= static_cast<double>(kMaxWindowB)))
    throw WindowTooLarge("P_q window e^{cq/2} = " + std::to_string(upper) + " exceeds " +
                         std::to_string(kMaxWindowB) + " (q = " + std::to_string(q) + ", c = " + std::to_string(c) + ")");
  PqWindow w{q, c, static_cast<std::int64_t>(std::floor(std::exp(cq / 4.0))) + 1,
             static_cast<std::int64_t>(std::ceil(upper)) - 1};
  return w;
}

PqWindow explicit_window(std::int64_t q, std::int64_t b_lo, std::int64_t b_hi, double slack) {
  if (q < 1 || b_lo < 1 || !(slack > 0.0)) throw std::invalid_argument("explicit_window: need q >= 1, b_lo >= 1, slack > 0");
  if (b_hi > kMaxWindowB) throw WindowTooLarge("explicit_window: b_hi exceeds " + std::to_string(kMaxWindowB));
  return {q, 0.0, b_lo, b_hi, slack};
}

double default_c(double beta, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0) || !(beta > 0.0))
    throw std::invalid_argument("default_c: need beta > 0 and 0 < lambda < 1");
  return std::min(beta / 2.0, -std::log(lambda) / 2.0);
}

namespace {

bool in_rho_range(double rho, const PqWindow& w) { return rho >= w.rho_lo() && rho <= w.rho_hi(); }

std::optional<PqWitness> try_b(double rho, std::int64_t b, const PqWindow& w) {
  const double x = 4.0 * static_cast<double>(b) * rho;
  const std::int64_t a = 2 * static_cast<std::int64_t>(std::floor(x / 2.0)) + 1;
  if (std::abs(x - static_cast<double>(a)) < w.slack / static_cast<double>(b)) return PqWitness{a, b};
  return std::nullopt;
}

}  // namespace

std::optional<PqWitness> pq_search_convergents(double rho, const PqWindow& w) {
  if (w.empty() || !in_rho_range(rho, w)) return std::nullopt;
  const Expansion e = expand_double(4.0 * rho, 64);
  const auto cf = ContinuedFraction::from_quotients(e.a0, e.quotients, e.terminated);
  for (const std::int64_t d : cf.denominators()) {
    for (std::int64_t m = 1; m <= 10; ++m) {
      const std::int64_t b = m * d;
      if (b < w.b_lo || b > w.b_hi) continue;
      if (auto hit = try_b(rho, b, w)) return hit;
    }
  }
  return std::nullopt;
}

std::optional<PqWitness> pq_search_exhaustive(double rho, const PqWindow& w) {
  if (w.empty() || !in_rho_range(rho, w)) return std::nullopt;
  for (std::int64_t b = w.b_lo; b <= w.b_hi; ++b)
    if (auto hit = try_b(rho, b, w)) return hit;
  return std::nullopt;
}

std::optional<PqWitness> pq_member(double rho, const PqWindow& w) {
  if (auto hit = pq_search_convergents(rho, w)) return hit;
  return pq_search_exhaustive(rho, w);
}

IntervalSet pq_intervals(const PqWindow& w) {
  const double lo = w.rho_lo(), hi = w.rho_hi();
  if (w.empty() || !(hi >= lo)) return {};
  double estimate = 0.0;
  for (std::int64_t b = w.b_lo; b <= w.b_hi; ++b) estimate += 2.0 * static_cast<double>(b) * (hi - lo) + 2.0;
  if (estimate > static_cast<double>(kMaxPqIntervals))
    throw WindowTooLarge("pq_intervals: about " + std::to_string(static_cast<long long>(estimate)) +
                         " intervals, above the enumeration cap");
  std::vector<Interval> pieces;
  for (std::int64_t b = w.b_lo; b <= w.b_hi; ++b) {
    const double bd = static_cast<double>(b);
    const double r = w.slack / bd;
    auto a = static_cast<std::int64_t>(std::ceil(4.0 * bd * lo - r));
    if (a % 2 == 0) ++a;
    a = std::max<std::int64_t>(a, 1);
    const auto a_max = static_cast<std::int64_t>(std::floor(4.0 * bd * hi + r));
    for (; a <= a_max; a += 2) {
      const double c_lo = std::max(lo, (static_cast<double>(a) - r) / (4.0 * bd));
      const double c_hi = std::min(hi, (static_cast<double>(a) + r) / (4.0 * bd));
      if (c_lo < c_hi) pieces.push_back({c_lo, c_hi});
    }
  }
  return IntervalSet(std::move(pieces));
}

double pq_measure_exact(const PqWindow& w) { return pq_intervals(w).measure(); }

double pq_measure_sampled(const PqWindow& w, std::size_t n_samples) {
  if (n_samples < 1) throw std::invalid_argument("pq_measure_sampled: n_samples must be >= 1");
  const auto hits = parallel_map(n_samples, [&](std::size_t j) {
    const double rho = 0.5 * (static_cast<double>(j) + 0.5) / static_cast<double>(n_samples);
    return pq_search_exhaustive(rho, w).has_value() ? 1 : 0;
  });
  std::size_t count = 0;
  for (int h : hits) count += static_cast<std::size_t>(h);
  return 0.5 * static_cast<double>(count) / static_cast<double>(n_samples);
}

namespace {

constexpr int kPullbackCells = 64;

// Energy in [lo, hi] where the monotone f crosses target.
template <class F>
double invert_monotone(const F& f, double lo, double hi, double f_lo, double target) {
  const bool rising = f_lo <= target;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((f(mid) <= target) == rising)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Interval> pull_back_band(const BandSpectrum& spec, const Band& band, const IntervalSet& pq) {
  std::vector<Interval> out;
  if (!band.has_inner() || !(band.inner_hi > band.inner_lo)) return out;
  auto rho = [&](double e) { return rho_average(spec.a0(e), spec.amplitude()); };
  std::vector<double> grid(kPullbackCells + 1), values(kPullbackCells + 1);
  for (int j = 0; j <= kPullbackCells; ++j) {
    grid[j] = band.inner_lo + (band.inner_hi - band.inner_lo) * j / kPullbackCells;
    values[j] = rho(grid[j]);
  }
  grid.back() = band.inner_hi;
  for (int j = 0; j < kPullbackCells; ++j) {
    const double e0 = grid[j], e1 = grid[j + 1];
    const double r0 = values[j], r1 = values[j + 1];
    const double r_min = std::min(r0, r1), r_max = std::max(r0, r1);
    const IntervalSet hit = pq.clip(r_min, r_max);
    for (const auto& piece : hit.intervals()) {
      double a = piece.lo <= r_min ? (r0 <= r1 ? e0 : e1) : invert_monotone(rho, e0, e1, r0, piece.lo);
      double b = piece.hi >= r_max ? (r0 <= r1 ? e1 : e0) : invert_monotone(rho, e0, e1, r0, piece.hi);
      if (a > b) std::swap(a, b);
      out.push_back({a, b});
    }
  }
  return out;
}

}  // namespace

IntervalSet build_X(const BandSpectrum& spec, const PqWindow& w) {
  if (!(spec.lambda() >= 0.0 && spec.lambda() < 1.0))
    throw std::invalid_argument("build_X: need 0 <= lambda < 1");
  const IntervalSet pq = pq_intervals(w);
  if (pq.empty()) return {};
  const auto bands = spec.bands();
  const auto per_band = parallel_map(bands.size(), [&](std::size_t i) { return pull_back_band(spec, bands[i], pq); });
  std::vector<Interval> all;
  for (const auto& v : per_band) all.insert(all.end(), v.begin(), v.end());
  return IntervalSet(std::move(all));
}

IntervalSet build_X(const BandSpectrum& spec, double c) { return build_X(spec, make_window(spec.q(), c)); }

}  // namespace amo
