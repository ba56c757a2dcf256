#pragma once

// Continued fractions, beta(alpha), Liouville-type frequencies and the
// rotation-number set P_q with its energy pullback X.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "amo/cocycle.hpp"
#include "amo/interval_set.hpp"
#include "amo/periodic.hpp"

namespace amo {

// x = a0 + 1/(a_1 + 1/(a_2 + ...)) truncated after the stored quotients.
// Convergent k is p_k/q_k with p_0 = a0, q_0 = 1.
class ContinuedFraction {
 public:
  // Throws BigOverflow when a convergent leaves int64 and
  // std::invalid_argument on a non-positive quotient.
  static ContinuedFraction from_quotients(std::int64_t a0, std::vector<std::int64_t> quotients,
                                          bool terminated = false);

  [[nodiscard]] std::int64_t a0() const { return a0_; }
  [[nodiscard]] const std::vector<std::int64_t>& quotients() const { return quotients_; }
  // Number of partial quotients a_1..a_n.
  [[nodiscard]] std::size_t size() const { return quotients_.size(); }
  [[nodiscard]] std::int64_t p(std::size_t k) const { return p_.at(k); }
  [[nodiscard]] std::int64_t q(std::size_t k) const { return q_.at(k); }
  [[nodiscard]] const std::vector<std::int64_t>& denominators() const { return q_; }
  // True when the expansion reached the exact end of a rational.
  [[nodiscard]] bool terminated() const { return terminated_; }

  // Value of the last convergent, summed as a0 + sum (-1)^j / (q_j q_{j+1}).
  [[nodiscard]] double value() const;
  // value() - p_k/q_k, summed over the tail of the series.
  [[nodiscard]] double offset(std::size_t k) const;
  // The frequency value() split as p_k/q_k + offset(k).
  [[nodiscard]] Frequency frequency(std::size_t k) const;
  [[nodiscard]] Frequency frequency() const { return frequency(size()); }

 private:
  std::int64_t a0_ = 0;
  std::vector<std::int64_t> quotients_;
  std::vector<std::int64_t> p_;
  std::vector<std::int64_t> q_;
  bool terminated_ = false;
};

// Expansion of the binary rational x >= 0, run exactly. Terms are kept while
// q_n^2 <= 1/ulp(x). A quotient that would push past that limit with
// q_{n+1} >= q_n sqrt(1/ulp) is read as exact termination; any other
// request past the limit throws PrecisionExhausted.
ContinuedFraction cf_expand(double x, std::size_t n_terms);
// Exact expansion of p/q with q >= 1, p >= 0.
ContinuedFraction cf_expand(std::int64_t p, std::int64_t q, std::size_t n_terms = 64);

// max of ln q_{n+1} / q_n over the tail half of the available pairs.
// Requires at least two quotients (std::invalid_argument otherwise).
double beta_estimate(const ContinuedFraction& cf);

// a_1 = 1, a_{n+1} = max(1, ceil(e^{beta q_n} / q_n)). Throws
// std::invalid_argument unless beta in (0, 50], BigOverflow if q_n leaves
// int64 before n_terms quotients.
ContinuedFraction build_liouville(double beta, std::size_t n_terms);
// Same recursion, as many quotients as fit in int64.
ContinuedFraction build_liouville_max(double beta);

// e^{cq/4} < b < e^{cq/2} and |4 b rho - a| < slack / b.
struct PqWindow {
  std::int64_t q;
  double c;
  std::int64_t b_lo;
  std::int64_t b_hi;
  double slack = 10.0;

  [[nodiscard]] bool empty() const { return b_lo > b_hi; }
  [[nodiscard]] double rho_lo() const { return 1.0 / static_cast<double>(q); }
  [[nodiscard]] double rho_hi() const { return 0.5 - 1.0 / static_cast<double>(q); }
};

inline constexpr std::int64_t kMaxWindowB = 1000000;
inline constexpr std::size_t kMaxPqIntervals = 20000000;

// Throws WindowTooLarge when e^{cq/2} exceeds kMaxWindowB, beyond which
// |4 b rho - a| falls below double resolution.
PqWindow make_window(std::int64_t q, double c);
// Window with explicit denominator bounds.
PqWindow explicit_window(std::int64_t q, std::int64_t b_lo, std::int64_t b_hi, double slack = 10.0);

// Default c = min(beta/2, -ln(lambda)/2).
double default_c(double beta, double lambda);

struct PqWitness {
  std::int64_t a;
  std::int64_t b;
};

// Witness search over denominators of convergents of 4 rho and their small
// multiples. nullopt is inconclusive.
std::optional<PqWitness> pq_search_convergents(double rho, const PqWindow& w);
// Every b in the window. Exact.
std::optional<PqWitness> pq_search_exhaustive(double rho, const PqWindow& w);
// Convergents first, exhaustive fallback. nullopt means rho is not in P_q.
std::optional<PqWitness> pq_member(double rho, const PqWindow& w);

// P_q as a union of closed intervals (closure of the open union).
// Throws WindowTooLarge past kMaxPqIntervals pieces.
IntervalSet pq_intervals(const PqWindow& w);
double pq_measure_exact(const PqWindow& w);
// Midpoint sampling of [0, 1/2] at n_samples points.
double pq_measure_sampled(const PqWindow& w, std::size_t n_samples);

// X = {E in sigma : rho_bar(E) in P_q}, one pullback per sigma component.
IntervalSet build_X(const BandSpectrum& spec, const PqWindow& w);
IntervalSet build_X(const BandSpectrum& spec, double c);

}  // namespace amo
