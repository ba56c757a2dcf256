#pragma once

// Conjugated orbit products near a rational frequency and the
// midpoint-averaging estimate, with the fine-scale periodic fixed point
// standing in for the abstract invariant section m~.

#include <cstdint>
#include <optional>

#include "amo/cocycle.hpp"
#include "amo/diophantine.hpp"
#include "amo/periodic.hpp"
#include "amo/sl2.hpp"

namespace amo {

inline constexpr std::int64_t kOrbitStepBudget = 10000000;

struct OrbitExperiment {
  double lambda;
  std::int64_t p;
  std::int64_t q;
  Frequency alpha;  // true frequency, alpha.p()/alpha.q() == p/q
  double energy;    // interior of sigma_{lambda, p/q}
  std::int64_t b;
  double theta;
  std::optional<std::int64_t> a;       // witness numerator, odd
  std::optional<PqWindow> window;      // b must lie in it when given
};

struct OrbitResult {
  double deviation;  // ||B^-1 A~_{bq} B - R||_HS for the nearer R
  int which;         // +1 for R_{1/4}, -1 for R_{-1/4}
  int epsilon;       // orientation of A_q(theta) at its fixed point
  std::optional<int> predicted;  // from a mod 4 and epsilon
  [[nodiscard]] bool mismatch() const { return predicted && *predicted != which; }
};

// Throws std::invalid_argument on violated preconditions, NotElliptic when
// E is not interior to sigma, StepBudgetExceeded when bq > kOrbitStepBudget.
OrbitResult orbit_deviation(const OrbitExperiment& ex);

// ||B^-1 A_q B - R_{epsilon rho(theta)}||_HS at alpha = p/q.
double rotation_sanity(double lambda, std::int64_t p, std::int64_t q, double energy, double theta);

// Energy in sigma component of band k where rho(theta) equals target.
// Throws std::invalid_argument when target is outside the component's range.
double energy_for_rotation(const BandSpectrum& spec, int k, double theta, double target_rho);

struct AveraResult {
  double lhs;    // (phi(m~(theta)) + phi(m~(theta + bq alpha))) / 2
  double rhs;    // phi(m(theta))
  double ratio;  // lhs / rhs
  bool short_circuit;  // phi(m~(theta)) > 2 phi(m(theta))
  double eq1_defect;   // |ln phi(m~(theta + bq alpha)) - ln phi(B R B^-1 m~(theta))|
  double eq2_ratio;    // (phi(m~) + phi(B R B^-1 m~)) / (2 phi(m)), >= 1
  int which;           // rotation R used in the chain
};

// m~ is the fixed point of the period-q_fine cocycle at p_fine/q_fine.
AveraResult avera_check(const OrbitExperiment& ex, std::int64_t p_fine, std::int64_t q_fine);

// Coarse scale: the second-to-last convergent of a built Liouville
// frequency; fine scale: the last one, which equals alpha. Energies are the
// midpoints of the coarse X pieces that are elliptic at the fine scale.
struct TwoScaleReport {
  double lambda;
  double beta;
  std::int64_t p, q, p_fine, q_fine;
  PqWindow window;
  std::size_t energies;
  int theta_samples;
  double min_ratio;
  double max_deviation;
  std::size_t mismatches;
  std::size_t short_circuits;
};
TwoScaleReport two_scale_experiment(double lambda, double beta, int theta_samples = 32);

// Geodesic and midpoint defect of z, B R_{1/4} B^-1 z, B i.
double midpoint_collinearity(const Mat2R& b, const HPoint& z);

// sup over sampled E in X and theta of ln phi(m(theta)) / q.
struct OqReport {
  double sup_ratio;
  double energy_at_sup;
  std::size_t energies;
};
OqReport oq_report(const BandSpectrum& spec, const IntervalSet& x, int energies_per_piece = 3,
                   int theta_samples = 256);

}  // namespace amo
