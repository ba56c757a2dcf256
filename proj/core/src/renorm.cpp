#include "amo/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "amo/errors.hpp"
#include "amo/parallel.hpp"

namespace amo {

namespace {

double hs_distance(const Mat2& l, const Mat2& r) { return std::sqrt((l - r).hs_norm_sq()); }

void check_experiment(const OrbitExperiment& ex) {
  check_fraction(ex.p, ex.q, std::numeric_limits<std::int64_t>::max());
  if (ex.alpha.p() % ex.q != ex.p % ex.q || ex.alpha.q() != ex.q)
    throw std::invalid_argument("orbit: alpha must be p/q plus an offset");
  if (!(std::abs(ex.alpha.offset()) < 1.0 / (static_cast<double>(ex.q) * static_cast<double>(ex.q))))
    throw std::invalid_argument("orbit: |alpha - p/q| must be below 1/q^2");
  if (ex.b < 1) throw std::invalid_argument("orbit: b must be >= 1");
  if (ex.window && (ex.b < ex.window->b_lo || ex.b > ex.window->b_hi))
    throw std::invalid_argument("orbit: b = " + std::to_string(ex.b) + " lies outside the P_q window");
  if (ex.a && (*ex.a % 2 == 0 || *ex.a < 1)) throw std::invalid_argument("orbit: witness a must be odd and positive");
  if (ex.b > kOrbitStepBudget / ex.q)
    throw StepBudgetExceeded("orbit: bq = " + std::to_string(ex.b) + "*" + std::to_string(ex.q) +
                             " exceeds the step budget");
}

Mat2 orbit_product(const OrbitExperiment& ex) {
  const ScaledProduct prod = cocycle_product({ex.lambda, ex.alpha, ex.energy}, ex.theta, ex.b * ex.q);
  return std::exp(prod.log_scale()) * prod.mat();
}

}  // namespace

OrbitResult orbit_deviation(const OrbitExperiment& ex) {
  check_experiment(ex);
  const Mat2R aq = period_matrix(ex.lambda, ex.p, ex.q, ex.energy, ex.theta);
  const EllipticData ed = elliptic_data(aq);
  const Mat2R b = transport_to(ed.fixed_point);
  const Mat2 conj = b.inverse().mat() * orbit_product(ex) * b.mat();
  const double d_plus = hs_distance(conj, rotation(0.25).mat());
  const double d_minus = hs_distance(conj, rotation(-0.25).mat());
  OrbitResult r{std::min(d_plus, d_minus), d_plus <= d_minus ? 1 : -1, ed.epsilon, std::nullopt};
  if (ex.a) r.predicted = (*ex.a % 4 == 1) ? ed.epsilon : -ed.epsilon;
  return r;
}

double rotation_sanity(double lambda, std::int64_t p, std::int64_t q, double energy, double theta) {
  const Mat2R aq = period_matrix(lambda, p, q, energy, theta);
  const EllipticData ed = elliptic_data(aq);
  const Mat2R b = transport_to(ed.fixed_point);
  return hs_distance((b.inverse() * aq * b).mat(), rotation(ed.epsilon * ed.rho).mat());
}

double energy_for_rotation(const BandSpectrum& spec, int k, double theta, double target_rho) {
  const Band& band = spec.band(k);
  if (!band.has_inner()) throw std::invalid_argument("energy_for_rotation: band has no sigma component");
  auto rho = [&](double e) { return rho_of_theta(spec.lambda(), spec.p(), spec.q(), e, theta); };
  double lo = band.inner_lo, hi = band.inner_hi;
  const double r_lo = rho(lo), r_hi = rho(hi);
  if (!(target_rho >= std::min(r_lo, r_hi) && target_rho <= std::max(r_lo, r_hi)))
    throw std::invalid_argument("energy_for_rotation: target rotation number outside the band's range");
  const bool rising = r_lo < r_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((rho(mid) < target_rho) == rising)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

AveraResult avera_check(const OrbitExperiment& ex, std::int64_t p_fine, std::int64_t q_fine) {
  check_experiment(ex);
  const OrbitResult orbit = orbit_deviation(ex);
  const HPoint m = fixed_point_field(ex.lambda, ex.p, ex.q, ex.energy, ex.theta);
  const double theta_far = ex.alpha.phase(ex.theta, ex.b * ex.q);
  const HPoint mt = fixed_point_field(ex.lambda, p_fine, q_fine, ex.energy, ex.theta);
  const HPoint mt_far = fixed_point_field(ex.lambda, p_fine, q_fine, ex.energy, theta_far);

  AveraResult r{};
  r.which = orbit.which;
  r.rhs = phi(m);
  r.lhs = 0.5 * (phi(mt) + phi(mt_far));
  r.ratio = r.lhs / r.rhs;
  r.short_circuit = phi(mt) > 2.0 * r.rhs;

  const Mat2R b = transport_to(m);
  const Mat2R turn = b * rotation(0.25 * orbit.which) * b.inverse();
  const HPoint image = moebius_act(turn, mt);
  r.eq1_defect = std::abs(std::log(phi(mt_far)) - std::log(phi(image)));
  r.eq2_ratio = (phi(mt) + phi(image)) / (2.0 * r.rhs);
  return r;
}

TwoScaleReport two_scale_experiment(double lambda, double beta, int theta_samples) {
  if (theta_samples < 1) throw std::invalid_argument("two_scale_experiment: theta_samples must be >= 1");
  const ContinuedFraction cf = build_liouville_max(beta);
  if (cf.size() < 2) throw std::invalid_argument("two_scale_experiment: frequency has too few convergents");
  const std::size_t kc = cf.size() - 1;
  TwoScaleReport r{};
  r.lambda = lambda;
  r.beta = beta;
  r.p = cf.p(kc);
  r.q = cf.q(kc);
  r.p_fine = cf.p(kc + 1);
  r.q_fine = cf.q(kc + 1);
  r.theta_samples = theta_samples;
  r.window = make_window(r.q, default_c(beta, lambda));
  const BandSpectrum spec = band_spectrum(lambda, r.p, r.q);
  const IntervalSet x = build_X(spec, r.window);
  const double amp_fine = chambers_amplitude(lambda, r.q_fine);

  std::vector<double> energies;
  for (const auto& piece : x.intervals()) {
    const double e = 0.5 * (piece.lo + piece.hi);
    if (std::abs(chambers_a0(lambda, r.p_fine, r.q_fine, e)) < 2.0 - amp_fine) energies.push_back(e);
  }
  r.energies = energies.size();

  struct Row {
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_dev = 0.0;
    std::size_t mismatches = 0, short_circuits = 0;
  };
  const Frequency alpha = cf.frequency(kc);
  const auto rows = parallel_map(energies.size(), [&](std::size_t i) {
    Row row;
    const auto wit = pq_member(rho_bar(lambda, r.p, r.q, energies[i]), r.window);
    if (!wit) throw std::logic_error("two_scale_experiment: X energy without a P_q witness");
    for (int t = 0; t < theta_samples; ++t) {
      const OrbitExperiment ex{lambda, r.p, r.q, alpha, energies[i], wit->b,
                               static_cast<double>(t) / theta_samples, wit->a, r.window};
      const OrbitResult o = orbit_deviation(ex);
      const AveraResult a = avera_check(ex, r.p_fine, r.q_fine);
      row.min_ratio = std::min(row.min_ratio, a.ratio);
      row.max_dev = std::max(row.max_dev, o.deviation);
      row.mismatches += o.mismatch() ? 1 : 0;
      row.short_circuits += a.short_circuit ? 1 : 0;
    }
    return row;
  });
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    r.min_ratio = std::min(r.min_ratio, row.min_ratio);
    r.max_deviation = std::max(r.max_deviation, row.max_dev);
    r.mismatches += row.mismatches;
    r.short_circuits += row.short_circuits;
  }
  return r;
}

double midpoint_collinearity(const Mat2R& b, const HPoint& z) {
  const HPoint z2 = moebius_act(b * rotation(0.25) * b.inverse(), z);
  const HPoint z3 = moebius_act(b, HPoint::i());
  const double d13 = hyperbolic_dist(z, z3);
  const double d23 = hyperbolic_dist(z2, z3);
  const double d12 = hyperbolic_dist(z, z2);
  return std::abs(d13 - d23) + std::abs(d12 - d13 - d23);
}

OqReport oq_report(const BandSpectrum& spec, const IntervalSet& x, int energies_per_piece, int theta_samples) {
  if (energies_per_piece < 1 || theta_samples < 1) throw std::invalid_argument("oq_report: sample counts must be >= 1");
  std::vector<double> energies;
  for (const auto& piece : x.intervals()) {
    for (int j = 0; j < energies_per_piece; ++j)
      energies.push_back(piece.lo + (piece.hi - piece.lo) * (j + 0.5) / energies_per_piece);
  }
  const double qd = static_cast<double>(spec.q());
  const auto sups = parallel_map(energies.size(), [&](std::size_t i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < theta_samples; ++t) {
      const double theta = static_cast<double>(t) / theta_samples;
      const HPoint m = fixed_point_field(spec.lambda(), spec.p(), spec.q(), energies[i], theta);
      best = std::max(best, std::log(phi(m)) / qd);
    }
    return best;
  });
  OqReport r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN(), energies.size()};
  for (std::size_t i = 0; i < sups.size(); ++i) {
    if (sups[i] > r.sup_ratio) {
      r.sup_ratio = sups[i];
      r.energy_at_sup = energies[i];
    }
  }
  return r;
}

}  // namespace amo
