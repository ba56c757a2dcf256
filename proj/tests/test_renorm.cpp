#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "amo/errors.hpp"
#include "amo/renorm.hpp"
#include "test_support.hpp"

using namespace amo;

namespace {

bool elliptic_at(double lambda, std::int64_t p, std::int64_t q, double e, double theta) {
  return std::abs(period_matrix(lambda, p, q, e, theta).mat().trace()) < 2.0 - 1e-6;
}

// Energy in band k with rho(theta) = a / (4b), if the band reaches it.
std::optional<double> rigged_energy(const BandSpectrum& spec, int k, double theta, std::int64_t a, std::int64_t b) {
  try {
    return energy_for_rotation(spec, k, theta, static_cast<double>(a) / (4.0 * static_cast<double>(b)));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("rotation sanity at rational frequency") {
  int checked = 0;
  for (auto [p, q] : {std::pair<std::int64_t, std::int64_t>{1, 3}, {2, 5}, {3, 8}}) {
    const auto spec = band_spectrum(0.5, p, q);
    for (const auto& band : spec.bands()) {
      if (!band.has_inner()) continue;
      for (int j = 1; j < 8; ++j) {
        const double e = band.inner_lo + (band.inner_hi - band.inner_lo) * j / 8.0;
        for (double theta : {0.0, 0.13, 0.37, 0.81}) {
          if (!elliptic_at(0.5, p, q, e, theta)) continue;
          CHECK(rotation_sanity(0.5, p, q, e, theta) < 1e-7);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("energy_for_rotation hits the target") {
  const auto spec = band_spectrum(0.5, 2, 5);
  const auto e = rigged_energy(spec, 1, 0.13, 3, 5);
  REQUIRE(e);
  CHECK(rho_of_theta(0.5, 2, 5, *e, 0.13) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK_THROWS_AS(energy_for_rotation(spec, 1, 0.13, 0.9), std::invalid_argument);
}

TEST_CASE("orbit at rational frequency with rho = 1/8, b = 2") {
  // A_q^2 is conjugate to R_{2 eps / 8} = R_{eps / 4}: an exact quarter turn.
  int rigged = 0;
  for (auto [p, q] : {std::pair<std::int64_t, std::int64_t>{1, 3}, {2, 5}, {3, 7}}) {
    const auto spec = band_spectrum(0.5, p, q);
    for (int k = 1; k <= spec.q(); ++k) {
      const auto e = rigged_energy(spec, k, 0.21, 1, 2);
      if (!e) continue;
      const OrbitExperiment ex{0.5, p, q, Frequency::rational(p, q), *e, 2, 0.21, 1, std::nullopt};
      const auto r = orbit_deviation(ex);
      CHECK(r.deviation < 1e-8);
      CHECK_FALSE(r.mismatch());
      CHECK(r.which == r.epsilon);
      ++rigged;
    }
  }
  CHECK(rigged >= 3);
}

TEST_CASE("orbit deviation shrinks with the frequency offset") {
  const auto spec = band_spectrum(0.5, 2, 5);
  const double theta = 0.13;
  int bands = 0;
  for (int k = 1; k <= 5; ++k) {
    const auto e = rigged_energy(spec, k, theta, 3, 5);
    if (!e) continue;
    ++bands;
    double prev = INFINITY;
    for (double d : {0.0, 1e-8, 1e-10, 1e-12}) {
      const OrbitExperiment ex{0.5, 2, 5, Frequency::perturbed(2, 5, d), *e, 5, theta, 3, std::nullopt};
      const auto r = orbit_deviation(ex);
      CHECK_FALSE(r.mismatch());
      if (d == 0.0) {
        CHECK(r.deviation < 1e-8);
      } else {
        CHECK(r.deviation < prev);
        prev = r.deviation;
      }
    }
    // 1e-8 offset over 25 steps moves the phase by 2.5e-7 turns.
    const OrbitExperiment ex{0.5, 2, 5, Frequency::perturbed(2, 5, 1e-8), *e, 5, theta, 3, std::nullopt};
    CHECK(orbit_deviation(ex).deviation < 1e-4);
  }
  CHECK(bands >= 2);
}

TEST_CASE("orbit preconditions") {
  const auto spec = band_spectrum(0.5, 2, 5);
  const double e = *rigged_energy(spec, 1, 0.13, 3, 5);
  const auto w = explicit_window(5, 3, 6);
  const OrbitExperiment ok{0.5, 2, 5, Frequency::rational(2, 5), e, 5, 0.13, 3, w};
  CHECK_NOTHROW(orbit_deviation(ok));

  auto bad = ok;
  bad.b = 7;
  CHECK_THROWS_AS(orbit_deviation(bad), std::invalid_argument);
  bad = ok;
  bad.b = 2;
  CHECK_THROWS_AS(orbit_deviation(bad), std::invalid_argument);
  bad = ok;
  bad.a = 4;
  CHECK_THROWS_AS(orbit_deviation(bad), std::invalid_argument);
  bad = ok;
  bad.alpha = Frequency::perturbed(2, 5, 0.05);
  CHECK_THROWS_AS(orbit_deviation(bad), std::invalid_argument);
  bad = ok;
  bad.alpha = Frequency::rational(3, 5);
  CHECK_THROWS_AS(orbit_deviation(bad), std::invalid_argument);
  bad = ok;
  bad.window.reset();
  bad.b = kOrbitStepBudget;
  CHECK_THROWS_AS(orbit_deviation(bad), StepBudgetExceeded);
  bad = ok;
  bad.energy = 5.0;
  CHECK_THROWS_AS(orbit_deviation(bad), NotElliptic);
}

TEST_CASE("avera degenerate case") {
  const auto spec = band_spectrum(0.5, 2, 5);
  for (int k = 1; k <= 5; ++k) {
    const auto e = rigged_energy(spec, k, 0.13, 3, 5);
    if (!e) continue;
    const OrbitExperiment ex{0.5, 2, 5, Frequency::rational(2, 5), *e, 5, 0.13, 3, std::nullopt};
    REQUIRE(orbit_deviation(ex).deviation < 1e-9);
    const auto r = avera_check(ex, 2, 5);
    CHECK(r.ratio >= 1.0 - 1e-9);
    CHECK(r.eq1_defect < 1e-6);
    CHECK(r.eq2_ratio >= 1.0 - 1e-9);
    CHECK_FALSE(r.short_circuit);
  }
}

TEST_CASE("avera ratio whenever the orbit is a quarter turn") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int tight = 0;
  for (auto [p, q] : {std::pair<std::int64_t, std::int64_t>{1, 3}, {2, 5}, {3, 7}, {3, 8}}) {
    const auto spec = band_spectrum(0.5, p, q);
    for (int trial = 0; trial < 20; ++trial) {
      const int k = 1 + static_cast<int>(unit(rng) * static_cast<double>(q));
      const double theta = unit(rng);
      const std::int64_t b = 2 + static_cast<std::int64_t>(unit(rng) * 6.0);
      const std::int64_t a = 2 * static_cast<std::int64_t>(unit(rng) * static_cast<double>(b)) + 1;
      const auto e = rigged_energy(spec, k, theta, a, b);
      if (!e) continue;
      const OrbitExperiment ex{0.5, p, q, Frequency::rational(p, q), *e, b, theta, a, std::nullopt};
      const auto o = orbit_deviation(ex);
      if (o.deviation >= 1e-9) continue;
      ++tight;
      CHECK(avera_check(ex, p, q).ratio >= 1.0 - 1e-6);
    }
  }
  CHECK(tight >= 10);
}

TEST_CASE("avera two-scale at a q = 5 convergent") {
  // [0; 1, 4, 200]: coarse 4/5, fine 801/1001 = alpha.
  const auto cf = ContinuedFraction::from_quotients(0, {1, 4, 200}, true);
  REQUIRE(cf.q(2) == 5);
  REQUIRE(cf.q(3) == 1001);
  const auto spec = band_spectrum(0.5, cf.p(2), cf.q(2));
  const auto w = make_window(5, 0.5);
  const auto x = build_X(spec, w);
  REQUIRE_FALSE(x.empty());
  for (const auto& piece : x.intervals()) {
    const double e = 0.5 * (piece.lo + piece.hi);
    const auto wit = pq_member(rho_bar(0.5, cf.p(2), cf.q(2), e), w);
    REQUIRE(wit);
    for (int t = 0; t < 32; ++t) {
      const OrbitExperiment ex{0.5, cf.p(2), cf.q(2), cf.frequency(2), e, wit->b, t / 32.0, wit->a, w};
      CHECK(avera_check(ex, cf.p(3), cf.q(3)).ratio > 0.9);
    }
  }
}

TEST_CASE("avera two-scale on a built Liouville frequency") {
  const auto r = two_scale_experiment(0.5, 0.25);
  CHECK(r.q == 29);
  CHECK(r.q_fine == 1432);
  CHECK(r.energies >= 10);
  CHECK(r.theta_samples == 32);
  CHECK(r.min_ratio > 0.9);
  CHECK(r.mismatches == 0);
}

TEST_CASE("avera short-circuit") {
  // Golden-type pair 3/5 -> 8/13: the fixed points are far apart here.
  const OrbitExperiment ex{0.5, 3, 5, Frequency::perturbed(3, 5, 8.0 / 13.0 - 3.0 / 5.0), -1.960535, 1,
                           0.09375, std::nullopt, std::nullopt};
  const auto r = avera_check(ex, 8, 13);
  CHECK(r.short_circuit);
  CHECK(r.ratio > 1.0);
  const double mt = phi(fixed_point_field(0.5, 8, 13, ex.energy, ex.theta));
  CHECK(mt > 2.0 * r.rhs);
}

TEST_CASE("avera rejects non-elliptic fine scale") {
  const OrbitExperiment ex{0.5, 1, 3, Frequency::rational(1, 3), 5.0, 1, 0.2, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(avera_check(ex, 1, 3), NotElliptic);
}

TEST_CASE("midpoint collinearity") {
  CHECK(midpoint_collinearity(identity(), HPoint{0.0, 2.0}) < 1e-10);
  CHECK(midpoint_collinearity(identity(), HPoint::i()) == 0.0);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i)
    worst = std::max(worst, midpoint_collinearity(testing::random_sl2(rng), testing::random_hpoint(rng)));
  CHECK(worst < 1e-8);
}

TEST_CASE("phi(m) stays e^{o(q)} over X") {
  const auto cf = build_liouville_max(0.25);
  const std::size_t kc = cf.size() - 1;
  const auto spec = band_spectrum(0.5, cf.p(kc), cf.q(kc));
  const auto x = build_X(spec, default_c(0.25, 0.5));
  const auto r = oq_report(spec, x);
  CHECK(r.energies == 3 * x.size());
  CHECK(r.sup_ratio < 0.2);
  CHECK(x.contains(r.energy_at_sup));
}
