#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "amo/errors.hpp"
#include "amo/sl2.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amo;
using amo::testing::random_hpoint;
using amo::testing::random_sl2;
using doctest::Approx;

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(Mat2R(2.0, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HPoint(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HPoint(1.0, -1.0), std::invalid_argument);
  const Mat2R r = Mat2R::renormalized(Mat2{2.0, 0.0, 0.0, 2.0});
  CHECK(r.det() == Approx(1.0).epsilon(1e-15));
  CHECK(r.a() == Approx(1.0));
  CHECK_THROWS_AS(Mat2R::renormalized(Mat2{0.0, 1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("moebius_act examples") {
  const HPoint z = moebius_act(identity(), HPoint{1.0, 2.0});
  CHECK(z.x() == 1.0);
  CHECK(z.y() == 2.0);

  const HPoint w = moebius_act(Mat2R(0.0, -1.0, 1.0, 0.0), HPoint::i());
  CHECK(w.x() == Approx(0.0));
  CHECK(w.y() == Approx(1.0));

  const HPoint s = moebius_act(Mat2R(2.0, 0.0, 0.0, 0.5), HPoint::i());
  CHECK(s.x() == Approx(0.0));
  CHECK(s.y() == Approx(4.0));
}

TEST_CASE("phi and Hilbert-Schmidt examples") {
  CHECK(phi(HPoint::i()) == 1.0);
  CHECK(phi(HPoint{0.0, 2.0}) == Approx(1.25));
  CHECK(phi(HPoint{1.0, 1.0}) == Approx(1.5));

  CHECK(hs_norm_sq(identity()) == 2.0);
  CHECK(hs_norm_sq(rotation(0.137)) == Approx(2.0).epsilon(1e-15));
  CHECK(hs_norm_sq(Mat2R(2.0, 0.0, 0.0, 0.5)) == Approx(4.25));
}

TEST_CASE("elliptic_data examples") {
  const auto rot = elliptic_data(rotation(1.0 / 6.0));
  CHECK(rot.rho == Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(rot.fixed_point.x() == Approx(0.0));
  CHECK(rot.fixed_point.y() == Approx(1.0).epsilon(1e-14));
  CHECK(phi(rot.fixed_point) == Approx(1.0));
  CHECK(rot.epsilon == 1);

  // z^2 - z + 1 = 0 gives (1 + i sqrt 3)/2.
  const Mat2R m(1.0, -1.0, 1.0, 0.0);
  const auto e = elliptic_data(m);
  CHECK(e.rho == Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(e.fixed_point.x() == Approx(0.5));
  CHECK(e.fixed_point.y() == Approx(std::sqrt(3.0) / 2.0));
  CHECK(phi(e.fixed_point) == Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(elliptic_fixed_point_phi(3.0, e.rho) == Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));

  const auto quarter = elliptic_data(Mat2R(0.0, -1.0, 1.0, 0.0));
  CHECK(quarter.rho == Approx(0.25));
  CHECK(quarter.fixed_point.y() == Approx(1.0));

  CHECK_THROWS_AS(elliptic_data(Mat2R(2.0, 0.0, 0.0, 0.5)), NotElliptic);
  CHECK_THROWS_AS(elliptic_data(Mat2R(1.0, 1.0, 0.0, 1.0)), NotElliptic);
  CHECK_THROWS_AS(elliptic_data(Mat2R(-1.0, 0.0, 1e-3, -1.0)), NotElliptic);
}

TEST_CASE("transport_to examples") {
  CHECK(amo::testing::max_entry_diff(transport_to(HPoint::i()).mat(), identity().mat()) == 0.0);
  CHECK(amo::testing::max_entry_diff(transport_to(HPoint{0.0, 4.0}).mat(), Mat2{2.0, 0.0, 0.0, 0.5}) < 1e-15);
  CHECK(amo::testing::max_entry_diff(transport_to(HPoint{1.0, 1.0}).mat(), Mat2{1.0, 1.0, 0.0, 1.0}) < 1e-15);
}

TEST_CASE("hyperbolic_dist examples") {
  CHECK(hyperbolic_dist(HPoint::i(), HPoint{0.0, std::numbers::e}) == Approx(1.0).epsilon(1e-14));
  CHECK(hyperbolic_dist(HPoint{0.3, 0.7}, HPoint{0.3, 0.7}) == 0.0);
  // arcosh(1 + |z - w|^2 / (2 Im z Im w)) = arcosh(3/2)
  const double d = hyperbolic_dist(HPoint::i(), HPoint{1.0, 1.0});
  CHECK(d == Approx(std::acosh(1.5)).epsilon(1e-14));
  CHECK(d >= std::log(1.5));
}

TEST_CASE("midpoint_triple examples") {
  const auto t1 = midpoint_triple(identity(), 1.0);
  CHECK(phi(t1.z1) + phi(t1.z2) == Approx(2.0 * phi(t1.z3)));
  const auto t2 = midpoint_triple(identity(), 2.0);
  CHECK(phi(t2.z1) + phi(t2.z2) == Approx(2.5));
  CHECK(t2.factor == Approx(2.5));
  CHECK_THROWS_AS(midpoint_triple(identity(), 0.0), std::invalid_argument);

  std::mt19937_64 rng(7);
  const Mat2R a = random_sl2(rng);
  const auto t3 = midpoint_triple(a, 3.0);
  CHECK((phi(t3.z1) + phi(t3.z2)) / t3.factor == Approx(phi(t3.z3)).epsilon(1e-12));
}

TEST_CASE("property: phi(A i) = ||A||^2 / 2") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const Mat2R a = random_sl2(rng);
    const double lhs = phi(moebius_act(a, HPoint::i()));
    REQUIRE(std::abs(lhs - hs_norm_sq(a) / 2.0) <= 1e-9 * lhs);
  }
}

TEST_CASE("property: rotation invariance of phi") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> turn(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const HPoint z = random_hpoint(rng);
    const double v = phi(moebius_act(rotation(turn(rng)), z));
    REQUIRE(std::abs(v - phi(z)) <= 1e-10 * phi(z));
  }
}

TEST_CASE("property: ln phi is 1-Lipschitz") {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 1000; ++n) {
    const HPoint z = random_hpoint(rng);
    const HPoint w = random_hpoint(rng);
    REQUIRE(std::abs(std::log(phi(z)) - std::log(phi(w))) <= hyperbolic_dist(z, w) + 1e-12);
  }
}

TEST_CASE("property: elliptic fixed point consistency") {
  std::mt19937_64 rng(14);
  int checked = 0;
  while (checked < 500) {
    const Mat2R a = random_sl2(rng, 1.0);
    if (std::abs(a.trace()) >= 1.99) continue;
    ++checked;
    const auto e = elliptic_data(a);
    REQUIRE(hyperbolic_dist(moebius_act(a, e.fixed_point), e.fixed_point) < 1e-7);
    REQUIRE(2.0 * std::cos(2.0 * std::numbers::pi * e.rho) == Approx(a.trace()).epsilon(1e-9));
    const double direct = phi(e.fixed_point);
    REQUIRE(std::abs(elliptic_fixed_point_phi(hs_norm_sq(a), e.rho) - direct) <= 1e-8 * direct);
    REQUIRE(direct <= elliptic_fixed_point_phi_bound(hs_norm_sq(a), e.rho) * (1.0 + 1e-12));
    const Mat2R b = transport_to(e.fixed_point);
    const Mat2R conj = b.inverse() * a * b;
    REQUIRE(amo::testing::max_entry_diff(conj.mat(), rotation(e.epsilon * e.rho).mat()) < 1e-8);
  }
}

TEST_CASE("property: transport_to") {
  std::mt19937_64 rng(15);
  for (int n = 0; n < 200; ++n) {
    const HPoint z = random_hpoint(rng);
    const Mat2R b = transport_to(z);
    const HPoint w = moebius_act(b, HPoint::i());
    REQUIRE(w.x() == Approx(z.x()).epsilon(1e-14));
    REQUIRE(w.y() == Approx(z.y()).epsilon(1e-14));
    REQUIRE(hs_norm_sq(b) == Approx(2.0 * phi(z)).epsilon(1e-13));
  }
}

TEST_CASE("property: midpoint factor and inequality") {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> logk(-3.0, 3.0);
  for (int n = 0; n < 1000; ++n) {
    const Mat2R a = random_sl2(rng);
    const auto t = midpoint_triple(a, std::exp(logk(rng)));
    const double sum = phi(t.z1) + phi(t.z2);
    REQUIRE(std::abs(sum - t.factor * phi(t.z3)) <= 1e-9 * sum);
    REQUIRE(sum - 2.0 * phi(t.z3) >= -1e-10 * sum);
    REQUIRE(hyperbolic_dist(t.z1, t.z3) == Approx(hyperbolic_dist(t.z2, t.z3)).epsilon(1e-8));
  }
}
