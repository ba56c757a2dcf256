#include <cmath>
#include <numbers>
#include <random>

#include "amo/cocycle.hpp"
#include "amo/parallel.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amo;
using doctest::Approx;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

Mat2 exact_product(const CocycleParams& p, double theta, int n) {
  Mat2 out;
  for (int j = 0; j < n; ++j) out = step_matrix(p, p.alpha.phase(theta, j)).mat() * out;
  return out;
}

Mat2 reconstruct(const ScaledProduct& s) { return std::exp(s.log_scale()) * s.mat(); }

}  // namespace

TEST_CASE("Frequency reduction and phases") {
  const Frequency f = Frequency::rational(6, 10);
  CHECK(f.p() == 3);
  CHECK(f.q() == 5);
  CHECK(f.is_rational());
  CHECK_THROWS_AS(Frequency::rational(1, 0), std::invalid_argument);
  CHECK(f.phase(0.0, 5) == 0.0);
  CHECK(f.phase(0.1, 2) == Approx(0.3));
  CHECK(f.phase(0.0, -1) == Approx(0.4));
  const Frequency g = Frequency::perturbed(1, 3, 1e-12);
  CHECK(!g.is_rational());
  CHECK(g.phase(0.0, 3) == Approx(3e-12).epsilon(1e-6));
}

TEST_CASE("step_matrix examples") {
  const auto r = Frequency::rational(0, 1);
  const Mat2 expect{0.0, -1.0, 1.0, 0.0};
  CHECK(testing::max_entry_diff(step_matrix({0.0, r, 0.0}, 0.0).mat(), expect) == 0.0);
  CHECK(testing::max_entry_diff(step_matrix({0.5, r, 1.0}, 0.0).mat(), expect) == 0.0);
  CHECK(testing::max_entry_diff(step_matrix({1.0, r, 0.0}, 0.25).mat(), expect) < 1e-15);
  CHECK(step_matrix({0.7, r, 0.3}, 0.123).det() == 1.0);
}

TEST_CASE("product examples") {
  const CocycleParams half{0.5, Frequency::rational(1, 2), 1.0};
  const auto id = cocycle_product(half, 0.3, 0);
  CHECK(id.log_scale() == 0.0);
  CHECK(testing::max_entry_diff(id.mat(), Mat2{}) == 0.0);

  // (E - 2 lambda)(E + 2 lambda) - 2 at theta = 0.
  const auto two = cocycle_product(half, 0.0, 2);
  CHECK(two.trace() == Approx((1.0 - 1.0) * (1.0 + 1.0) - 2.0));
  CHECK(two.trace() == Approx(-2.0));

  const CocycleParams free{0.0, Frequency::real(kGolden), 3.0};
  Mat2 m{3.0, -1.0, 1.0, 0.0}, pow;
  for (int j = 0; j < 10; ++j) pow = m * pow;
  const Mat2 got = reconstruct(cocycle_product(free, 0.77, 10));
  CHECK(testing::max_entry_diff(got, pow) < 1e-9 * std::sqrt(pow.hs_norm_sq()));
}

TEST_CASE("lyapunov examples") {
  const CocycleParams free3{0.0, Frequency::real(kGolden), 3.0};
  const double l = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  CHECK(std::abs(lyapunov_avg(free3, 1000, 4) - l) < 2.0 / 1000);
  CHECK(std::abs(lyapunov_sup(free3, 1000, 4) - l) < 2.0 / 1000);

  const CocycleParams free0{0.0, Frequency::real(kGolden), 0.0};
  // ||R^n||_HS = sqrt 2, so the estimate is ln(2)/(2n).
  CHECK(lyapunov_avg(free0, 1000, 4) == Approx(std::log(2.0) / 2000.0));
  CHECK(std::abs(lyapunov_avg(free0, 400000, 1)) < 1e-6);
  // Single step [[0,-1],[1,0]] has HS norm sqrt 2.
  CHECK(lyapunov_sup(free0, 1, 1) == Approx(0.5 * std::log(2.0)));

  // 6765/10946 is a golden convergent; E = 0 lies in its spectrum.
  const CocycleParams amo{0.5, Frequency::rational(6765, 10946), 0.0};
  CHECK(lyapunov_avg(amo, 10000, 8) <= 0.05);
  CHECK(lyapunov_sup(amo, 10000, 8) <= 0.05);
}

TEST_CASE("property: cocycle law") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(0, 40);
  for (int t = 0; t < 200; ++t) {
    const CocycleParams p{0.1 + 2.0 * u(rng), Frequency::real(u(rng)), -4.0 + 8.0 * u(rng)};
    const double theta = u(rng);
    const int n = len(rng), m = len(rng);
    const Mat2 whole = reconstruct(cocycle_product(p, theta, n + m));
    const Mat2 split = reconstruct(cocycle_product(p, p.alpha.phase(theta, n), m) * cocycle_product(p, theta, n));
    REQUIRE(testing::max_entry_diff(whole, split) <= 1e-9 * std::sqrt(whole.hs_norm_sq()));
    const Mat2 direct = exact_product(p, theta, n + m);
    REQUIRE(testing::max_entry_diff(whole, direct) <= 1e-9 * std::sqrt(direct.hs_norm_sq()));
  }
}

TEST_CASE("property: determinant of long products") {
  // Inside the spectrum the product stays well conditioned and its
  // determinant is observable.
  const CocycleParams ell{0.5, Frequency::rational(2, 5), 0.0};
  const auto e = cocycle_product(ell, 0.1, 1000000);
  CHECK(std::exp(2.0 * e.log_scale()) * e.mat().det() == Approx(1.0).epsilon(1e-9));

  // With growth e^{L n} the mantissa is numerically rank one; only the
  // scale and norm bounds are meaningful.
  const CocycleParams p{1.5, Frequency::real(kGolden), 0.3};
  const auto prod = cocycle_product(p, 0.1, 1000000);
  const auto short_prod = cocycle_product(p, 0.1, 8);
  CHECK(std::exp(2.0 * short_prod.log_scale()) * short_prod.mat().det() == Approx(1.0).epsilon(1e-9));
  const double hs = prod.mat().hs_norm_sq();
  CHECK(hs >= 2.0 * (1.0 - 1e-12));
  CHECK(hs <= 16.0);
  // lambda > 1 forces L >= ln lambda.
  CHECK(prod.log_norm() / 1e6 >= std::log(1.5) - 1e-3);
}

TEST_CASE("property: avg <= sup and sampling stability") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const CocycleParams p{2.0 * u(rng), Frequency::real(u(rng)), -3.0 + 6.0 * u(rng)};
    REQUIRE(lyapunov_avg(p, 50, 16) <= lyapunov_sup(p, 50, 16) + 1e-12);
  }
  const CocycleParams smooth{0.5, Frequency::rational(377, 610), 0.1};
  const double a = lyapunov_avg(smooth, 610, 32);
  const double b = lyapunov_avg(smooth, 610, 64);
  CHECK(std::abs(a - b) < 1e-3);
}

TEST_CASE("thread count does not change results") {
  const CocycleParams p{0.9, Frequency::real(kGolden), 0.4};
  set_thread_count(1);
  const double one = lyapunov_avg(p, 500, 37);
  set_thread_count(4);
  const double four = lyapunov_avg(p, 500, 37);
  set_thread_count(1);
  CHECK(one == four);
}
