#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "amo/sl2.hpp"

namespace amo::testing {

// Random SL(2,R) element R_s D(e^t) R_u with t in [-t_max, t_max].
inline Mat2R random_sl2(std::mt19937_64& rng, double t_max = 2.0) {
  std::uniform_real_distribution<double> turn(0.0, 1.0);
  std::uniform_real_distribution<double> stretch(-t_max, t_max);
  const double e = std::exp(stretch(rng));
  return rotation(turn(rng)) * Mat2R(e, 0.0, 0.0, 1.0 / e) * rotation(turn(rng));
}

inline HPoint random_hpoint(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  std::uniform_real_distribution<double> logy(-2.0, 2.0);
  return {x(rng), std::exp(logy(rng))};
}

inline double max_entry_diff(const Mat2& l, const Mat2& r) {
  return std::max({std::abs(l.a - r.a), std::abs(l.b - r.b), std::abs(l.c - r.c), std::abs(l.d - r.d)});
}

}  // namespace amo::testing
