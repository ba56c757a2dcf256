#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace amo::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points (cached, thread safe).
const Rule& gauss_legendre(std::size_t n);

struct Result {
  double value;
  std::size_t evaluations;
  bool converged;
};

// Integrand for edge-regularized quadrature: receives the point u together
// with its exact distances to the ends, u - a and b - u.
using EdgeIntegrand = std::function<double(double u, double from_a, double to_b)>;

// Integral over [a, b] after the substitution u = a + (b - a)(1 - cos pi s)/2.
// The Jacobian vanishes like sqrt(u - a) and sqrt(b - u), which removes
// inverse square-root endpoint singularities. Gauss-Legendre in s with
// doubling from n0 points until successive values agree to rel_tol.
Result edge_regular(const EdgeIntegrand& f, double a, double b, double rel_tol,
                    std::size_t n0 = 16, std::size_t n_max = 4096);

// Mean of a 1-periodic function over [0, 1) by the trapezoid rule, doubling
// from m0 samples until successive means agree to rel_tol (cap m_max).
Result periodic_mean(const std::function<double(double)>& f, std::size_t m0, double rel_tol,
                     std::size_t m_max = std::size_t{1} << 20);

}  // namespace amo::quad
