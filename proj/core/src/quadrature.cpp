#include "amo/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace amo::quad {

namespace {

Rule make_gauss_legendre(std::size_t n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(make_gauss_legendre(n));
  return *slot;
}

Result edge_regular(const EdgeIntegrand& f, double a, double b, double rel_tol,
                    std::size_t n0, std::size_t n_max) {
  const double len = b - a;
  if (!(len > 0.0)) return {0.0, 0, true};
  auto apply = [&](std::size_t n) {
    const Rule& rule = gauss_legendre(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double s = 0.5 * (rule.nodes[k] + 1.0);
      const double sh = std::sin(0.5 * std::numbers::pi * s);
      const double ch = std::cos(0.5 * std::numbers::pi * s);
      const double from_a = len * sh * sh;
      const double to_b = len * ch * ch;
      const double u = s < 0.5 ? a + from_a : b - to_b;
      const double jac = len * std::numbers::pi * sh * ch;  // du/ds
      sum += 0.5 * rule.weights[k] * jac * f(u, from_a, to_b);
    }
    return sum;
  };
  std::size_t n = n0;
  double prev = apply(n);
  std::size_t evals = n;
  while (2 * n <= n_max) {
    n *= 2;
    const double cur = apply(n);
    evals += n;
    if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) return {cur, evals, true};
    prev = cur;
  }
  return {prev, evals, false};
}

Result periodic_mean(const std::function<double(double)>& f, std::size_t m0, double rel_tol,
                     std::size_t m_max) {
  if (m0 == 0) throw std::invalid_argument("periodic_mean: m0 must be positive");
  std::size_t m = m0;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) sum += f(static_cast<double>(j) / static_cast<double>(m));
  double prev = sum / static_cast<double>(m);
  std::size_t evals = m;
  while (2 * m <= m_max) {
    // Refinement reuses the previous samples and adds the odd points.
    for (std::size_t j = 0; j < m; ++j)
      sum += f((static_cast<double>(j) + 0.5) / static_cast<double>(m));
    evals += m;
    m *= 2;
    const double cur = sum / static_cast<double>(m);
    if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) return {cur, evals, true};
    prev = cur;
  }
  return {prev, evals, false};
}

}  // namespace amo::quad
