#include "amo/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "amo/parallel.hpp"

namespace amo {

Frequency Frequency::rational(std::int64_t p, std::int64_t q) { return perturbed(p, q, 0.0); }

Frequency Frequency::perturbed(std::int64_t p, std::int64_t q, double offset) {
  if (q < 1) throw std::invalid_argument("Frequency: q must be >= 1");
  if (!std::isfinite(offset)) throw std::invalid_argument("Frequency: offset must be finite");
  const std::int64_t g = std::gcd(p, q);
  return {p / g, q / g, offset};
}

double Frequency::value() const {
  return static_cast<double>(p_) / static_cast<double>(q_) + offset_;
}

double Frequency::phase(double theta, std::int64_t j) const {
  __extension__ typedef __int128 i128;
  const i128 num = static_cast<i128>(j % q_) * static_cast<i128>(p_);
  std::int64_t r = static_cast<std::int64_t>(num % q_);
  if (r < 0) r += q_;
  double t = theta + static_cast<double>(r) / static_cast<double>(q_);
  if (offset_ != 0.0) t += std::fmod(static_cast<double>(j) * offset_, 1.0);
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

Mat2R step_matrix(const CocycleParams& params, double theta) {
  const double v = params.energy - 2.0 * params.lambda * std::cos(2.0 * std::numbers::pi * theta);
  return {v, -1.0, 1.0, 0.0};
}

double ScaledProduct::log_norm() const {
  return log_scale() + 0.5 * std::log(mat_.hs_norm_sq());
}

double ScaledProduct::trace() const { return std::exp(log_scale()) * mat_.trace(); }

void ScaledProduct::add_log(double v) {
  const double t = log_scale_ + v;
  if (std::abs(log_scale_) >= std::abs(v))
    log_comp_ += (log_scale_ - t) + v;
  else
    log_comp_ += (v - t) + log_scale_;
  log_scale_ = t;
}

void ScaledProduct::rescale() {
  const double n2 = mat_.hs_norm_sq();
  if (n2 > 16.0 || (n2 < 2.0 && log_scale() > 0.0)) {
    const double s = std::sqrt(n2 / 2.0);
    mat_ = (1.0 / s) * mat_;
    add_log(std::log(s));
  }
}

void ScaledProduct::push(const Mat2& step) {
  mat_ = step * mat_;
  rescale();
}

ScaledProduct operator*(const ScaledProduct& later, const ScaledProduct& earlier) {
  ScaledProduct out;
  out.mat_ = later.mat_ * earlier.mat_;
  out.log_scale_ = later.log_scale_;
  out.log_comp_ = later.log_comp_;
  out.add_log(earlier.log_scale_);
  out.log_comp_ += earlier.log_comp_;
  out.rescale();
  return out;
}

ScaledProduct cocycle_product(const CocycleParams& params, double theta, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("cocycle_product: n must be >= 0");
  ScaledProduct prod;
  for (std::int64_t j = 0; j < n; ++j)
    prod.push(step_matrix(params, params.alpha.phase(theta, j)).mat());
  return prod;
}

namespace {

std::vector<double> log_norm_grid(const CocycleParams& params, std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1) throw std::invalid_argument("lyapunov: n and m_samples must be >= 1");
  return parallel_map(static_cast<std::size_t>(m), [&](std::size_t j) {
    const double theta = static_cast<double>(j) / static_cast<double>(m);
    return cocycle_product(params, theta, n).log_norm();
  });
}

}  // namespace

double lyapunov_avg(const CocycleParams& params, std::int64_t n, std::int64_t m_samples) {
  const auto v = log_norm_grid(params, n, m_samples);
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(m_samples) / static_cast<double>(n);
}

double lyapunov_sup(const CocycleParams& params, std::int64_t n, std::int64_t m_samples) {
  const auto v = log_norm_grid(params, n, m_samples);
  return *std::max_element(v.begin(), v.end()) / static_cast<double>(n);
}

}  // namespace amo
