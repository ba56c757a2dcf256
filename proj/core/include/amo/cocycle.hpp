#pragma once

#include <cstdint>

#include "amo/sl2.hpp"

namespace amo {

// Frequency alpha = p/q + offset. Rational frequencies have offset 0 and are
// kept in lowest terms with q >= 1. Splitting off a rational part keeps the
// phase theta + j*alpha exact in its rational component, which matters when
// alpha - p/q is far below double resolution of alpha itself.
class Frequency {
 public:
  static Frequency rational(std::int64_t p, std::int64_t q);
  static Frequency perturbed(std::int64_t p, std::int64_t q, double offset);
  static Frequency real(double alpha) { return perturbed(0, 1, alpha); }

  [[nodiscard]] std::int64_t p() const { return p_; }
  [[nodiscard]] std::int64_t q() const { return q_; }
  [[nodiscard]] double offset() const { return offset_; }
  [[nodiscard]] bool is_rational() const { return offset_ == 0.0; }
  [[nodiscard]] double value() const;

  // theta + j * alpha reduced to [0, 1).
  [[nodiscard]] double phase(double theta, std::int64_t j) const;

 private:
  Frequency(std::int64_t p, std::int64_t q, double offset) : p_(p), q_(q), offset_(offset) {}
  std::int64_t p_;
  std::int64_t q_;
  double offset_;
};

struct CocycleParams {
  double lambda;  // coupling; 0 gives the free Laplacian
  Frequency alpha;
  double energy;
};

// [[E - 2 lambda cos 2 pi theta, -1], [1, 0]].
Mat2R step_matrix(const CocycleParams& params, double theta);

// Product kept as exp(log_scale) * mat with ||mat||_HS in [sqrt 2, 4]; mat
// carries determinant exp(-2 log_scale).
class ScaledProduct {
 public:
  ScaledProduct() = default;

  [[nodiscard]] const Mat2& mat() const { return mat_; }
  [[nodiscard]] double log_scale() const { return log_scale_ + log_comp_; }

  // ln ||P||_HS of the represented product P.
  [[nodiscard]] double log_norm() const;
  [[nodiscard]] double trace() const;
  // The represented product as a unit-determinant matrix.
  [[nodiscard]] Mat2R to_mat2r() const { return Mat2R::renormalized(mat_); }

  // Replaces P by step * P.
  void push(const Mat2& step);

  // this = later * this
  friend ScaledProduct operator*(const ScaledProduct& later, const ScaledProduct& earlier);

 private:
  void rescale();
  void add_log(double v);

  Mat2 mat_{};
  double log_scale_ = 0.0;
  double log_comp_ = 0.0;  // Neumaier compensation term
};

// A(theta + (n-1) alpha) ... A(theta). n = 0 gives the identity.
ScaledProduct cocycle_product(const CocycleParams& params, double theta, std::int64_t n);

// (1/n) mean over m equispaced theta of ln ||A_n(theta)||_HS.
double lyapunov_avg(const CocycleParams& params, std::int64_t n, std::int64_t m_samples);
// (1/n) max over the same grid.
double lyapunov_sup(const CocycleParams& params, std::int64_t n, std::int64_t m_samples);

}  // namespace amo
