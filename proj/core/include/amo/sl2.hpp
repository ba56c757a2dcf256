#pragma once

// SL(2,R) acting on the upper half-plane by Moebius transformations.
//
// Angles of rotation matrices are measured in turns: rotation(t) is the
// matrix of angle 2*pi*t. rotation(t) fixes i and every matrix fixing i
// is of this form.

#include <complex>

namespace amo {

// Plain real 2x2 matrix, no determinant constraint.
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  [[nodiscard]] double det() const { return a * d - b * c; }
  [[nodiscard]] double trace() const { return a + d; }
  [[nodiscard]] double hs_norm_sq() const { return a * a + b * b + c * c + d * d; }

  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend Mat2 operator-(const Mat2& l, const Mat2& r) {
    return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d};
  }
  friend Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
};

// Real 2x2 matrix of unit determinant.
class Mat2R {
 public:
  static constexpr double kDetTolerance = 1e-9;
  static constexpr double kDriftThreshold = 1e-12;

  Mat2R() = default;
  // Throws std::invalid_argument unless |ad - bc - 1| <= kDetTolerance.
  Mat2R(double a, double b, double c, double d);
  explicit Mat2R(const Mat2& m) : Mat2R(m.a, m.b, m.c, m.d) {}

  // Divides by sqrt(det); throws std::invalid_argument when det <= 0.
  static Mat2R renormalized(const Mat2& m);

  [[nodiscard]] double a() const { return m_.a; }
  [[nodiscard]] double b() const { return m_.b; }
  [[nodiscard]] double c() const { return m_.c; }
  [[nodiscard]] double d() const { return m_.d; }
  [[nodiscard]] const Mat2& mat() const { return m_; }

  [[nodiscard]] double det() const { return m_.det(); }
  [[nodiscard]] double trace() const { return m_.trace(); }
  [[nodiscard]] Mat2R inverse() const;

  // Renormalizes by sqrt(det) whenever the product drifts by more than
  // kDriftThreshold.
  friend Mat2R operator*(const Mat2R& l, const Mat2R& r);

 private:
  struct Unchecked {};
  Mat2R(const Mat2& m, Unchecked) : m_(m) {}
  Mat2 m_{};
};

// Point z = x + iy of the upper half-plane.
class HPoint {
 public:
  // Throws std::invalid_argument unless y > 0 and both coordinates are finite.
  HPoint(double x, double y);
  static HPoint i() { return {0.0, 1.0}; }

  [[nodiscard]] double x() const { return x_; }
  [[nodiscard]] double y() const { return y_; }
  [[nodiscard]] std::complex<double> z() const { return {x_, y_}; }

 private:
  double x_;
  double y_;
};

struct EllipticData {
  double rho;          // rotation number in turns, in (0, 1/2)
  HPoint fixed_point;  // unique fixed point in H
  int epsilon;         // transport_to(fixed_point)^-1 A transport_to(fixed_point) = rotation(epsilon * rho)
};

Mat2R rotation(double turns);
Mat2R identity();

HPoint moebius_act(const Mat2R& m, const HPoint& z);

// (1 + |z|^2) / (2 Im z).
double phi(const HPoint& z);

double hs_norm_sq(const Mat2R& m);
double hs_norm(const Mat2R& m);

// Guard band below |trace| = 2 inside which a matrix is treated as parabolic.
inline constexpr double kParabolicGuard = 1e-12;

// Throws NotElliptic when |trace| >= 2 - kParabolicGuard.
EllipticData elliptic_data(const Mat2R& m);

// Closed form for phi of the fixed point in terms of ||A||_HS and rho.
double elliptic_fixed_point_phi(double hs_norm_sq, double rho);
// Upper bound sqrt(2) ||A||_HS / (2 sin 2 pi rho).
double elliptic_fixed_point_phi_bound(double hs_norm_sq, double rho);

// Upper-triangular [[sqrt y, x / sqrt y], [0, 1 / sqrt y]]; sends i to z.
Mat2R transport_to(const HPoint& z);

// Hyperbolic metric normalized so that dist(a i, i) = |ln a|.
double hyperbolic_dist(const HPoint& z, const HPoint& w);

struct MidpointTriple {
  HPoint z1;  // A (k i)
  HPoint z2;  // A (i / k)
  HPoint z3;  // A i, the hyperbolic midpoint of z1 and z2
  double factor;  // k + 1/k, with phi(z1) + phi(z2) = factor * phi(z3)
};

// Requires k > 0 (std::invalid_argument otherwise).
MidpointTriple midpoint_triple(const Mat2R& m, double k);

// Angle in turns, in [0, 1), of a matrix that is a rotation up to rounding.
double rotation_angle(const Mat2R& r);

}  // namespace amo
