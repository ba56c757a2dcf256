#include "amo/sl2.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "amo/errors.hpp"

namespace amo {

Mat2R::Mat2R(double a, double b, double c, double d) : m_{a, b, c, d} {
  if (!(std::abs(m_.det() - 1.0) <= kDetTolerance))
    throw std::invalid_argument("Mat2R: determinant " + std::to_string(m_.det()) +
                                " is not 1");
}

Mat2R Mat2R::renormalized(const Mat2& m) {
  const double det = m.det();
  if (!(det > 0.0)) throw std::invalid_argument("Mat2R: cannot renormalize det <= 0");
  const double s = 1.0 / std::sqrt(det);
  return {s * m, Unchecked{}};
}

Mat2R Mat2R::inverse() const { return {Mat2{m_.d, -m_.b, -m_.c, m_.a}, Unchecked{}}; }

Mat2R operator*(const Mat2R& l, const Mat2R& r) {
  Mat2 p = l.m_ * r.m_;
  if (std::abs(p.det() - 1.0) > Mat2R::kDriftThreshold) return Mat2R::renormalized(p);
  return {p, Mat2R::Unchecked{}};
}

HPoint::HPoint(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0))
    throw std::invalid_argument("HPoint: imaginary part must be positive");
}

Mat2R rotation(double turns) {
  const double t = 2.0 * std::numbers::pi * turns;
  const double cs = std::cos(t);
  const double sn = std::sin(t);
  return Mat2R::renormalized(Mat2{cs, -sn, sn, cs});
}

Mat2R identity() { return {}; }

HPoint moebius_act(const Mat2R& m, const HPoint& z) {
  // (az+b)/(cz+d) = ((az+b)(c conj(z)+d)) / |cz+d|^2, Im = y / |cz+d|^2.
  const double x = z.x();
  const double y = z.y();
  const double den_re = m.c() * x + m.d();
  const double den_im = m.c() * y;
  const double den = den_re * den_re + den_im * den_im;
  const double num_re = m.a() * x + m.b();
  const double num_im = m.a() * y;
  const double re = (num_re * den_re + num_im * den_im) / den;
  const double im = y / den;
  return {re, im};
}

double phi(const HPoint& z) {
  return (1.0 + z.x() * z.x() + z.y() * z.y()) / (2.0 * z.y());
}

double hs_norm_sq(const Mat2R& m) { return m.mat().hs_norm_sq(); }
double hs_norm(const Mat2R& m) { return std::sqrt(hs_norm_sq(m)); }

EllipticData elliptic_data(const Mat2R& m) {
  const double tr = m.trace();
  if (!(std::abs(tr) < 2.0 - kParabolicGuard))
    throw NotElliptic("matrix with trace " + std::to_string(tr) + " is not elliptic");
  const double rho = std::acos(tr / 2.0) / (2.0 * std::numbers::pi);
  // Fixed points solve c z^2 + (d - a) z - b = 0; discriminant tr^2 - 4 < 0.
  const double c = m.c();
  const double x = (m.a() - m.d()) / (2.0 * c);
  const double y = std::sqrt((2.0 - tr) * (2.0 + tr)) / (2.0 * std::abs(c));
  return {rho, HPoint{x, y}, c > 0.0 ? 1 : -1};
}

double elliptic_fixed_point_phi(double hs_norm_sq, double rho) {
  const double s = std::sin(2.0 * std::numbers::pi * rho);
  const double c4 = std::cos(4.0 * std::numbers::pi * rho);
  return std::sqrt(hs_norm_sq - 2.0 * c4) / (2.0 * s);
}

double elliptic_fixed_point_phi_bound(double hs_norm_sq, double rho) {
  return std::sqrt(2.0 * hs_norm_sq) / (2.0 * std::sin(2.0 * std::numbers::pi * rho));
}

Mat2R transport_to(const HPoint& z) {
  const double s = std::sqrt(z.y());
  return Mat2R::renormalized(Mat2{s, z.x() / s, 0.0, 1.0 / s});
}

double hyperbolic_dist(const HPoint& z, const HPoint& w) {
  const double dx = z.x() - w.x();
  const double dy = z.y() - w.y();
  const double chord = std::sqrt(dx * dx + dy * dy);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(z.y() * w.y())));
}

MidpointTriple midpoint_triple(const Mat2R& m, double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("midpoint_triple: k must be positive");
  return {moebius_act(m, HPoint{0.0, k}), moebius_act(m, HPoint{0.0, 1.0 / k}),
          moebius_act(m, HPoint::i()), k + 1.0 / k};
}

double rotation_angle(const Mat2R& r) {
  double t = std::atan2(r.c(), r.a()) / (2.0 * std::numbers::pi);
  if (t < 0.0) t += 1.0;
  if (t >= 1.0) t -= 1.0;
  return t;
}

}  // namespace amo
