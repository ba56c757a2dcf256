#include "amo/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "amo/cocycle.hpp"
#include "amo/errors.hpp"
#include "amo/parallel.hpp"
#include "amo/quadrature.hpp"
#include "amo/symmetric_eigen.hpp"

namespace amo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScaledProduct period_product(double lambda, std::int64_t p, std::int64_t q, double energy,
                             double theta) {
  return cocycle_product({lambda, Frequency::rational(p, q), energy}, theta, q);
}

// acos(x) from accurate 1 - x and 1 + x.
double acos_from_gaps(double one_minus, double one_plus) {
  return 2.0 * std::atan2(std::sqrt(std::max(one_minus, 0.0)), std::sqrt(std::max(one_plus, 0.0)));
}

// Elliptic window {|a0 - amp cos 2 pi u| < 2} within u in [0, 1/2]. The
// trace increases with u; an end is an "edge" when the trace reaches -2
// (lower) or +2 (upper) there, so the accurate gap formulas apply.
struct Window {
  double lo = 0.0;
  double hi = 0.5;
  bool edge_lo = false;
  bool edge_hi = false;
  bool empty = false;
};

Window elliptic_window(double a0, double amp) {
  Window w;
  const double lo_tr = a0 - amp;
  const double hi_tr = a0 + amp;
  if (lo_tr >= 2.0 || hi_tr <= -2.0) {
    w.empty = true;
    return w;
  }
  if (lo_tr < -2.0) {
    w.edge_lo = true;
    w.lo = acos_from_gaps(-(lo_tr + 2.0) / amp, (hi_tr + 2.0) / amp) / (2.0 * kPi);
  }
  if (hi_tr > 2.0) {
    w.edge_hi = true;
    w.hi = acos_from_gaps((2.0 - lo_tr) / amp, (hi_tr - 2.0) / amp) / (2.0 * kPi);
  }
  return w;
}

struct TraceGaps {
  double two_minus;
  double two_plus;
};

TraceGaps window_gaps(const Window& w, double a0, double amp, double u, double from_lo, double to_hi) {
  const double cs = std::cos(2.0 * kPi * u);
  const double plus = w.edge_lo ? 2.0 * amp * std::sin(kPi * (u + w.lo)) * std::sin(kPi * from_lo)
                                : 2.0 + a0 - amp * cs;
  const double minus = w.edge_hi ? 2.0 * amp * std::sin(kPi * (u + w.hi)) * std::sin(kPi * to_hi)
                                 : 2.0 - a0 + amp * cs;
  return {minus, plus};
}

SymmetricMatrix periodic_jacobi(double lambda, std::int64_t p, std::int64_t q, double theta,
                                double boundary_sign) {
  const auto n = static_cast<std::size_t>(q);
  SymmetricMatrix h(n);
  const Frequency f = Frequency::rational(p, q);
  for (std::size_t i = 0; i < n; ++i)
    h(i, i) = 2.0 * lambda * std::cos(2.0 * kPi * f.phase(theta, static_cast<std::int64_t>(i)));
  if (n == 1) {
    h(0, 0) += 2.0 * boundary_sign;
    return h;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) h.add_symmetric(i, i + 1, 1.0);
  h.add_symmetric(0, n - 1, boundary_sign);
  return h;
}

// Refines a root of a0(E) = target near the eigenvalue estimate when a sign
// change brackets it; keeps the estimate at double roots.
double polish_edge(const BandSpectrum& spec, double estimate, double target) {
  const double h = 1e-11 * std::max(1.0, std::abs(estimate));
  double lo = estimate - h;
  double hi = estimate + h;
  double flo = spec.a0(lo) - target;
  const double fhi = spec.a0(hi) - target;
  if (!(flo * fhi < 0.0)) return estimate;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = spec.a0(mid) - target;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> polished_edges(const BandSpectrum& probe, double lambda, std::int64_t p,
                                   std::int64_t q, double theta, double sign, double target) {
  auto ev = symmetric_eigenvalues(periodic_jacobi(lambda, p, q, theta, sign));
  for (double& e : ev) e = polish_edge(probe, e, target);
  return ev;
}

}  // namespace

BandSpectrum::BandSpectrum(double lambda, std::int64_t p, std::int64_t q, std::vector<Band> bands)
    : lambda_(lambda), p_(p), q_(q), amplitude_(chambers_amplitude(lambda, q)), bands_(std::move(bands)) {}

double BandSpectrum::a0(double energy) const { return chambers_a0(lambda_, p_, q_, energy); }

IntervalSet BandSpectrum::sigma_set() const {
  std::vector<Interval> v;
  for (const auto& b : bands_) v.push_back({b.sigma_lo, b.sigma_hi});
  return IntervalSet(std::move(v));
}

IntervalSet BandSpectrum::inner_set() const {
  std::vector<Interval> v;
  for (const auto& b : bands_)
    if (b.has_inner()) v.push_back({b.inner_lo, b.inner_hi});
  return IntervalSet(std::move(v));
}

std::optional<int> BandSpectrum::band_of(double energy) const {
  for (const auto& b : bands_)
    if (b.sigma_lo <= energy && energy <= b.sigma_hi) return b.k;
  return std::nullopt;
}

int BandSpectrum::bands_below(double energy) const {
  int n = 0;
  for (const auto& b : bands_)
    if (b.sigma_hi < energy) ++n;
  return n;
}

void check_fraction(std::int64_t p, std::int64_t q, std::int64_t q_max) {
  if (q < 1 || std::gcd(p, q) != 1)
    throw NonReduced(std::to_string(p) + "/" + std::to_string(q) + " is not a reduced fraction");
  if (q > q_max)
    throw DegenerateQ("q = " + std::to_string(q) + " exceeds q_max = " + std::to_string(q_max));
}

double chambers_amplitude(double lambda, std::int64_t q) {
  if (lambda == 0.0) return 0.0;
  const double log_pow = static_cast<double>(q) * std::log(std::abs(lambda));
  if (log_pow < std::log(kAmplitudeFlush)) return 0.0;
  return 2.0 * std::exp(log_pow);
}

double chambers_a0(double lambda, std::int64_t p, std::int64_t q, double energy) {
  return period_product(lambda, p, q, energy, 1.0 / (4.0 * static_cast<double>(q))).trace();
}

double chambers_a0_at(double lambda, std::int64_t p, std::int64_t q, double energy, double theta) {
  const double tr = period_product(lambda, p, q, energy, theta).trace();
  return tr + chambers_amplitude(lambda, q) * std::cos(2.0 * kPi * static_cast<double>(q) * theta);
}

BandSpectrum band_spectrum(double lambda, std::int64_t p, std::int64_t q, std::int64_t q_max) {
  check_fraction(p, q, q_max);
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("band_spectrum: lambda must be finite and >= 0");
  const BandSpectrum probe(lambda, p, q, {});
  const double amp = probe.amplitude();
  const double half_shift = 1.0 / (2.0 * static_cast<double>(q));

  // Trace at theta = 0 is a0 - amp, at theta = 1/(2q) it is a0 + amp.
  // Periodic (antiperiodic) eigenvalues are the energies with trace 2 (-2).
  auto outer = polished_edges(probe, lambda, p, q, 0.0, 1.0, 2.0 + amp);
  auto outer2 = polished_edges(probe, lambda, p, q, half_shift, -1.0, -2.0 - amp);
  outer.insert(outer.end(), outer2.begin(), outer2.end());
  std::sort(outer.begin(), outer.end());

  std::vector<double> inner;
  const bool inner_exists = lambda <= 1.0;
  if (inner_exists) {
    inner = polished_edges(probe, lambda, p, q, 0.0, -1.0, -2.0 + amp);
    auto inner2 = polished_edges(probe, lambda, p, q, half_shift, 1.0, 2.0 - amp);
    inner.insert(inner.end(), inner2.begin(), inner2.end());
    std::sort(inner.begin(), inner.end());
  }

  std::vector<Band> bands;
  for (std::int64_t k = 1; k <= q; ++k) {
    const auto i = static_cast<std::size_t>(2 * (k - 1));
    Band b{static_cast<int>(k), outer[i], kNaN, kNaN, outer[i + 1], ((q + k - 1) % 2 == 0) ? 1 : -1};
    if (inner_exists) {
      b.inner_lo = std::clamp(inner[i], b.sigma_lo, b.sigma_hi);
      b.inner_hi = std::clamp(inner[i + 1], b.inner_lo, b.sigma_hi);
    }
    bands.push_back(b);
  }
  return {lambda, p, q, std::move(bands)};
}

Mat2R period_matrix(double lambda, std::int64_t p, std::int64_t q, double energy, double theta) {
  return period_product(lambda, p, q, energy, theta).to_mat2r();
}

double rho_from_trace_gaps(double two_minus_tr, double two_plus_tr) {
  if (two_minus_tr <= 0.0) return 0.0;
  if (two_plus_tr <= 0.0) return 0.5;
  return std::atan2(std::sqrt(two_minus_tr), std::sqrt(two_plus_tr)) / kPi;
}

double rho_of_theta(double lambda, std::int64_t p, std::int64_t q, double energy, double theta) {
  const double tr = period_product(lambda, p, q, energy, theta).trace();
  return rho_from_trace_gaps(2.0 - tr, 2.0 + tr);
}

double rho_average(double a0, double amp, std::int64_t m_samples) {
  if (amp == 0.0) return rho_from_trace_gaps(2.0 - a0, 2.0 + a0);
  const Window w = elliptic_window(a0, amp);
  if (w.empty) return a0 - amp >= 2.0 ? 0.0 : 0.5;
  if (!w.edge_lo && !w.edge_hi) {
    auto f = [&](double u) {
      const double tr = a0 - amp * std::cos(2.0 * kPi * u);
      return rho_from_trace_gaps(2.0 - tr, 2.0 + tr);
    };
    return quad::periodic_mean(f, static_cast<std::size_t>(m_samples), 1e-13).value;
  }
  // Below the window rho = 1/2, above it rho = 0.
  double half = w.edge_lo ? 0.5 * w.lo : 0.0;
  auto f = [&](double u, double from_lo, double to_hi) {
    const TraceGaps g = window_gaps(w, a0, amp, u, from_lo, to_hi);
    return rho_from_trace_gaps(g.two_minus, g.two_plus);
  };
  half += quad::edge_regular(f, w.lo, w.hi, 1e-13, 16, 8192).value;
  return 2.0 * half;
}

double rho_bar(double lambda, std::int64_t p, std::int64_t q, double energy, std::int64_t m_samples) {
  if (m_samples < 16) throw std::invalid_argument("rho_bar: m_samples must be >= 16");
  check_fraction(p, q);
  return rho_average(chambers_a0(lambda, p, q, energy), chambers_amplitude(lambda, q), m_samples);
}

double ids_in_band(const BandSpectrum& spec, int k, double energy, std::int64_t m_samples) {
  const double rho = rho_average(spec.a0(energy), spec.amplitude(), m_samples);
  const int s = spec.band(k).parity;
  const double qn = static_cast<double>(k - 1) + s * 2.0 * rho + (1.0 - s) / 2.0;
  return qn / static_cast<double>(spec.q());
}

double ids(const BandSpectrum& spec, double energy, std::int64_t m_samples) {
  if (const auto k = spec.band_of(energy)) return ids_in_band(spec, *k, energy, m_samples);
  return static_cast<double>(spec.bands_below(energy)) / static_cast<double>(spec.q());
}

double ids(double lambda, std::int64_t p, std::int64_t q, double energy) {
  return ids(band_spectrum(lambda, p, q), energy);
}

HPoint fixed_point_field(double lambda, std::int64_t p, std::int64_t q, double energy, double theta) {
  return elliptic_data(period_matrix(lambda, p, q, energy, theta)).fixed_point;
}

double fixed_point_phi(const Mat2& m, double four_minus_tr2) {
  return std::abs(m.b - m.c) / std::sqrt(four_minus_tr2);
}

double ids_density(const BandSpectrum& spec, double energy, std::int64_t m_samples) {
  const auto k = spec.band_of(energy);
  if (!k || !(energy > spec.band(*k).sigma_lo && energy < spec.band(*k).sigma_hi))
    throw OutsideSpectrum("energy " + std::to_string(energy) + " is not interior to Sigma");
  const double a0 = spec.a0(energy);
  const double amp = spec.amplitude();
  const Window w = elliptic_window(a0, amp);
  if (w.empty) throw OutsideSpectrum("energy " + std::to_string(energy) + " is at a band edge");
  const std::int64_t p = spec.p();
  const std::int64_t q = spec.q();
  const double lambda = spec.lambda();

  if (!w.edge_lo && !w.edge_hi) {
    // Elliptic for every theta: smooth periodic integrand.
    auto f = [&](double theta) {
      const Mat2 m = period_matrix(lambda, p, q, energy, theta).mat();
      const double tr = m.trace();
      return fixed_point_phi(m, (2.0 - tr) * (2.0 + tr));
    };
    const auto r = quad::periodic_mean(f, static_cast<std::size_t>(std::max<std::int64_t>(m_samples, 16)), 1e-10);
    return r.value / (2.0 * kPi);
  }

  // Each period cell [j/q, (j+1)/q) splits into two halves on which the
  // trace is monotone; v in [0, 1/2] parametrizes both halves.
  const double qd = static_cast<double>(q);
  const auto pieces = parallel_map(static_cast<std::size_t>(2 * q), [&](std::size_t idx) {
    const double cell = static_cast<double>(idx / 2);
    const bool mirrored = (idx % 2) == 1;
    auto f = [&](double v, double from_lo, double to_hi) {
      const double theta = mirrored ? (cell + 1.0 - v) / qd : (cell + v) / qd;
      const TraceGaps g = window_gaps(w, a0, amp, v, from_lo, to_hi);
      const Mat2 m = period_matrix(lambda, p, q, energy, theta).mat();
      return fixed_point_phi(m, g.two_minus * g.two_plus);
    };
    return quad::edge_regular(f, w.lo, w.hi, 1e-10, 16, 4096).value / qd;
  });
  double total = 0.0;
  for (double v : pieces) total += v;
  return total / (2.0 * kPi);
}

double n_measure(const BandSpectrum& spec, const IntervalSet& s, std::int64_t m_samples) {
  double total = 0.0;
  for (const auto& b : spec.bands()) {
    const IntervalSet clipped = s.clip(b.sigma_lo, b.sigma_hi);
    for (const auto& piece : clipped.intervals()) {
      total += std::abs(ids_in_band(spec, b.k, piece.hi, m_samples) -
                        ids_in_band(spec, b.k, piece.lo, m_samples));
    }
  }
  return total;
}

double gauge_rotation_psi(double lambda, std::int64_t p, std::int64_t q, double energy, double theta) {
  const double next = Frequency::rational(p, q).phase(theta, 1);
  const Mat2R b0 = transport_to(fixed_point_field(lambda, p, q, energy, theta));
  const Mat2R b1 = transport_to(fixed_point_field(lambda, p, q, energy, next));
  const CocycleParams params{lambda, Frequency::rational(p, q), energy};
  return rotation_angle(b1.inverse() * step_matrix(params, theta) * b0);
}

}  // namespace amo
