#pragma once

// Almost Mathieu cocycle at rational frequency p/q.
//
// By the Chambers formula Tr A_q(theta) = a_0(E) - 2 lambda^q cos(2 pi q theta),
// so Sigma = {|a_0| <= 2 + 2 lambda^q} and sigma = {|a_0| <= 2 - 2 lambda^q}.
// Both split into q bands numbered k = 1..q from the bottom.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amo/interval_set.hpp"
#include "amo/sl2.hpp"

namespace amo {

inline constexpr std::int64_t kDefaultQMax = 2000;
// Below this lambda^q the 2 lambda^q term is flushed to zero.
inline constexpr double kAmplitudeFlush = 1e-300;

struct Band {
  int k;            // 1-based band index
  double sigma_lo;  // Sigma band edges
  double inner_lo;  // component of sigma inside the band; NaN when sigma is empty
  double inner_hi;
  double sigma_hi;
  int parity;  // (-1)^(q + k - 1)

  [[nodiscard]] bool has_inner() const { return !std::isnan(inner_lo); }
};

class BandSpectrum {
 public:
  BandSpectrum(double lambda, std::int64_t p, std::int64_t q, std::vector<Band> bands);

  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] std::int64_t p() const { return p_; }
  [[nodiscard]] std::int64_t q() const { return q_; }
  [[nodiscard]] std::span<const Band> bands() const& { return bands_; }
  std::span<const Band> bands() const&& = delete;
  [[nodiscard]] const Band& band(int k) const { return bands_.at(static_cast<std::size_t>(k - 1)); }

  // 2 lambda^q, or 0 once lambda^q drops below kAmplitudeFlush.
  [[nodiscard]] double amplitude() const { return amplitude_; }
  [[nodiscard]] double a0(double energy) const;

  [[nodiscard]] IntervalSet sigma_set() const;  // Sigma_{lambda,p/q}
  [[nodiscard]] IntervalSet inner_set() const;  // sigma_{lambda,p/q}

  // Band containing E; the left band wins where two bands touch.
  [[nodiscard]] std::optional<int> band_of(double energy) const;
  // Number of bands lying entirely below E.
  [[nodiscard]] int bands_below(double energy) const;

 private:
  double lambda_;
  std::int64_t p_;
  std::int64_t q_;
  double amplitude_;
  std::vector<Band> bands_;
};

// Throws NonReduced unless q >= 1 and gcd(p, q) = 1, DegenerateQ if q > q_max.
void check_fraction(std::int64_t p, std::int64_t q, std::int64_t q_max = kDefaultQMax);

double chambers_amplitude(double lambda, std::int64_t q);

// a_0 as Tr A_q(theta0) at theta0 = 1/(4q), where the cosine term vanishes.
double chambers_a0(double lambda, std::int64_t p, std::int64_t q, double energy);
// Tr A_q(theta) + 2 lambda^q cos(2 pi q theta); equals a_0 for every theta.
double chambers_a0_at(double lambda, std::int64_t p, std::int64_t q, double energy, double theta);

BandSpectrum band_spectrum(double lambda, std::int64_t p, std::int64_t q,
                           std::int64_t q_max = kDefaultQMax);

// A_q(theta) = A(theta + (q-1) p/q) ... A(theta).
Mat2R period_matrix(double lambda, std::int64_t p, std::int64_t q, double energy, double theta);

// Rotation number of A_q(theta): Tr = 2 cos(2 pi rho), clipped to 0 above
// trace 2 and to 1/2 below trace -2.
double rho_of_theta(double lambda, std::int64_t p, std::int64_t q, double energy, double theta);

// Clipped rotation number of a trace given through 2 - tr and 2 + tr.
double rho_from_trace_gaps(double two_minus_tr, double two_plus_tr);

// Average over u in [0, 1) of rho(a0 - amp cos 2 pi u). Kinks where the
// trace crosses +-2 are integrated piecewise.
double rho_average(double a0, double amp, std::int64_t m_samples = 64);

// Theta-average of rho_of_theta. Requires m_samples >= 16.
double rho_bar(double lambda, std::int64_t p, std::int64_t q, double energy,
               std::int64_t m_samples = 64);

// Integrated density of states: q N = k - 1 + s 2 rho + (1 - s)/2 with
// s = (-1)^(q+k-1) inside band k, and k/q in the gap above band k.
double ids(const BandSpectrum& spec, double energy, std::int64_t m_samples = 64);
double ids(double lambda, std::int64_t p, std::int64_t q, double energy);
// Same formula with the band index forced (used for clipped pieces).
double ids_in_band(const BandSpectrum& spec, int k, double energy, std::int64_t m_samples = 64);

// Fixed point m(theta) of A_q(theta) in H. Throws NotElliptic when |Tr| >= 2.
HPoint fixed_point_field(double lambda, std::int64_t p, std::int64_t q, double energy, double theta);

// phi of the fixed point of an elliptic matrix: |b - c| / sqrt(4 - tr^2).
double fixed_point_phi(const Mat2& m, double four_minus_tr2);

// dN/dE = (1/2 pi) integral over {|Tr A_q| < 2} of phi(m(theta)).
// Throws OutsideSpectrum unless E lies in the interior of a band of Sigma.
double ids_density(const BandSpectrum& spec, double energy, std::int64_t m_samples = 64);

// Sum over bands of the N-measure of s clipped to the band.
double n_measure(const BandSpectrum& spec, const IntervalSet& s, std::int64_t m_samples = 64);

// psi(theta) in turns, [0, 1), with A(theta) = B(theta + p/q) R_psi B(theta)^-1
// and B = transport_to(m(.)). Depends on the upper-triangular gauge.
double gauge_rotation_psi(double lambda, std::int64_t p, std::int64_t q, double energy, double theta);

}  // namespace amo
