#pragma once

#include <cstdint>
#include <vector>

#include "amo/periodic.hpp"

namespace amo {

// Piecewise-linear N on cosine-spaced nodes. Each band is split at its
// sigma edges so kinks of N fall on nodes.
class IDSProfile {
 public:
  struct Node {
    double energy;
    double n;
  };

  // nodes_per_piece >= 64.
  IDSProfile(const BandSpectrum& spec, int nodes_per_piece = 256);

  [[nodiscard]] const BandSpectrum& spectrum() const { return spec_; }
  // One node list per band, increasing in energy and in N.
  [[nodiscard]] const std::vector<std::vector<Node>>& bands() const { return bands_; }
  // Linear interpolation; 0 below, 1 above, k/q in gap k.
  [[nodiscard]] double n_at(double energy) const;

 private:
  BandSpectrum spec_;
  std::vector<std::vector<Node>> bands_;
};

// L(E) = integral of ln|E' - E| dN(E'), exact for the piecewise-linear N.
double thouless_L(const IDSProfile& profile, double energy);

struct ThoulessRow {
  double energy;
  double l_thouless;
  double l_cocycle;
  double abs_diff;
};

struct ThoulessReport {
  double lambda;
  std::int64_t p;
  std::int64_t q;
  std::int64_t n_steps;
  std::int64_t m_samples;
  std::vector<ThoulessRow> rows;
  double max_diff;
  double tolerance;  // 0.02 + 4 / sqrt(n_steps)
  bool pass;
};

// m_samples = 0 picks 128 q theta samples: ln of the spectral radius of
// A_q(theta) has log dips at 2q points per period, which a coarse grid
// misses for large lambda.
// Energies: n_energies points evenly spread over [min Sigma - 1, max Sigma + 1].
std::vector<double> thouless_energies(const BandSpectrum& spec, int n_energies);

ThoulessReport thouless_consistency(double lambda, std::int64_t p, std::int64_t q, int n_energies,
                                    std::int64_t n_steps = 10000, std::int64_t m_samples = 0);
ThoulessReport thouless_consistency(double lambda, std::int64_t p, std::int64_t q,
                                    const std::vector<double>& energies, std::int64_t n_steps = 10000,
                                    std::int64_t m_samples = 0);

}  // namespace amo
