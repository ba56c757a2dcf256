#include "amo/thouless.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "amo/cocycle.hpp"
#include "amo/parallel.hpp"

namespace amo {

namespace {

// Antiderivative of ln|t|.
double log_antiderivative(double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; }

}  // namespace

IDSProfile::IDSProfile(const BandSpectrum& spec, int nodes_per_piece) : spec_(spec) {
  if (nodes_per_piece < 64) throw std::invalid_argument("IDSProfile: need at least 64 nodes per piece");
  const auto bands = spec_.bands();
  bands_ = parallel_map(bands.size(), [&](std::size_t i) {
    const Band& b = bands[i];
    std::vector<double> cuts{b.sigma_lo};
    if (b.has_inner()) {
      cuts.push_back(b.inner_lo);
      cuts.push_back(b.inner_hi);
    }
    cuts.push_back(b.sigma_hi);
    std::vector<Node> nodes;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double lo = cuts[s], hi = cuts[s + 1];
      if (!(hi > lo)) continue;
      for (int j = nodes.empty() ? 0 : 1; j <= nodes_per_piece; ++j) {
        double e = lo + (hi - lo) * (1.0 - std::cos(std::numbers::pi * j / nodes_per_piece)) / 2.0;
        if (j == nodes_per_piece) e = hi;
        nodes.push_back({e, ids_in_band(spec_, b.k, e)});
      }
    }
    if (nodes.empty()) nodes.push_back({b.sigma_lo, ids_in_band(spec_, b.k, b.sigma_lo)});
    // Quadrature noise must not break monotonicity.
    for (std::size_t j = 1; j < nodes.size(); ++j) nodes[j].n = std::max(nodes[j].n, nodes[j - 1].n);
    return nodes;
  });
}

double IDSProfile::n_at(double energy) const {
  const double qd = static_cast<double>(spec_.q());
  for (std::size_t k = 0; k < bands_.size(); ++k) {
    const auto& nodes = bands_[k];
    if (energy < nodes.front().energy) return static_cast<double>(k) / qd;
    if (energy <= nodes.back().energy) {
      auto it = std::upper_bound(nodes.begin(), nodes.end(), energy,
                                 [](double e, const Node& n) { return e < n.energy; });
      if (it == nodes.end()) return nodes.back().n;
      const Node& r = *it;
      const Node& l = *(it - 1);
      if (r.energy == l.energy) return r.n;
      return l.n + (r.n - l.n) * (energy - l.energy) / (r.energy - l.energy);
    }
  }
  return 1.0;
}

double thouless_L(const IDSProfile& profile, double energy) {
  double total = 0.0;
  for (const auto& nodes : profile.bands()) {
    for (std::size_t j = 1; j < nodes.size(); ++j) {
      const double de = nodes[j].energy - nodes[j - 1].energy;
      const double dn = nodes[j].n - nodes[j - 1].n;
      if (!(de > 0.0) || dn == 0.0) continue;
      total += dn / de *
               (log_antiderivative(nodes[j].energy - energy) - log_antiderivative(nodes[j - 1].energy - energy));
    }
  }
  return total;
}

std::vector<double> thouless_energies(const BandSpectrum& spec, int n_energies) {
  if (n_energies < 1) throw std::invalid_argument("thouless_energies: n_energies must be >= 1");
  const double lo = spec.band(1).sigma_lo - 1.0;
  const double hi = spec.band(static_cast<int>(spec.q())).sigma_hi + 1.0;
  std::vector<double> out;
  for (int j = 0; j < n_energies; ++j)
    out.push_back(n_energies == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * (j + 0.5) / n_energies);
  return out;
}

ThoulessReport thouless_consistency(double lambda, std::int64_t p, std::int64_t q, int n_energies,
                                    std::int64_t n_steps, std::int64_t m_samples) {
  return thouless_consistency(lambda, p, q, thouless_energies(band_spectrum(lambda, p, q), n_energies), n_steps,
                              m_samples);
}

ThoulessReport thouless_consistency(double lambda, std::int64_t p, std::int64_t q,
                                    const std::vector<double>& energies, std::int64_t n_steps,
                                    std::int64_t m_samples) {
  const IDSProfile profile(band_spectrum(lambda, p, q));
  if (m_samples == 0) m_samples = 128 * q;
  ThoulessReport r{lambda, p, q, n_steps, m_samples, {}, 0.0, 0.02 + 4.0 / std::sqrt(static_cast<double>(n_steps)),
                   false};
  const Frequency f = Frequency::rational(p, q);
  for (double e : energies) {
    const double lt = thouless_L(profile, e);
    const double lc = lyapunov_avg({lambda, f, e}, n_steps, m_samples);
    r.rows.push_back({e, lt, lc, std::abs(lt - lc)});
  }
  for (const auto& row : r.rows) r.max_diff = std::max(r.max_diff, row.abs_diff);
  r.pass = r.max_diff <= r.tolerance;
  return r;
}

}  // namespace amo
