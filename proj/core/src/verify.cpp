#include "amo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "amo/parallel.hpp"
#include "amo/periodic.hpp"
#include "amo/renorm.hpp"
#include "amo/sl2.hpp"
#include "amo/thouless.hpp"

namespace amo {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Info: return "INFO";
  }
  return "?";
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::AtMost: return "<=";
    case Relation::AtLeast: return ">=";
    case Relation::None: return "none";
  }
  return "?";
}

void VerificationReport::add(std::string quantity, std::string label, double measured, double bound,
                             Relation relation) {
  Status s = Status::Info;
  if (relation == Relation::AtMost) s = measured <= bound ? Status::Pass : Status::Fail;
  if (relation == Relation::AtLeast) s = measured >= bound ? Status::Pass : Status::Fail;
  measurements.push_back({std::move(quantity), std::move(label), measured, bound, relation, s});
}

void VerificationReport::add_info(std::string quantity, std::string label, double measured) {
  add(std::move(quantity), std::move(label), measured, std::numeric_limits<double>::quiet_NaN(), Relation::None);
}

void VerificationReport::finalize() {
  bool any_checked = false, any_failed = false;
  for (const auto& m : measurements) {
    any_checked |= m.status != Status::Info;
    any_failed |= m.status == Status::Fail;
  }
  status = any_failed ? Status::Fail : (any_checked ? Status::Pass : Status::Info);
}

bool VerificationReport::quantity_pass(const std::string& quantity) const {
  bool seen = false;
  for (const auto& m : measurements) {
    if (m.quantity != quantity) continue;
    seen = true;
    if (m.status == Status::Fail) return false;
  }
  return seen;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string frac(std::int64_t p, std::int64_t q) { return std::to_string(p) + "/" + std::to_string(q); }

void require_subcritical(double lambda, const char* who) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument(std::string(who) + ": lambda must lie in (0, 1)");
}

std::vector<std::int64_t> numerators(std::int64_t q) {
  std::vector<std::int64_t> ps{1};
  if (const std::int64_t p2 = second_numerator(q); p2 != 0) ps.push_back(p2);
  return ps;
}

// Uniform in [0, 1) from the top 53 bits, so sequences do not depend on the
// standard library's distribution implementation.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 rng_;
};

Mat2R random_sl2(Uniform& u, double t_max) {
  const double e = std::exp(u(-t_max, t_max));
  return rotation(u()) * Mat2R(e, 0.0, 0.0, 1.0 / e) * rotation(u());
}

HPoint random_hpoint(Uniform& u) { return {u(-3.0, 3.0), std::exp(u(-2.0, 2.0))}; }

ContinuedFraction golden(std::size_t n) {
  return ContinuedFraction::from_quotients(0, std::vector<std::int64_t>(n, 1), false);
}

template <class F>
VerificationReport timed(F&& build) {
  const auto t0 = Clock::now();
  VerificationReport r = build();
  r.finalize();
  r.runtime_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

// Energy in band k with rho(theta) = a / (4b), if the band reaches it.
std::optional<double> rigged_energy(const BandSpectrum& spec, int k, double theta, std::int64_t a, std::int64_t b) {
  try {
    return energy_for_rotation(spec, k, theta, static_cast<double>(a) / (4.0 * static_cast<double>(b)));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

struct RiggedCase {
  std::int64_t p, q, a, b;
  double theta, energy;
};

// Exact quarter turns at rational frequency: rho(theta) = a / (4b).
std::vector<RiggedCase> rigged_cases(double lambda) {
  const std::pair<std::int64_t, std::int64_t> fractions[] = {{1, 3}, {2, 5}, {3, 7}, {3, 8}};
  const std::pair<std::int64_t, std::int64_t> witnesses[] = {{1, 2}, {3, 5}, {5, 3}, {1, 3}};
  std::vector<RiggedCase> out;
  for (auto [p, q] : fractions) {
    const BandSpectrum spec = band_spectrum(lambda, p, q);
    for (auto [a, b] : witnesses) {
      for (int k = 1; k <= q; ++k) {
        const double theta = 0.13;
        if (const auto e = rigged_energy(spec, k, theta, a, b)) out.push_back({p, q, a, b, theta, *e});
      }
    }
  }
  return out;
}

}  // namespace

std::int64_t second_numerator(std::int64_t q) {
  if (q < 3) return 0;
  const auto target = static_cast<std::int64_t>(std::llround(static_cast<double>(q) / std::numbers::phi));
  for (std::int64_t d = 0; d < q; ++d) {
    for (const std::int64_t p : {target + d, target - d}) {
      if (p > 1 && p < q && std::gcd(p, q) == 1) return p;
    }
  }
  return 0;
}

VerificationReport verify_sigma_measure(double lambda, const std::vector<std::int64_t>& q_list) {
  require_subcritical(lambda, "verify_sigma_measure");
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "sigma_measure";
    r.parameters = {{"lambda", lambda}, {"q_max", q_list.empty() ? std::int64_t{0} : q_list.back()}};
    struct Row {
      std::string label;
      double sigma_err, gap, gap_bound;
    };
    std::vector<std::pair<std::int64_t, std::int64_t>> work;
    for (const auto q : q_list)
      for (const auto p : numerators(q)) work.emplace_back(p, q);
    const auto rows = parallel_map(work.size(), [&](std::size_t i) {
      const auto [p, q] = work[i];
      const BandSpectrum spec = band_spectrum(lambda, p, q);
      const double sigma = spec.inner_set().measure();
      const double gap = spec.sigma_set().subtract(spec.inner_set()).measure();
      const double bound = 4.0 * std::numbers::pi * std::pow(lambda, 0.5 * static_cast<double>(q)) * (1.0 + 1e-6);
      return Row{frac(p, q), std::abs(sigma - (4.0 - 4.0 * lambda)), gap, bound};
    });
    for (const auto& row : rows) {
      r.add("sigma_measure_error", row.label, row.sigma_err, 1e-7, Relation::AtMost);
      r.add("gap_measure", row.label, row.gap, row.gap_bound, Relation::AtMost);
    }
    return r;
  });
}

VerificationReport verify_hausdorff(double lambda, std::pair<std::int64_t, std::int64_t> pq1,
                                    std::pair<std::int64_t, std::int64_t> pq2) {
  if (!(lambda > 0.0)) throw std::invalid_argument("verify_hausdorff: lambda must be positive");
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "hausdorff_continuity";
    r.parameters = {{"lambda", lambda}, {"alpha", frac(pq1.first, pq1.second)},
                    {"alpha_prime", frac(pq2.first, pq2.second)}};
    const IntervalSet s1 = band_spectrum(lambda, pq1.first, pq1.second).sigma_set();
    const IntervalSet s2 = band_spectrum(lambda, pq2.first, pq2.second).sigma_set();
    // |p1/q1 - p2/q2| from the exact integer numerator.
    const double num_diff = std::abs(static_cast<double>(pq1.first * pq2.second - pq2.first * pq1.second));
    const double gap = num_diff / (static_cast<double>(pq1.second) * static_cast<double>(pq2.second));
    const double bound = 6.0 * std::sqrt(2.0 * lambda) * std::sqrt(gap);
    r.add("hausdorff_distance", frac(pq1.first, pq1.second) + " vs " + frac(pq2.first, pq2.second),
          hausdorff_distance(s1, s2), bound, Relation::AtMost);
    return r;
  });
}

VerificationReport verify_lower_bound(double lambda, const std::vector<std::int64_t>& q_list) {
  require_subcritical(lambda, "verify_lower_bound");
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "spectrum_lower_bound";
    r.parameters = {{"lambda", lambda}, {"q_max", q_list.empty() ? std::int64_t{0} : q_list.back()}};
    std::vector<std::pair<std::int64_t, std::int64_t>> work;
    for (const auto q : q_list)
      for (const auto p : numerators(q)) work.emplace_back(p, q);
    const auto measures = parallel_map(work.size(), [&](std::size_t i) {
      return band_spectrum(lambda, work[i].first, work[i].second).sigma_set().measure();
    });
    for (std::size_t i = 0; i < work.size(); ++i)
      r.add("spectrum_measure", frac(work[i].first, work[i].second), measures[i], 4.0 - 4.0 * lambda - 1e-7,
            Relation::AtLeast);
    return r;
  });
}

VerificationReport verify_NX(double lambda, const ContinuedFraction& cf, std::size_t n_convergents, double c,
                             double beta, double final_min) {
  require_subcritical(lambda, "verify_NX");
  if (c <= 0.0) c = default_c(beta, lambda);
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "nx_trend";
    r.empirical = final_min > 0.0;
    r.parameters = {{"lambda", lambda}, {"c", c}, {"n_convergents", static_cast<std::int64_t>(n_convergents)}};
    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k <= cf.size(); ++k)
      if (ks.empty() || cf.q(k) != cf.q(ks.back())) ks.push_back(k);
    if (ks.size() > n_convergents) ks.erase(ks.begin(), ks.end() - static_cast<std::ptrdiff_t>(n_convergents));

    std::vector<double> values;
    for (const std::size_t k : ks) {
      const std::int64_t p = cf.p(k), q = cf.q(k);
      const PqWindow w = make_window(q, c);
      const BandSpectrum spec = band_spectrum(lambda, p, q);
      const IntervalSet x = w.empty() ? IntervalSet{} : build_X(spec, w);
      const double v = x.empty() ? 0.0 : n_measure(spec, x);
      r.add_info(x.empty() ? "nx_degenerate" : "nx", frac(p, q), v);
      values.push_back(v);
    }
    const bool all_degenerate = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    if (values.size() >= 2 && !all_degenerate) {
      for (std::size_t i = 1; i < values.size(); ++i)
        r.add("nx_step", frac(cf.p(ks[i - 1]), cf.q(ks[i - 1])) + " -> " + frac(cf.p(ks[i]), cf.q(ks[i])),
              values[i] - values[i - 1], -0.02, Relation::AtLeast);
      const double best_before = *std::max_element(values.begin(), values.end() - 1);
      r.add("nx_last_vs_earlier", frac(cf.p(ks.back()), cf.q(ks.back())), values.back() - best_before, -0.02,
            Relation::AtLeast);
    }
    if (final_min > 0.0 && !values.empty())
      r.add("nx_final", frac(cf.p(ks.back()), cf.q(ks.back())), values.back(), final_min, Relation::AtLeast);
    return r;
  });
}

VerificationReport verify_sigma_diff(double lambda, std::int64_t p, std::int64_t q, std::int64_t p_fine,
                                     std::int64_t q_fine, double c) {
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "sigma_difference";
    r.empirical = true;
    r.parameters = {{"lambda", lambda}, {"alpha", frac(p, q)}, {"alpha_fine", frac(p_fine, q_fine)}, {"c", c}};
    const IntervalSet coarse = band_spectrum(lambda, p, q).sigma_set();
    const IntervalSet fine = band_spectrum(lambda, p_fine, q_fine).sigma_set();
    const double diff = coarse.subtract(fine).measure();
    r.add("sigma_difference", frac(p, q) + " minus " + frac(p_fine, q_fine), diff,
          std::exp(-c * static_cast<double>(q)), Relation::None);
    return r;
  });
}

VerificationReport verify_sigma_diff_trend(double lambda, const ContinuedFraction& cf, std::size_t n_coarse) {
  if (cf.size() < 2) throw std::invalid_argument("verify_sigma_diff_trend: need at least two convergents");
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "sigma_difference_trend";
    r.empirical = true;
    const std::size_t kf = cf.size();
    const std::int64_t pf = cf.p(kf), qf = cf.q(kf);
    const double c = -0.5 * std::log(lambda);
    r.parameters = {{"lambda", lambda}, {"alpha_fine", frac(pf, qf)}, {"c", c}};
    const IntervalSet fine = band_spectrum(lambda, pf, qf).sigma_set();
    std::vector<std::size_t> ks;
    for (std::size_t k = kf; k-- > 0 && ks.size() < n_coarse;)
      if (cf.q(k) < qf && (ks.empty() || cf.q(k) != cf.q(ks.back()))) ks.push_back(k);
    std::reverse(ks.begin(), ks.end());
    std::vector<double> diffs;
    for (const std::size_t k : ks) {
      const double d = band_spectrum(lambda, cf.p(k), cf.q(k)).sigma_set().subtract(fine).measure();
      r.add("sigma_difference", frac(cf.p(k), cf.q(k)) + " minus " + frac(pf, qf), d,
            std::exp(-c * static_cast<double>(cf.q(k))), Relation::None);
      diffs.push_back(d);
    }
    for (std::size_t i = 1; i < diffs.size(); ++i)
      r.add("sigma_difference_step", frac(cf.p(ks[i]), cf.q(ks[i])), diffs[i] - diffs[i - 1], 1e-12,
            Relation::AtMost);
    return r;
  });
}

VerificationReport verify_ids(double lambda, const std::vector<std::int64_t>& q_list) {
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "ids_consistency";
    r.parameters = {{"lambda", lambda}};
    for (const auto q : q_list) {
      const BandSpectrum spec = band_spectrum(lambda, 1, q);
      for (const auto& b : spec.bands()) {
        const double inc = ids(spec, b.sigma_hi) - ids(spec, b.sigma_lo);
        r.add("band_increment_error", frac(1, q) + " k=" + std::to_string(b.k),
              std::abs(inc - 1.0 / static_cast<double>(q)), 1e-6, Relation::AtMost);
      }
      // 20 energies at measure quantiles of sigma.
      const IntervalSet inner = spec.inner_set();
      const double total = inner.measure();
      for (int j = 0; j < 20; ++j) {
        double target = total * (j + 0.5) / 20.0;
        for (const auto& piece : inner.intervals()) {
          if (target > piece.length()) {
            target -= piece.length();
            continue;
          }
          const double e = piece.lo + target;
          const double h = 1e-5 * piece.length();
          const double numeric = (ids(spec, e + h) - ids(spec, e - h)) / (2.0 * h);
          const double d = ids_density(spec, e);
          r.add("density_error_excess", frac(1, q) + " E=" + num(e),
                std::abs(numeric - d) - std::max(1e-3, 1e-2 * d), 0.0, Relation::AtMost);
          break;
        }
      }
    }
    for (int j = 0; j < 50; ++j) {
      const double e = -2.0 + 4.0 * (j + 0.5) / 50.0;
      const double exact = 1.0 - std::acos(e / 2.0) / std::numbers::pi;
      r.add("free_ids_error", "E=" + num(e), std::abs(ids(0.0, 0, 1, e) - exact), 1e-6, Relation::AtMost);
    }
    return r;
  });
}

VerificationReport verify_thouless(const std::vector<double>& lambdas, const std::vector<std::int64_t>& q_list) {
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "thouless_formula";
    r.parameters = {{"lambdas", lambdas}, {"n_energies", std::int64_t{10}}, {"n_steps", std::int64_t{10000}}};
    for (const double lambda : lambdas) {
      for (const auto q : q_list) {
        const std::int64_t p = q == 1 ? 0 : 1;
        const ThoulessReport t = thouless_consistency(lambda, p, q, 10);
        r.add("thouless_vs_cocycle", "lambda=" + num(lambda) + " " + frac(p, q), t.max_diff, 0.02,
              Relation::AtMost);
      }
    }
    // L vanishes on Sigma for lambda = 1/2, up to O(lambda^q) off sigma, so
    // only the largest q is checked: every piece of each band.
    if (!q_list.empty()) {
      const std::int64_t q = *std::max_element(q_list.begin(), q_list.end());
      const std::int64_t p = q == 1 ? 0 : 1;
      const BandSpectrum spec = band_spectrum(0.5, p, q);
      const IDSProfile profile(spec);
      for (const auto& b : spec.bands()) {
        for (const double e : {0.5 * (b.sigma_lo + b.inner_lo), 0.5 * (b.inner_lo + b.inner_hi),
                               0.5 * (b.inner_hi + b.sigma_hi)}) {
          r.add("L_on_spectrum", "lambda=0.5 " + frac(p, q) + " E=" + num(e), std::abs(thouless_L(profile, e)), 0.02,
                Relation::AtMost);
        }
      }
    }
    return r;
  });
}

VerificationReport verify_sl2_identities(std::uint64_t seed, int n_checks) {
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "sl2_identities";
    r.parameters = {{"seed", static_cast<std::int64_t>(seed)}, {"n_checks", static_cast<std::int64_t>(n_checks)}};
    Uniform u(seed);
    double hs = 0.0, fp = 0.0, fp_bound = -std::numeric_limits<double>::infinity(), lip = -1e300, mid = 0.0;
    for (int i = 0; i < n_checks; ++i) {
      const Mat2R a = random_sl2(u, 2.0);
      const double v = phi(moebius_act(a, HPoint::i()));
      hs = std::max(hs, std::abs(v - hs_norm_sq(a) / 2.0) / v);

      // Elliptic element with rotation number rho, conjugated by a.
      const double rho = u(0.01, 0.49);
      const Mat2R ell = a * rotation(rho) * a.inverse();
      const EllipticData ed = elliptic_data(ell);
      const double direct = phi(ed.fixed_point);
      fp = std::max(fp, std::abs(elliptic_fixed_point_phi(hs_norm_sq(ell), ed.rho) - direct) / direct);
      const double bound = elliptic_fixed_point_phi_bound(hs_norm_sq(ell), ed.rho);
      fp_bound = std::max(fp_bound, (direct - bound) / bound);

      const HPoint z = random_hpoint(u), w = random_hpoint(u);
      lip = std::max(lip, std::abs(std::log(phi(z)) - std::log(phi(w))) - hyperbolic_dist(z, w));

      const MidpointTriple t = midpoint_triple(a, std::exp(u(-3.0, 3.0)));
      const double sum = phi(t.z1) + phi(t.z2);
      mid = std::max(mid, std::abs(sum - t.factor * phi(t.z3)) / sum);
    }
    r.add("phi_vs_hs_norm", "max relative error", hs, 1e-8, Relation::AtMost);
    r.add("fixed_point_phi", "max relative error", fp, 1e-8, Relation::AtMost);
    r.add("fixed_point_phi_bound", "max relative excess", fp_bound, 1e-8, Relation::AtMost);
    r.add("log_phi_lipschitz", "max excess over distance", lip, 1e-8, Relation::AtMost);
    r.add("midpoint_factor", "max relative error", mid, 1e-8, Relation::AtMost);
    return r;
  });
}

VerificationReport verify_midpoint(std::uint64_t seed, int n_triples) {
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "midpoint_inequality";
    r.parameters = {{"seed", static_cast<std::int64_t>(seed)}, {"n_triples", static_cast<std::int64_t>(n_triples)}};
    Uniform u(seed ^ 0x9e3779b97f4a7c15ULL);
    double worst = std::numeric_limits<double>::infinity(), defect = 0.0;
    for (int i = 0; i < n_triples; ++i) {
      const Mat2R a = random_sl2(u, 2.0);
      const MidpointTriple t = midpoint_triple(a, std::exp(u(-3.0, 3.0)));
      worst = std::min(worst, phi(t.z1) + phi(t.z2) - 2.0 * phi(t.z3));
      defect = std::max(defect, midpoint_collinearity(random_sl2(u, 2.0), random_hpoint(u)));
    }
    r.add("midpoint_margin", "min phi(z1)+phi(z2)-2phi(z3)", worst, -1e-10, Relation::AtLeast);
    r.add("geodesic_defect", "max", defect, 1e-8, Relation::AtMost);
    return r;
  });
}

VerificationReport verify_hausdorff_pairs(const std::vector<double>& lambdas) {
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "hausdorff_continuity";
    r.parameters = {{"lambdas", lambdas}};
    using Frac = std::pair<std::int64_t, std::int64_t>;
    std::vector<std::pair<Frac, Frac>> pairs;
    auto consecutive = [&](const ContinuedFraction& cf, std::int64_t q_min, std::int64_t q_max) {
      for (std::size_t k = 0; k < cf.size(); ++k) {
        if (cf.q(k) < q_min || cf.q(k + 1) > q_max || cf.q(k) == cf.q(k + 1)) continue;
        pairs.push_back({{cf.p(k), cf.q(k)}, {cf.p(k + 1), cf.q(k + 1)}});
      }
    };
    consecutive(golden(12), 8, 55);
    consecutive(build_liouville_max(0.25), 3, 60);
    consecutive(build_liouville_max(0.5), 3, 60);
    struct Row {
      std::string label;
      double dist, bound;
    };
    std::vector<std::pair<double, std::size_t>> work;
    for (const double lambda : lambdas)
      for (std::size_t i = 0; i < pairs.size(); ++i) work.emplace_back(lambda, i);
    const auto rows = parallel_map(work.size(), [&](std::size_t j) {
      const auto [lambda, i] = work[j];
      const auto [a, b] = pairs[i];
      const double gap = std::abs(static_cast<double>(a.first * b.second - b.first * a.second)) /
                         (static_cast<double>(a.second) * static_cast<double>(b.second));
      const double d = hausdorff_distance(band_spectrum(lambda, a.first, a.second).sigma_set(),
                                          band_spectrum(lambda, b.first, b.second).sigma_set());
      return Row{"lambda=" + num(lambda) + " " + frac(a.first, a.second) + " vs " + frac(b.first, b.second), d,
                 6.0 * std::sqrt(2.0 * lambda) * std::sqrt(gap)};
    });
    for (const auto& row : rows) r.add("hausdorff_distance", row.label, row.dist, row.bound, Relation::AtMost);
    return r;
  });
}

VerificationReport verify_pq_trend() {
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "pq_measure_trend";
    r.empirical = true;
    const std::vector<std::int64_t> qs{8, 12, 16, 24};
    r.parameters = {{"c", 0.5}, {"q_list", std::vector<double>(qs.begin(), qs.end())}};
    std::vector<double> values;
    for (const auto q : qs) {
      const PqWindow w = make_window(q, 0.5);
      values.push_back(pq_measure_exact(w));
      r.add("pq_measure", "q=" + std::to_string(q) + " b in [" + std::to_string(w.b_lo) + "," +
                              std::to_string(w.b_hi) + "]",
            values.back(), 0.5, Relation::AtMost);
    }
    for (std::size_t i = 1; i < values.size(); ++i)
      r.add("pq_step", "q=" + std::to_string(qs[i]), values[i] - values[i - 1], 0.0, Relation::AtLeast);
    r.add("pq_final", "q=" + std::to_string(qs.back()), values.back(), 0.4, Relation::AtLeast);
    return r;
  });
}

VerificationReport verify_orbit(double lambda) {
  require_subcritical(lambda, "verify_orbit");
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "orbit_rotation";
    r.parameters = {{"lambda", lambda}, {"offsets", std::vector<double>{1e-8, 1e-10, 1e-12}}};
    const auto cases = rigged_cases(lambda);
    double sanity = 0.0;
    std::int64_t violations = 0, mismatches = 0, witnessed = 0;
    for (const auto& c : cases) {
      sanity = std::max(sanity, rotation_sanity(lambda, c.p, c.q, c.energy, c.theta));
      double prev = std::numeric_limits<double>::infinity();
      for (const double d : {1e-8, 1e-10, 1e-12}) {
        const OrbitExperiment ex{lambda, c.p, c.q, Frequency::perturbed(c.p, c.q, d), c.energy, c.b, c.theta, c.a,
                                 std::nullopt};
        const OrbitResult o = orbit_deviation(ex);
        if (!(o.deviation < prev)) ++violations;
        prev = o.deviation;
        mismatches += o.mismatch() ? 1 : 0;
        ++witnessed;
      }
    }
    // Witnessed cases at X midpoints of a built Liouville convergent.
    const ContinuedFraction cf = build_liouville_max(0.25);
    const std::size_t kc = cf.size() - 1;
    const std::int64_t p = cf.p(kc), q = cf.q(kc);
    const BandSpectrum spec = band_spectrum(lambda, p, q);
    const PqWindow w = make_window(q, default_c(0.25, lambda));
    const IntervalSet x = w.empty() ? IntervalSet{} : build_X(spec, w);
    for (const auto& piece : x.intervals()) {
      const double e = 0.5 * (piece.lo + piece.hi);
      const auto wit = pq_member(rho_bar(lambda, p, q, e), w);
      if (!wit) continue;
      for (int t = 0; t < 8; ++t) {
        sanity = std::max(sanity, rotation_sanity(lambda, p, q, e, t / 8.0));
        for (const double d : {1e-8, 1e-10, 1e-12}) {
          const OrbitExperiment ex{lambda, p, q, Frequency::perturbed(p, q, d), e, wit->b, t / 8.0, wit->a, w};
          mismatches += orbit_deviation(ex).mismatch() ? 1 : 0;
          ++witnessed;
        }
      }
    }
    r.add_info("rigged_cases", "exact quarter turns", static_cast<double>(cases.size()));
    r.add_info("witnessed_cases", "rigged and X midpoints", static_cast<double>(witnessed));
    r.add("rotation_sanity", "max ||B^-1 A_q B - R||", sanity, 1e-7, Relation::AtMost);
    r.add("monotone_violations", "rigged cases", static_cast<double>(violations), 0.0, Relation::AtMost);
    r.add("rotation_mismatches", "witnessed cases", static_cast<double>(mismatches), 0.0, Relation::AtMost);
    return r;
  });
}

VerificationReport verify_avera(double lambda) {
  require_subcritical(lambda, "verify_avera");
  return timed([&] {
    VerificationReport r;
    r.lemma_id = "avera_proxy";
    r.empirical = true;
    r.parameters = {{"lambda", lambda}, {"beta", 0.25}, {"theta_samples", std::int64_t{32}}};
    double tight = std::numeric_limits<double>::infinity();
    std::int64_t n_tight = 0;
    for (const auto& c : rigged_cases(lambda)) {
      const OrbitExperiment ex{lambda, c.p, c.q, Frequency::rational(c.p, c.q), c.energy, c.b, c.theta, c.a,
                               std::nullopt};
      if (orbit_deviation(ex).deviation >= 1e-9) continue;
      ++n_tight;
      tight = std::min(tight, avera_check(ex, c.p, c.q).ratio);
    }
    r.add_info("tight_cases", "orbit deviation < 1e-9", static_cast<double>(n_tight));
    if (n_tight > 0) r.add("tight_ratio", "min ratio", tight, 1.0 - 1e-6, Relation::AtLeast);

    const TwoScaleReport ts = two_scale_experiment(lambda, 0.25);
    const std::string scales = frac(ts.p, ts.q) + " -> " + frac(ts.p_fine, ts.q_fine);
    r.add_info("two_scale_energies", scales, static_cast<double>(ts.energies));
    r.add_info("two_scale_max_deviation", scales, ts.max_deviation);
    r.add_info("two_scale_short_circuits", scales, static_cast<double>(ts.short_circuits));
    if (ts.energies > 0) {
      r.add("two_scale_ratio", scales + " min over E and theta", ts.min_ratio, 0.9, Relation::AtLeast);
      r.add("two_scale_mismatches", scales, static_cast<double>(ts.mismatches), 0.0, Relation::AtMost);
    }

    const BandSpectrum spec = band_spectrum(lambda, ts.p, ts.q);
    const IntervalSet x = ts.window.empty() ? IntervalSet{} : build_X(spec, ts.window);
    if (!x.empty()) {
      const OqReport oq = oq_report(spec, x);
      r.add("phi_growth", frac(ts.p, ts.q) + " sup ln phi(m) / q", oq.sup_ratio, 0.2, Relation::AtMost);
    }
    return r;
  });
}

namespace {

using SuiteEntry = std::pair<const char*, VerificationReport (*)(const SuiteConfig&)>;

const std::vector<SuiteEntry>& suite_table() {
  static const std::vector<SuiteEntry> table = {
      {"sigma_measure",
       [](const SuiteConfig& c) {
         std::vector<std::int64_t> qs(30);
         std::iota(qs.begin(), qs.end(), 1);
         return verify_sigma_measure(c.lambda, qs);
       }},
      {"spectrum_lower_bound",
       [](const SuiteConfig& c) {
         std::vector<std::int64_t> qs(20);
         std::iota(qs.begin(), qs.end(), 1);
         return verify_lower_bound(c.lambda, qs);
       }},
      {"hausdorff_continuity", [](const SuiteConfig& c) { return verify_hausdorff_pairs({c.lambda}); }},
      {"nx_trend", [](const SuiteConfig& c) { return verify_NX(c.lambda, build_liouville_max(1.0), 3, 0.1, 1.0); }},
      {"sigma_difference_trend", [](const SuiteConfig& c) { return verify_sigma_diff_trend(c.lambda, golden(10), 6); }},
      {"ids_consistency", [](const SuiteConfig& c) { return verify_ids(c.lambda, {3, 5, 8}); }},
      {"thouless_formula", [](const SuiteConfig& c) { return verify_thouless({0.0, c.lambda, 2.0}, {1, 8}); }},
      {"sl2_identities", [](const SuiteConfig& c) { return verify_sl2_identities(c.seed, 10000); }},
      {"midpoint_inequality", [](const SuiteConfig& c) { return verify_midpoint(c.seed, 1000); }},
      {"pq_measure_trend", [](const SuiteConfig&) { return verify_pq_trend(); }},
      {"orbit_rotation", [](const SuiteConfig& c) { return verify_orbit(c.lambda); }},
      {"avera_proxy", [](const SuiteConfig& c) { return verify_avera(c.lambda); }},
  };
  return table;
}

}  // namespace

std::vector<std::string> suite_ids() {
  std::vector<std::string> ids;
  for (const auto& e : suite_table()) ids.emplace_back(e.first);
  return ids;
}

std::vector<VerificationReport> run_suite(const SuiteConfig& cfg, const std::vector<std::string>& ids) {
  std::vector<SuiteEntry> picked;
  for (const auto& id : ids) {
    auto it = std::find_if(suite_table().begin(), suite_table().end(),
                           [&](const SuiteEntry& e) { return id == e.first; });
    if (it == suite_table().end()) throw std::invalid_argument("verify: unknown report id '" + id + "'");
    picked.push_back(*it);
  }
  std::vector<VerificationReport> out;
  for (const auto& e : picked) out.push_back(e.second(cfg));
  return out;
}

std::vector<VerificationReport> run_all(const SuiteConfig& cfg) { return run_suite(cfg, suite_ids()); }

}  // namespace amo
