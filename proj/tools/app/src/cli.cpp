#include "amo_app/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "amo/errors.hpp"
#include "amo/parallel.hpp"
#include "amo/renorm.hpp"
#include "amo/thouless.hpp"
#include "amo/verify.hpp"
#include "amo_app/export.hpp"
#include "json.hpp"

namespace amo::app {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<std::string> targets;
  double lambda = 0.5;
  std::int64_t p = 1, q = 1;
  std::vector<std::int64_t> quotients;
  double beta = 0.0;
  std::int64_t k = -1;
  std::vector<double> energies;
  int n_energies = 10;
  std::int64_t n_steps = 10000;
  std::int64_t m_samples = 64;
  std::int64_t q_max = 20;
  double c = 0.0;
  double rho = 0.0;
  std::int64_t a = 1, b = 1;
  double theta = 0.0;
  double delta = 0.0;
  std::int64_t p_fine = 0, q_fine = 1;
  std::string format = "csv";
  std::string out = "-";
  std::string svg;
  int threads = 1;
  std::uint64_t seed = 1;
  bool timing = false;

  // Which options were given, on the command line or in the config file.
  bool has_p = false, has_q = false, has_quotients = false, has_beta = false, has_k = false;
  bool has_energies = false, has_m_samples = false, has_c = false, has_rho = false, has_a = false, has_b = false;
  bool has_fine = false;
};

const char* module_of(const std::string& command) {
  if (command == "bands" || command == "butterfly" || command == "ids") return "periodic";
  if (command == "lyapunov") return "thouless";
  if (command == "pq" || command == "x-set") return "diophantine";
  if (command == "orbit") return "renorm";
  return "verify";
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

bool finite(double x) { return std::isfinite(x); }

// Every numeric field is checked here, before anything is computed.
void validate(const RunConfig& cfg) {
  require(finite(cfg.lambda) && cfg.lambda >= 0.0, "--lambda must be finite and >= 0");
  if (cfg.has_q) require(cfg.q >= 1 && cfg.q <= kDefaultQMax, "--q must lie in [1, " + std::to_string(kDefaultQMax) + "]");
  for (auto a : cfg.quotients) require(a >= 1, "--quotients entries must be >= 1");
  if (cfg.has_beta) require(finite(cfg.beta) && cfg.beta > 0.0 && cfg.beta <= 4.0, "--beta must lie in (0, 4]");
  for (double e : cfg.energies) require(finite(e), "--E values must be finite");
  require(cfg.n_energies >= 1 && cfg.n_energies <= 100000, "--energies must lie in [1, 100000]");
  require(cfg.n_steps >= 1 && cfg.n_steps <= 100000000, "--n-steps must lie in [1, 1e8]");
  require(cfg.m_samples >= 0 && cfg.m_samples <= 1000000, "--m-samples must lie in [0, 1e6]");
  require(cfg.q_max >= 1 && cfg.q_max <= kButterflyQMax, "--q-max must lie in [1, " + std::to_string(kButterflyQMax) + "]");
  if (cfg.has_c) require(finite(cfg.c) && cfg.c > 0.0, "--c must be finite and > 0");
  if (cfg.has_rho) require(finite(cfg.rho) && cfg.rho >= 0.0 && cfg.rho <= 0.5, "--rho must lie in [0, 1/2]");
  if (cfg.has_b) require(cfg.b >= 1, "--b must be >= 1");
  require(finite(cfg.theta), "--theta must be finite");
  require(finite(cfg.delta) && std::abs(cfg.delta) < 0.5, "--delta must be finite with |delta| < 1/2");
  if (cfg.has_fine) require(cfg.q_fine >= 1, "--q-fine must be >= 1");
  require(cfg.threads >= 1 && cfg.threads <= 1024, "--threads must lie in [1, 1024]");
  require(!(cfg.has_quotients && cfg.has_beta), "give at most one of --quotients and --beta");
  require(!((cfg.has_quotients || cfg.has_beta) && (cfg.has_p || cfg.has_q) && cfg.command != "pq"),
          "give the frequency either as --p/--q or as --quotients/--beta");
}

std::optional<ContinuedFraction> continued_fraction(const RunConfig& cfg) {
  if (cfg.has_quotients) return ContinuedFraction::from_quotients(0, cfg.quotients, true);
  if (cfg.has_beta) return build_liouville_max(cfg.beta);
  return std::nullopt;
}

struct Fraction {
  std::int64_t p, q;
  std::optional<ContinuedFraction> cf;
  std::size_t k = 0;
};

// p/q directly, or convergent k of a quotient list or a built Liouville
// frequency. The last convergent of a built frequency is alpha itself with a
// huge q, so there the default steps one further back.
Fraction fraction(const RunConfig& cfg, std::size_t default_back = 0) {
  if (auto cf = continued_fraction(cfg)) {
    if (cfg.has_beta) default_back = std::max<std::size_t>(default_back, 1);
    require(cf->size() >= default_back, "frequency has too few convergents");
    const std::size_t k = cfg.has_k ? static_cast<std::size_t>(cfg.k) : cf->size() - default_back;
    require(cfg.k < 0 || static_cast<std::size_t>(cfg.k) <= cf->size(),
            "--k exceeds the number of convergents (" + std::to_string(cf->size()) + ")");
    return {cf->p(k), cf->q(k), cf, k};
  }
  require(cfg.has_q, "a frequency is required: --p/--q, --quotients or --beta");
  return {cfg.p, cfg.q, std::nullopt, 0};
}

double window_c(const RunConfig& cfg) {
  if (cfg.has_c) return cfg.c;
  require(cfg.has_beta, "--c is required unless --beta is given");
  return default_c(cfg.beta, cfg.lambda);
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    os_ = &file_;
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::string num(double x) { return fmt(x); }

int cmd_bands(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = fraction(cfg);
  const auto spec = band_spectrum(cfg.lambda, f.p, f.q);
  const auto rows = band_rows(spec);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") write_bands_json(*sink, rows); else write_bands_csv(*sink, rows);

  const double big = spec.sigma_set().measure(), small = spec.inner_set().measure();
  err << "bands: lambda=" << num(cfg.lambda) << " p/q=" << f.p << '/' << f.q << " |Sigma|=" << num(big)
      << " |sigma|=" << num(small);
  if (cfg.lambda > 0.0 && cfg.lambda < 1.0) {
    const double bound = 4.0 * std::numbers::pi * std::pow(cfg.lambda, 0.5 * static_cast<double>(f.q));
    err << " 4-4lambda=" << num(4.0 - 4.0 * cfg.lambda) << " gap=" << num(big - small) << " bound=" << num(bound)
        << (big - small <= bound * (1.0 + 1e-6) ? " ok" : " VIOLATED");
  }
  err << '\n';
  return kExitOk;
}

int cmd_butterfly(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rows = butterfly(cfg.lambda, cfg.q_max);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") write_butterfly_json(*sink, cfg.lambda, rows); else write_butterfly_csv(*sink, rows);
  if (!cfg.svg.empty()) {
    Sink svg(cfg.svg, out);
    write_butterfly_svg(*svg, cfg.lambda, rows);
  }
  err << "butterfly: lambda=" << num(cfg.lambda) << " q_max=" << cfg.q_max << " bands=" << rows.size() << '\n';
  return kExitOk;
}

int cmd_ids(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require(cfg.has_energies, "ids needs at least one --E");
  const auto f = fraction(cfg);
  const auto spec = band_spectrum(cfg.lambda, f.p, f.q);
  const auto values = parallel_map(cfg.energies.size(), [&](std::size_t i) { return ids(spec, cfg.energies[i], cfg.m_samples); });
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i) arr.push_back({{"E", cfg.energies[i]}, {"N", values[i]}});
    *sink << arr.dump(2) << '\n';
  } else {
    *sink << "E,N\n";
    for (std::size_t i = 0; i < values.size(); ++i) *sink << num(cfg.energies[i]) << ',' << num(values[i]) << '\n';
  }
  return kExitOk;
}

int cmd_lyapunov(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = fraction(cfg);
  const std::int64_t m = cfg.has_m_samples ? cfg.m_samples : 0;
  const auto r = cfg.has_energies ? thouless_consistency(cfg.lambda, f.p, f.q, cfg.energies, cfg.n_steps, m)
                                  : thouless_consistency(cfg.lambda, f.p, f.q, cfg.n_energies, cfg.n_steps, m);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") write_thouless_json(*sink, r); else write_thouless_csv(*sink, r);
  err << "lyapunov: lambda=" << num(cfg.lambda) << " p/q=" << f.p << '/' << f.q << " max|diff|=" << num(r.max_diff)
      << '\n';
  return kExitOk;
}

int cmd_pq(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require(cfg.has_q, "pq needs --q");
  const auto w = make_window(cfg.q, window_c(cfg));
  Sink sink(cfg.out, out);
  if (cfg.has_rho) {
    const auto wit = pq_member(cfg.rho, w);
    if (cfg.format == "json") {
      Json j;
      j["q"] = w.q;
      j["c"] = w.c;
      j["rho"] = cfg.rho;
      j["member"] = wit.has_value();
      j["a"] = wit ? Json(wit->a) : Json(nullptr);
      j["b"] = wit ? Json(wit->b) : Json(nullptr);
      *sink << j.dump(2) << '\n';
    } else {
      *sink << "q,c,rho,member,a,b\n"
            << w.q << ',' << num(w.c) << ',' << num(cfg.rho) << ',' << (wit ? "true" : "false") << ','
            << (wit ? std::to_string(wit->a) : "") << ',' << (wit ? std::to_string(wit->b) : "") << '\n';
    }
    err << "pq: rho=" << num(cfg.rho) << (wit ? " in P_q, witness a=" + std::to_string(wit->a) + " b=" + std::to_string(wit->b) : " not in P_q")
        << '\n';
    return kExitOk;
  }
  const auto set = pq_intervals(w);
  if (cfg.format == "json") write_pq_json(*sink, w, set); else write_pq_csv(*sink, set);
  err << "pq: q=" << w.q << " b in [" << w.b_lo << ", " << w.b_hi << "] |P_q|=" << num(set.measure()) << '\n';
  return kExitOk;
}

int cmd_x_set(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto f = fraction(cfg);
  const auto spec = band_spectrum(cfg.lambda, f.p, f.q);
  const auto w = make_window(f.q, window_c(cfg));
  const auto x = build_X(spec, w);
  const auto rows = band_rows(spec, &x);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") write_bands_json(*sink, rows); else write_bands_csv(*sink, rows);
  err << "x-set: p/q=" << f.p << '/' << f.q << " c=" << num(w.c) << " pieces=" << x.size() << " |X|=" << num(x.measure())
      << " N(X)=" << num(n_measure(spec, x)) << '\n';
  return kExitOk;
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require(cfg.energies.size() == 1, "orbit needs exactly one --E");
  const auto start = std::chrono::steady_clock::now();
  // Coarse scale: the second-to-last convergent unless --k says otherwise.
  const auto f = fraction(cfg, 1);
  const Frequency alpha = f.cf ? f.cf->frequency(f.k) : Frequency::perturbed(f.p, f.q, cfg.delta);
  std::optional<PqWindow> window;
  if (cfg.has_c || cfg.has_beta) window = make_window(f.q, window_c(cfg));

  const double e = cfg.energies.front();
  std::optional<std::int64_t> a = cfg.has_a ? std::optional<std::int64_t>(cfg.a) : std::nullopt;
  std::int64_t b = cfg.b;
  if (!cfg.has_b) {
    require(window.has_value(), "orbit needs --b, or a window (--c or --beta) to find a witness");
    const auto wit = pq_member(rho_bar(cfg.lambda, f.p, f.q, e), *window);
    if (!wit) throw std::invalid_argument("rho_bar(E) has no witness in the window");
    b = wit->b;
    if (!a) a = wit->a;
  }
  const OrbitExperiment ex{cfg.lambda, f.p, f.q, alpha, e, b, cfg.theta, a, window};
  const auto r = orbit_deviation(ex);

  Json j;
  j["lambda"] = cfg.lambda;
  j["p"] = f.p;
  j["q"] = f.q;
  j["alpha_offset"] = alpha.offset();
  j["E"] = e;
  j["theta"] = cfg.theta;
  j["b"] = b;
  j["a"] = a ? Json(*a) : Json(nullptr);
  j["deviation"] = r.deviation;
  j["which"] = r.which;
  j["epsilon"] = r.epsilon;
  j["predicted"] = r.predicted ? Json(*r.predicted) : Json(nullptr);
  j["mismatch"] = r.mismatch();

  std::optional<std::pair<std::int64_t, std::int64_t>> fine;
  if (cfg.has_fine) fine = {cfg.p_fine, cfg.q_fine};
  else if (f.cf && f.k < f.cf->size()) fine = {f.cf->p(f.cf->size()), f.cf->q(f.cf->size())};
  if (fine) {
    const auto av = avera_check(ex, fine->first, fine->second);
    Json s;
    s["p_fine"] = fine->first;
    s["q_fine"] = fine->second;
    s["lhs"] = av.lhs;
    s["rhs"] = av.rhs;
    s["ratio"] = av.ratio;
    s["short_circuit"] = av.short_circuit;
    s["eq1_defect"] = av.eq1_defect;
    s["eq2_ratio"] = av.eq2_ratio;
    j["avera"] = std::move(s);
  }
  if (cfg.timing)
    j["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Sink sink(cfg.out, out);
  *sink << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> ids = cfg.targets;
  if (ids.empty() || (ids.size() == 1 && ids.front() == "all")) ids = suite_ids();
  const auto reports = run_suite(SuiteConfig{cfg.lambda, cfg.seed}, ids);
  Sink sink(cfg.out, out);
  *sink << to_json(reports, cfg.timing);
  bool ok = true;
  for (const auto& r : reports) {
    err << "verify: " << r.lemma_id << ' ' << to_string(r.status) << '\n';
    ok = ok && r.pass();
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Almost Mathieu operator: band spectra, IDS, Lyapunov exponents, Diophantine sets, checks."};
  app.name("amo");
  const std::vector<std::string> commands = {"bands", "butterfly", "ids", "lyapunov", "pq", "x-set", "orbit", "verify"};
  app.add_option("command", cfg.command, "bands | butterfly | ids | lyapunov | pq | x-set | orbit | verify")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("targets", cfg.targets, "verify: 'all' or report ids");

  auto* o_p = app.add_option("--p", cfg.p, "numerator of the frequency p/q");
  auto* o_q = app.add_option("--q", cfg.q, "denominator of the frequency p/q");
  app.add_option("--lambda", cfg.lambda, "coupling (default 0.5)");
  auto* o_quot = app.add_option("--quotients", cfg.quotients, "partial quotients a1,a2,... of alpha in (0,1)")->delimiter(',');
  auto* o_beta = app.add_option("--beta", cfg.beta, "build a Liouville-type frequency with this beta");
  auto* o_k = app.add_option("--k", cfg.k, "convergent index (default: last, one earlier for --beta and for orbit)");
  auto* o_e = app.add_option("--E", cfg.energies, "energies (repeat or comma-separate)")->delimiter(',');
  app.add_option("--energies", cfg.n_energies, "lyapunov: number of grid energies when no --E (default 10)");
  app.add_option("--n-steps", cfg.n_steps, "lyapunov: cocycle steps (default 10000)");
  auto* o_m = app.add_option("--m-samples", cfg.m_samples, "theta samples (ids default 64, lyapunov default 128q)");
  app.add_option("--q-max", cfg.q_max, "butterfly: largest denominator (default 20)");
  auto* o_c = app.add_option("--c", cfg.c, "window exponent for P_q");
  auto* o_rho = app.add_option("--rho", cfg.rho, "pq: test this rotation number");
  auto* o_a = app.add_option("--a", cfg.a, "orbit: odd witness numerator");
  auto* o_b = app.add_option("--b", cfg.b, "orbit: witness denominator");
  app.add_option("--theta", cfg.theta, "orbit: phase");
  app.add_option("--delta", cfg.delta, "orbit: alpha - p/q for --p/--q input");
  auto* o_pf = app.add_option("--p-fine", cfg.p_fine, "orbit: fine-scale numerator");
  auto* o_qf = app.add_option("--q-fine", cfg.q_fine, "orbit: fine-scale denominator");
  app.add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "output file ('-' for stdout)");
  app.add_option("--svg", cfg.svg, "butterfly: also write an SVG here");
  app.add_option("--threads", cfg.threads, "worker threads (AMO_THREADS overrides)");
  app.add_option("--seed", cfg.seed, "verify: seed of the randomized checks");
  app.add_flag("--timing", cfg.timing, "include runtimes in JSON output");
  app.set_config("--config", "", "flat key=value file; keys are the long flag names");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::vector<const char*> argv{"amo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (dynamic_cast<const CLI::ConfigError*>(&e)) {
      err << "amo: config file: " << e.what() << '\n';
      return kExitUsage;
    }
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.has_p = o_p->count() > 0;
  cfg.has_q = o_q->count() > 0;
  cfg.has_quotients = o_quot->count() > 0;
  cfg.has_beta = o_beta->count() > 0;
  cfg.has_k = o_k->count() > 0;
  cfg.has_energies = o_e->count() > 0;
  cfg.has_m_samples = o_m->count() > 0;
  cfg.has_c = o_c->count() > 0;
  cfg.has_rho = o_rho->count() > 0;
  cfg.has_a = o_a->count() > 0;
  cfg.has_b = o_b->count() > 0;
  cfg.has_fine = o_pf->count() > 0 || o_qf->count() > 0;

  try {
    if (const char* env = std::getenv("AMO_THREADS"); env && *env) {
      char* end = nullptr;
      const long n = std::strtol(env, &end, 10);
      require(*end == '\0', "AMO_THREADS must be an integer");
      cfg.threads = static_cast<int>(n);
    }
    if (cfg.command != "verify" && !cfg.targets.empty())
      throw UsageError("unexpected argument '" + cfg.targets.front() + "'");
    if (cfg.has_fine) require(o_pf->count() > 0 && o_qf->count() > 0, "give both --p-fine and --q-fine");
    if (cfg.has_k) require(cfg.k >= 0, "--k must be >= 0");
    if (cfg.command == "verify") {
      const auto known = suite_ids();
      for (const auto& t : cfg.targets)
        require(t == "all" || std::find(known.begin(), known.end(), t) != known.end(),
                "unknown report id '" + t + "'");
      require(cfg.targets.size() <= 1 || std::find(cfg.targets.begin(), cfg.targets.end(), "all") == cfg.targets.end(),
              "'all' cannot be combined with report ids");
    }
    validate(cfg);
  } catch (const UsageError& e) {
    err << "amo " << cfg.command << ": " << e.what() << '\n';
    return kExitUsage;
  }

  set_thread_count(cfg.threads);
  const std::string tag = std::string("amo ") + cfg.command + " [" + module_of(cfg.command) + "]: ";
  try {
    if (cfg.command == "bands") return cmd_bands(cfg, out, err);
    if (cfg.command == "butterfly") return cmd_butterfly(cfg, out, err);
    if (cfg.command == "ids") return cmd_ids(cfg, out, err);
    if (cfg.command == "lyapunov") return cmd_lyapunov(cfg, out, err);
    if (cfg.command == "pq") return cmd_pq(cfg, out, err);
    if (cfg.command == "x-set") return cmd_x_set(cfg, out, err);
    if (cfg.command == "orbit") return cmd_orbit(cfg, out, err);
    return cmd_verify(cfg, out, err);
  } catch (const UsageError& e) {
    err << "amo " << cfg.command << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotElliptic& e) {
    err << tag << "not elliptic: " << e.what() << '\n';
  } catch (const NonReduced& e) {
    err << tag << "fraction not reduced: " << e.what() << '\n';
  } catch (const DegenerateQ& e) {
    err << tag << "denominator out of range: " << e.what() << '\n';
  } catch (const WindowTooLarge& e) {
    err << tag << "P_q window too large: " << e.what() << '\n';
  } catch (const StepBudgetExceeded& e) {
    err << tag << "step budget exceeded: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << tag << e.what() << '\n';
  }
  return kExitModule;
}

}  // namespace amo::app
