#pragma once

// Desk-scale reproductions of the spectral estimates, each producing a
// report of measured values against bounds.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "amo/diophantine.hpp"

namespace amo {

enum class Status { Pass, Fail, Info };
enum class Relation { AtMost, AtLeast, None };

const char* to_string(Status s);
const char* to_string(Relation r);

struct Measurement {
  std::string quantity;  // what is measured, shared by rows of one kind
  std::string label;     // parameters of this row
  double measured;
  double bound;
  Relation relation;
  Status status;
};

using ParamValue = std::variant<std::int64_t, double, std::string, std::vector<double>>;

struct VerificationReport {
  std::string lemma_id;
  std::vector<std::pair<std::string, ParamValue>> parameters;
  std::vector<Measurement> measurements;
  bool empirical = false;  // bounds include caps not taken from an inequality
  Status status = Status::Info;
  double runtime_seconds = 0.0;

  void add(std::string quantity, std::string label, double measured, double bound, Relation relation);
  void add_info(std::string quantity, std::string label, double measured);
  // Fail if any row fails, Info if no row is checked, Pass otherwise.
  void finalize();
  [[nodiscard]] bool pass() const { return status != Status::Fail; }
  [[nodiscard]] bool quantity_pass(const std::string& quantity) const;
};

// Second numerator sampled for each q: the integer nearest q / golden ratio
// that is coprime to q and differs from 1; 0 when there is none.
std::int64_t second_numerator(std::int64_t q);

VerificationReport verify_sigma_measure(double lambda, const std::vector<std::int64_t>& q_list);
VerificationReport verify_hausdorff(double lambda, std::pair<std::int64_t, std::int64_t> pq1,
                                    std::pair<std::int64_t, std::int64_t> pq2);
VerificationReport verify_lower_bound(double lambda, const std::vector<std::int64_t>& q_list);
// Along the last n distinct convergents of cf. c <= 0 picks default_c(beta, lambda).
// final_min > 0 adds an empirical floor on the last value.
VerificationReport verify_NX(double lambda, const ContinuedFraction& cf, std::size_t n_convergents, double c,
                             double beta = 0.0, double final_min = 0.0);
VerificationReport verify_sigma_diff(double lambda, std::int64_t p, std::int64_t q, std::int64_t p_fine,
                                     std::int64_t q_fine, double c);
// Coarse convergents of cf up to (not including) the last, all against the last.
VerificationReport verify_sigma_diff_trend(double lambda, const ContinuedFraction& cf, std::size_t n_coarse);

VerificationReport verify_ids(double lambda, const std::vector<std::int64_t>& q_list);
VerificationReport verify_thouless(const std::vector<double>& lambdas, const std::vector<std::int64_t>& q_list);
VerificationReport verify_sl2_identities(std::uint64_t seed, int n_checks);
VerificationReport verify_midpoint(std::uint64_t seed, int n_triples);
VerificationReport verify_hausdorff_pairs(const std::vector<double>& lambdas);
VerificationReport verify_pq_trend();
VerificationReport verify_orbit(double lambda);
VerificationReport verify_avera(double lambda);

struct SuiteConfig {
  double lambda = 0.5;
  std::uint64_t seed = 1;
};

// Report ids of the full suite in run order.
std::vector<std::string> suite_ids();
// Reports in the order given. Throws std::invalid_argument on an unknown id.
std::vector<VerificationReport> run_suite(const SuiteConfig& cfg, const std::vector<std::string>& ids);
// Fixed order; the output depends only on the config.
std::vector<VerificationReport> run_all(const SuiteConfig& cfg);

std::string to_json(const std::vector<VerificationReport>& reports, bool with_runtime = false);

}  // namespace amo
