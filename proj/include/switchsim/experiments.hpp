#pragma once
// Experiment harness: seeded simulation sweeps, the random-multigraph envelope
// threshold experiment, and their CSV schemas.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "switchsim/params.hpp"
#include "switchsim/policies.hpp"
#include "switchsim/simulator.hpp"

namespace switchsim {

struct ExperimentRecord {
  std::size_t n = 0;
  double rho = 0.0;
  std::string policy;
  std::uint64_t seed = 0;
  Count horizon_slots = 0;
  double mean_total_queue = 0.0;
  Count max_total_queue = 0;
  Count waste_slots = 0;
  Count idle_slots = 0;
  Count batches_with_positive_U = 0;
  double mean_B = 0.0;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

struct FactorRecord {
  std::size_t n = 0;
  long long m = 0;
  double p = 0.0;
  long long trial = 0;
  std::uint64_t seed = 0;
  Count beta_star = 0;
  long long beta0 = 0;
  bool success = false;

  friend bool operator==(const FactorRecord&, const FactorRecord&) = default;
};

struct SweepConfig {
  std::vector<std::pair<std::size_t, double>> grid;  ///< (n, rho) points
  std::string policy = "lower-envelope";
  PolicyConstants constants = PolicyConstants::adaptive_preset();
  Count horizon_batches = 1;
  Count replications = 1;
  std::uint64_t base_seed = 1;
  std::filesystem::path output;
  unsigned threads = 0;  ///< 0 picks hardware concurrency
};

/// Sweep file: `key = value` lines. Keys: policy, n (comma list), rho (comma
/// list), horizon_batches, replications, seed, mode, constants (path, relative
/// to the config file), out, threads. The grid is the cross product n x rho.
SweepConfig parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir = {});
SweepConfig read_sweep_config(const std::filesystem::path& path);

/// Seed for grid index `index`; depends on nothing else.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

ExperimentRecord summarize(const MetricsTrace& trace, double rho, const std::string& policy_label,
                           std::uint64_t seed);

struct SimulationResult {
  ExperimentRecord record;
  MetricsTrace trace;
  std::optional<PolicyParams> params;
  bool fell_back = false;
  std::string fallback_reason;
};

/// One run of `horizon_batches` arrival periods plus the policy's service delay.
SimulationResult simulate(const std::string& policy, std::size_t n, double rho, Count horizon_batches,
                          std::uint64_t seed, const PolicyConstants& constants, const RunOptions& options = {});

/// Rows come back in grid order (point-major, replication-minor) whatever the
/// thread count. Out-of-regime lower-envelope points run the Max-Weight fallback
/// and carry its label in the policy column.
std::vector<ExperimentRecord> run_sweep(const SweepConfig& config);

/// Binomial(m, p) n x n matrices; beta_star is the largest envelope size and
/// success means beta_star >= beta0. Requires f >= n, 0 <= p <= 1 and n*n*m < 2^32.
std::vector<FactorRecord> factor_experiment(std::size_t n, long long m, double p, double f, long long trials,
                                            std::uint64_t seed, unsigned threads = 0);

/// The matrix a factor-experiment trial samples.
QueueMatrix sample_binomial_matrix(std::size_t n, long long m, double p, std::uint64_t trial_seed);

/// Calls body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

inline constexpr const char* kSweepHeader =
    "n,rho,policy,seed,horizon_slots,mean_total_queue,max_total_queue,waste_slots,idle_slots,"
    "batches_with_positive_U,mean_B";
inline constexpr const char* kFactorHeader = "n,m,p,trial,seed,beta_star,beta0,success";

void write_sweep_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_sweep_csv(std::istream& in);
void write_factor_csv(std::ostream& out, const std::vector<FactorRecord>& records);
std::vector<FactorRecord> read_factor_csv(std::istream& in);

}  // namespace switchsim
