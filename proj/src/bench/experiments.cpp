#include "switchsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "switchsim/analysis.hpp"
#include "switchsim/kernels.hpp"

namespace switchsim {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T parse_field(const std::string& text, const char* what) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw ParameterError(std::string("cannot parse ") + what + " from '" + text + "'");
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir) {
  SweepConfig cfg;
  std::vector<std::size_t> ns;
  std::vector<double> rhos;
  std::optional<ParamMode> mode;
  std::optional<std::filesystem::path> constants_file;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("sweep config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "policy") {
      cfg.policy = value;
    } else if (key == "n") {
      for (const auto& f : split(value, ','))
        if (!f.empty()) ns.push_back(parse_field<std::size_t>(f, "n"));
    } else if (key == "rho") {
      for (const auto& f : split(value, ','))
        if (!f.empty()) rhos.push_back(parse_field<double>(f, "rho"));
    } else if (key == "horizon_batches") {
      cfg.horizon_batches = parse_field<Count>(value, "horizon_batches");
    } else if (key == "replications") {
      cfg.replications = parse_field<Count>(value, "replications");
    } else if (key == "seed") {
      cfg.base_seed = parse_field<std::uint64_t>(value, "seed");
    } else if (key == "mode") {
      mode = parse_mode(value);
    } else if (key == "constants") {
      constants_file = base_dir / value;
    } else if (key == "out") {
      cfg.output = base_dir / value;
    } else if (key == "threads") {
      cfg.threads = parse_field<unsigned>(value, "threads");
    } else {
      throw ParameterError("sweep config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  const ParamMode m = mode.value_or(ParamMode::adaptive);
  cfg.constants = PolicyConstants::preset(m);
  if (constants_file) cfg.constants = read_constants_file(*constants_file, cfg.constants);
  if (mode) cfg.constants.mode = *mode;
  for (auto n : ns)
    for (auto r : rhos) cfg.grid.emplace_back(n, r);
  if (cfg.horizon_batches < 1) throw ParameterError("horizon_batches must be at least 1");
  if (cfg.replications < 1) throw ParameterError("replications must be at least 1");
  return cfg;
}

SweepConfig read_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open sweep config " + path.string());
  return parse_sweep_config(in, path.parent_path());
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(splitmix64(base_seed) + index);
}

ExperimentRecord summarize(const MetricsTrace& trace, double rho, const std::string& policy_label,
                           std::uint64_t seed) {
  ExperimentRecord r;
  r.n = trace.n;
  r.rho = rho;
  r.policy = policy_label;
  r.seed = seed;
  r.horizon_slots = trace.horizon;
  r.mean_total_queue = trace.mean_total_queue;
  r.max_total_queue = trace.max_total_queue;
  r.waste_slots = trace.waste_slots;
  r.idle_slots = trace.idle_slots;
  Count backlog_sum = 0;
  Count backlog_batches = 0;
  for (const auto& b : trace.batches) {
    if (b.outcome.leftover_known && b.outcome.leftover > 0) ++r.batches_with_positive_U;
    if (b.outcome.backlog_known) {
      backlog_sum += b.outcome.backlog_at_start;
      ++backlog_batches;
    }
  }
  r.mean_B = backlog_batches ? static_cast<double>(backlog_sum) / static_cast<double>(backlog_batches) : 0.0;
  return r;
}

SimulationResult simulate(const std::string& policy, std::size_t n, double rho, Count horizon_batches,
                          std::uint64_t seed, const PolicyConstants& constants, const RunOptions& options) {
  if (horizon_batches < 1) throw ParameterError("horizon must be at least one batch");
  auto sel = make_policy(policy, n, rho, constants);
  const Count horizon = horizon_batches * sel.policy->batch_length() + sel.policy->service_delay();
  SimulationResult out;
  out.trace = run(*sel.policy, n, rho, horizon, seed, options);
  // Batches beyond the requested horizon only exist because of the service tail.
  if (static_cast<Count>(out.trace.batches.size()) > horizon_batches)
    out.trace.batches.resize(static_cast<std::size_t>(horizon_batches));
  out.record = summarize(out.trace, rho, sel.label, seed);
  out.params = sel.params;
  out.fell_back = sel.fell_back;
  out.fallback_reason = sel.fallback_reason;
  return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  for (unsigned w = 0; w < threads; ++w)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ExperimentRecord> run_sweep(const SweepConfig& config) {
  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<ExperimentRecord> rows(config.grid.size() * reps);
  RunOptions options;
  options.record_slots = false;
  parallel_for(rows.size(), config.threads, [&](std::size_t idx) {
    const auto [n, rho] = config.grid[idx / reps];
    const auto seed = derive_seed(config.base_seed, idx);
    rows[idx] = simulate(config.policy, n, rho, config.horizon_batches, seed, config.constants, options).record;
  });
  return rows;
}

QueueMatrix sample_binomial_matrix(std::size_t n, long long m, double p, std::uint64_t trial_seed) {
  QueueMatrix q(n);
  kernels::active().binomial_fill(splitmix64(trial_seed), static_cast<std::uint32_t>(m),
                                  kernels::probability_threshold(p), q.cells());
  return q;
}

std::vector<FactorRecord> factor_experiment(std::size_t n, long long m, double p, double f, long long trials,
                                            std::uint64_t seed, unsigned threads) {
  if (n < 1 || m < 1 || trials < 0) throw ParameterError("factor experiment needs n >= 1, m >= 1, trials >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  if (!(f >= static_cast<double>(n))) throw ParameterError("f must be at least n");
  if (static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(m) >= 4294967296.0)
    throw ParameterError("n*n*m must stay below 2^32 draws per trial");
  const auto beta0 = envelope_threshold(static_cast<long long>(n), m, p, f);
  std::vector<FactorRecord> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), threads, [&](std::size_t t) {
    FactorRecord r;
    r.n = n;
    r.m = m;
    r.p = p;
    r.trial = static_cast<long long>(t);
    r.seed = derive_seed(seed, t);
    r.beta_star = largest_envelope(sample_binomial_matrix(n, m, p, r.seed)).beta;
    r.beta0 = beta0;
    r.success = r.beta_star >= beta0;
    out[t] = r;
  });
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kSweepHeader << '\n';
  for (const auto& r : records)
    out << r.n << ',' << format_double(r.rho) << ',' << r.policy << ',' << r.seed << ',' << r.horizon_slots << ','
        << format_double(r.mean_total_queue) << ',' << r.max_total_queue << ',' << r.waste_slots << ','
        << r.idle_slots << ',' << r.batches_with_positive_U << ',' << format_double(r.mean_B) << '\n';
}

std::vector<ExperimentRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSweepHeader) throw ParameterError("sweep CSV: bad header");
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 11) throw ParameterError("sweep CSV: expected 11 fields, got " + std::to_string(f.size()));
    ExperimentRecord r;
    r.n = parse_field<std::size_t>(f[0], "n");
    r.rho = parse_field<double>(f[1], "rho");
    r.policy = f[2];
    r.seed = parse_field<std::uint64_t>(f[3], "seed");
    r.horizon_slots = parse_field<Count>(f[4], "horizon_slots");
    r.mean_total_queue = parse_field<double>(f[5], "mean_total_queue");
    r.max_total_queue = parse_field<Count>(f[6], "max_total_queue");
    r.waste_slots = parse_field<Count>(f[7], "waste_slots");
    r.idle_slots = parse_field<Count>(f[8], "idle_slots");
    r.batches_with_positive_U = parse_field<Count>(f[9], "batches_with_positive_U");
    r.mean_B = parse_field<double>(f[10], "mean_B");
    out.push_back(std::move(r));
  }
  return out;
}

void write_factor_csv(std::ostream& out, const std::vector<FactorRecord>& records) {
  out << kFactorHeader << '\n';
  for (const auto& r : records)
    out << r.n << ',' << r.m << ',' << format_double(r.p) << ',' << r.trial << ',' << r.seed << ','
        << r.beta_star << ',' << r.beta0 << ',' << (r.success ? 1 : 0) << '\n';
}

std::vector<FactorRecord> read_factor_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kFactorHeader) throw ParameterError("factor CSV: bad header");
  std::vector<FactorRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 8) throw ParameterError("factor CSV: expected 8 fields, got " + std::to_string(f.size()));
    FactorRecord r;
    r.n = parse_field<std::size_t>(f[0], "n");
    r.m = parse_field<long long>(f[1], "m");
    r.p = parse_field<double>(f[2], "p");
    r.trial = parse_field<long long>(f[3], "trial");
    r.seed = parse_field<std::uint64_t>(f[4], "seed");
    r.beta_star = parse_field<Count>(f[5], "beta_star");
    r.beta0 = parse_field<long long>(f[6], "beta0");
    r.success = parse_field<int>(f[7], "success") != 0;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace switchsim
