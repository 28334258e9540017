// switchsim: input-queued switch simulator and envelope experiments.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "switchsim/analysis.hpp"
#include "switchsim/experiments.hpp"
#include "switchsim/factorization.hpp"
#include "switchsim/matrix_io.hpp"

namespace fs = std::filesystem;
using namespace switchsim;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  return out;
}

fs::path batch_trace_path(fs::path slot_path) {
  return slot_path.replace_extension(".batches.csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Input-queued switch simulator with lower-envelope batching"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one seeded simulation and write a sweep-schema row");
  std::string policy;
  std::size_t n = 0;
  double rho = 0.0;
  Count horizon_batches = 0;
  std::uint64_t seed = 0;
  std::string constants_path;
  std::string mode_text;
  std::string trace_path;
  std::string out_path;
  sim->add_option("--policy", policy, "lower-envelope | max-weight | standard-batching")->required();
  sim->add_option("--n", n, "switch dimension")->required();
  sim->add_option("--rho", rho, "load factor in (0, 1)")->required();
  sim->add_option("--horizon-batches", horizon_batches, "arrival periods to simulate")->required();
  sim->add_option("--seed", seed, "base seed")->required();
  sim->add_option("--constants", constants_path, "key = value constants file");
  sim->add_option("--mode", mode_text, "theoretical | adaptive")
      ->check(CLI::IsMember({"theoretical", "adaptive"}));
  sim->add_option("--trace", trace_path, "per-slot trace CSV (per-batch rows go next to it as .batches.csv)");
  sim->add_option("--out", out_path, "output CSV")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid from a config file");
  std::string config_path;
  std::string sweep_out;
  sweep->add_option("--config", config_path, "sweep config (key = value)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "output CSV")->required();

  // factor
  auto* factor = app.add_subcommand("factor", "Largest envelopes of random Binomial(m, p) matrices");
  std::size_t fn = 0;
  long long fm = 0;
  double fp = 0.0;
  double ff = 0.0;
  long long trials = 0;
  std::uint64_t fseed = 0;
  std::string factor_out;
  factor->add_option("--n", fn)->required();
  factor->add_option("--m", fm)->required();
  factor->add_option("--p", fp)->required();
  factor->add_option("--f", ff)->required();
  factor->add_option("--trials", trials)->required();
  factor->add_option("--seed", fseed)->required();
  factor->add_option("--out", factor_out)->required();

  // clear
  auto* clear = app.add_subcommand("clear", "Optimal clearing schedule for a matrix file");
  std::string matrix_path;
  std::string clear_out;
  clear->add_option("--matrix", matrix_path)->required()->check(CLI::ExistingFile);
  clear->add_option("--out", clear_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      PolicyConstants constants = PolicyConstants::preset(mode_text.empty() ? ParamMode::adaptive
                                                                            : parse_mode(mode_text));
      if (!constants_path.empty()) constants = read_constants_file(constants_path, constants);
      if (!mode_text.empty()) constants.mode = parse_mode(mode_text);
      RunOptions options;
      options.record_slots = !trace_path.empty();
      const auto result = simulate(policy, n, rho, horizon_batches, seed, constants, options);
      if (result.fell_back)
        std::cerr << "warning: lower-envelope parameters out of regime (" << result.fallback_reason
                  << "); running max-weight instead\n";
      auto out = open_out(out_path);
      write_sweep_csv(out, {result.record});
      if (!trace_path.empty()) {
        auto slots = open_out(trace_path);
        write_slot_csv(slots, result.trace);
        auto batches = open_out(batch_trace_path(trace_path));
        write_batch_csv(batches, result.trace);
      }
    } else if (*sweep) {
      auto cfg = read_sweep_config(config_path);
      cfg.output = sweep_out;
      const auto rows = run_sweep(cfg);
      auto out = open_out(cfg.output);
      write_sweep_csv(out, rows);
    } else if (*factor) {
      if (!envelope_threshold_hypothesis(static_cast<long long>(fn), fm, fp, ff))
        std::cerr << "warning: pmn < 152 log f; the envelope threshold carries no guarantee here\n";
      const auto rows = factor_experiment(fn, fm, fp, ff, trials, fseed);
      auto out = open_out(factor_out);
      write_factor_csv(out, rows);
      long long ok = 0;
      for (const auto& r : rows) ok += r.success;
      std::cerr << "beta0 = " << (rows.empty() ? envelope_threshold(static_cast<long long>(fn), fm, fp, ff)
                                               : rows.front().beta0)
                << ", success " << ok << "/" << rows.size() << '\n';
    } else if (*clear) {
      const auto q = read_matrix_file(matrix_path);
      auto out = open_out(clear_out);
      write_matching_sequence(out, optimal_clearing_schedule(q));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
