#pragma once
// Batch, delay and phase lengths for the lower-envelope batching policy.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "switchsim/errors.hpp"

namespace switchsim {

enum class ParamMode { theoretical, adaptive };

std::string to_string(ParamMode mode);
ParamMode parse_mode(const std::string& text);

struct PolicyConstants {
  double c_b = 0.0;
  double c_d = 0.0;
  double c_s = 0.0;
  double c_f = 304.0;  ///< slack in the adaptive subinterval recursion
  ParamMode mode = ParamMode::adaptive;

  /// Smallest integers meeting every constant condition of the asymptotic analysis.
  static PolicyConstants theoretical_preset();
  /// Constants for desk-scale runs (small b and d).
  static PolicyConstants adaptive_preset();
  static PolicyConstants preset(ParamMode mode);

  /// Empty when valid for `mode`, otherwise the violated condition.
  std::string violation() const;
};

/// Reads `key = value` lines (c_b, c_d, c_s, c_f, mode); `#` starts a comment.
/// Keys not present keep the values of `base`.
PolicyConstants parse_constants(std::istream& in, PolicyConstants base);
PolicyConstants read_constants_file(const std::filesystem::path& path, PolicyConstants base);

struct PolicyParams {
  std::size_t n = 0;
  double rho = 0.0;
  double f = 0.0;  ///< max(n, 1 / (1 - rho))
  double log_f = 0.0;
  Count b = 0;  ///< arrival-period length
  Count d = 0;  ///< service delay, also the first subinterval
  Count s = 0;  ///< lower-envelope plus normal-clearing slots of a service period
  std::size_t ell = 0;
  std::vector<Count> subintervals;  ///< I_0 .. I_ell, summing to b
  double c_r = 0.0;  ///< c_b - sqrt(c_s c_b)
  double c_o = 0.0;  ///< c_d - c_r
  PolicyConstants constants;

  Count envelope_phase() const noexcept { return b - d; }
  Count normal_clearing_phase() const noexcept { return d + s - b; }
  Count backlog_phase() const noexcept { return b - s; }
};

/// ceil(c_b (1-rho)^-2 log f): the arrival-period length before any validity check.
Count raw_batch_length(std::size_t n, double rho, const PolicyConstants& c);

/// Derives b, d, s (ceilings, natural log) and the subinterval lengths.
/// Throws ParameterError for n < 2 or rho outside (0, 1), and InvalidRegime
/// naming the first violated condition otherwise.
PolicyParams derive_params(std::size_t n, double rho, const PolicyConstants& constants);

/// I_u = floor(d - 19 u sqrt(d log f)) for u < ell and I_ell = b - sum, with ell
/// the first index where 0 <= I_ell <= d - 19 ell sqrt(d log f).
/// Throws InfeasibleSubintervals when no such ell exists.
std::vector<Count> subintervals_theoretical(Count b, Count d, double log_f);

/// I_0 = d, I_u = max(1, floor(rho I_{u-1} - sqrt(c_f rho I_{u-1} log f))),
/// stopped and truncated so the lengths sum to exactly b.
std::vector<Count> subintervals_adaptive(Count b, Count d, double rho, double log_f, double c_f);

/// (B + U - (b - s))^+
Count backlog_update(Count backlog, Count leftover, Count b, Count s);

}  // namespace switchsim
