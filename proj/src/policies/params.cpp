#include "switchsim/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace switchsim {

std::string to_string(ParamMode mode) {
  return mode == ParamMode::theoretical ? "theoretical" : "adaptive";
}

ParamMode parse_mode(const std::string& text) {
  if (text == "theoretical") return ParamMode::theoretical;
  if (text == "adaptive") return ParamMode::adaptive;
  throw ParameterError("unknown mode '" + text + "' (expected theoretical or adaptive)");
}

PolicyConstants PolicyConstants::theoretical_preset() {
  return {32.0, 181.0, 30.0, 304.0, ParamMode::theoretical};
}

PolicyConstants PolicyConstants::adaptive_preset() {
  return {9.0, 16.0, 4.0, 6.0, ParamMode::adaptive};
}

PolicyConstants PolicyConstants::preset(ParamMode mode) {
  return mode == ParamMode::theoretical ? theoretical_preset() : adaptive_preset();
}

std::string PolicyConstants::violation() const {
  if (!(c_b > 0 && c_d > 0 && c_s > 0)) return "constants must be positive";
  if (c_f < 0) return "c_f must be non-negative";
  if (c_b - std::sqrt(c_s * c_b) < 1.0) return "c_b - sqrt(c_s c_b) >= 1";
  if (mode == ParamMode::adaptive) return {};
  if (std::pow(c_d, 1.5) < 76.0 * c_b) return "c_d^(3/2) >= 76 c_b";
  if (c_d < c_b) return "c_d >= c_b";
  if (c_s < 30.0) return "c_s >= 30";
  return {};
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty())
    throw ParameterError("constants: '" + key + "' expects a number, got '" + value + "'");
  return v;
}

}  // namespace

PolicyConstants parse_constants(std::istream& in, PolicyConstants base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("constants line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "c_b")
      base.c_b = parse_number(key, value);
    else if (key == "c_d")
      base.c_d = parse_number(key, value);
    else if (key == "c_s")
      base.c_s = parse_number(key, value);
    else if (key == "c_f")
      base.c_f = parse_number(key, value);
    else if (key == "mode")
      base.mode = parse_mode(value);
    else
      throw ParameterError("constants line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return base;
}

PolicyConstants read_constants_file(const std::filesystem::path& path, PolicyConstants base) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open constants file " + path.string());
  return parse_constants(in, base);
}

namespace {

void check_domain(std::size_t n, double rho) {
  if (n < 2) throw ParameterError("switch dimension must be at least 2");
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("load factor must lie in (0, 1)");
}

double log_scale(std::size_t n, double rho) {
  return std::log(std::max(static_cast<double>(n), 1.0 / (1.0 - rho)));
}

}  // namespace

Count raw_batch_length(std::size_t n, double rho, const PolicyConstants& c) {
  check_domain(n, rho);
  const double gap = 1.0 - rho;
  return static_cast<Count>(std::ceil(c.c_b * std::pow(gap, -2.0) * log_scale(n, rho)));
}

PolicyParams derive_params(std::size_t n, double rho, const PolicyConstants& constants) {
  check_domain(n, rho);
  if (auto why = constants.violation(); !why.empty()) throw InvalidRegime("constants: " + why);

  PolicyParams p;
  p.n = n;
  p.rho = rho;
  p.constants = constants;
  const double gap = 1.0 - rho;
  p.f = std::max(static_cast<double>(n), 1.0 / gap);
  p.log_f = std::log(p.f);
  const double b = constants.c_b * std::pow(gap, -2.0) * p.log_f;
  const double d = constants.c_d * std::pow(gap, -4.0 / 3.0) * p.log_f;
  p.b = static_cast<Count>(std::ceil(b));
  p.d = static_cast<Count>(std::ceil(d));
  p.s = static_cast<Count>(
      std::ceil(rho * static_cast<double>(p.b) + std::sqrt(constants.c_s * static_cast<double>(p.b) * p.log_f)));
  p.c_r = constants.c_b - std::sqrt(constants.c_s * constants.c_b);
  p.c_o = constants.c_d - p.c_r;

  if (p.b - p.d < 1) throw InvalidRegime("lower-envelope phase b - d >= 1");
  if (p.b - p.s < 1) throw InvalidRegime("backlog-clearing phase b - s >= 1");
  if (p.d + p.s - p.b < 1) throw InvalidRegime("normal-clearing phase d + s - b >= 1");

  if (constants.mode == ParamMode::theoretical) {
    if (n < 4) throw InvalidRegime("n >= 4");
    if (rho < 0.5) throw InvalidRegime("rho >= 1/2");
    const double lhs = std::pow(gap, -2.0 / 3.0);
    const double root = std::sqrt(constants.c_d);
    if (lhs < std::max({38.0 / root, root / 38.0, constants.c_d}))
      throw InvalidRegime("(1-rho)^(-2/3) >= max(38/sqrt(c_d), sqrt(c_d)/38, c_d)");
    try {
      p.subintervals = subintervals_theoretical(p.b, p.d, p.log_f);
    } catch (const InfeasibleSubintervals& e) {
      throw InvalidRegime(std::string("subintervals: ") + e.what());
    }
  } else {
    p.subintervals = subintervals_adaptive(p.b, p.d, rho, p.log_f, constants.c_f);
  }
  p.ell = p.subintervals.size() - 1;
  return p;
}

std::vector<Count> subintervals_theoretical(Count b, Count d, double log_f) {
  if (d < 1 || b < d) throw InfeasibleSubintervals("requires b >= d >= 1");
  const double step = 19.0 * std::sqrt(static_cast<double>(d) * log_f);
  std::vector<Count> out{d};
  Count used = d;
  for (Count ell = 1;; ++ell) {
    const Count rest = b - used;
    const double cap = static_cast<double>(d) - static_cast<double>(ell) * step;
    if (rest < 0 || cap < 0)
      throw InfeasibleSubintervals("no ell with 0 <= I_ell <= d - 19 ell sqrt(d log f)");
    if (static_cast<double>(rest) <= cap) {
      out.push_back(rest);
      return out;
    }
    const auto next = static_cast<Count>(std::floor(cap));
    if (next < 1) throw InfeasibleSubintervals("subinterval lengths collapsed before reaching b");
    out.push_back(next);
    used += next;
  }
}

std::vector<Count> subintervals_adaptive(Count b, Count d, double rho, double log_f, double c_f) {
  if (d < 1 || b <= d) throw ParameterError("adaptive subintervals require b > d >= 1");
  std::vector<Count> out{d};
  Count used = d;
  double prev = static_cast<double>(d);
  while (used < b) {
    const double raw = rho * prev - std::sqrt(c_f * rho * prev * log_f);
    const Count next = std::max<Count>(1, static_cast<Count>(std::floor(raw)));
    const Count len = std::min(next, b - used);
    out.push_back(len);
    used += len;
    prev = static_cast<double>(next);
  }
  return out;
}

Count backlog_update(Count backlog, Count leftover, Count b, Count s) {
  if (backlog < 0 || leftover < 0 || b < 0 || s < 0) throw ParameterError("backlog inputs must be non-negative");
  if (b <= s) throw ParameterError("backlog update requires b > s");
  return std::max<Count>(0, backlog + leftover - (b - s));
}

}  // namespace switchsim
