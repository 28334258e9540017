#include "switchsim/analysis.hpp"

#include <cmath>

#include "switchsim/errors.hpp"

namespace switchsim {

double kingman_bound(double lambda, double m2x, double mu, double m2y) {
  if (!(lambda < mu)) throw UnstableInput("kingman bound requires lambda < mu");
  return (m2x + m2y - 2.0 * lambda * mu) / (2.0 * (mu - lambda));
}

TailBounds binomial_tail_bounds(double mean, double x) {
  if (!(mean > 0.0) || !(x > 0.0)) throw ParameterError("tail bounds require mean > 0 and x > 0");
  return {std::exp(-x * x / (2.0 * mean)), std::exp(-x * x / (2.0 * (mean + x / 3.0)))};
}

long long envelope_threshold(long long n, long long m, double p, double f) {
  const double pmn = p * static_cast<double>(m) * static_cast<double>(n);
  return static_cast<long long>(std::floor(pmn - std::sqrt(304.0 * pmn * std::log(f))));
}

bool envelope_threshold_hypothesis(long long n, long long m, double p, double f) {
  return p * static_cast<double>(m) * static_cast<double>(n) >= 152.0 * std::log(f);
}

}  // namespace switchsim
