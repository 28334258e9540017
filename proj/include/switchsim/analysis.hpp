#pragma once

namespace switchsim {

/// Upper bound on the mean queue of a discrete-time G/G/1 queue started empty:
/// (m2x + m2y - 2 lambda mu) / (2 (mu - lambda)). Throws UnstableInput if lambda >= mu.
double kingman_bound(double lambda, double m2x, double mu, double m2y);

struct TailBounds {
  double lower;  ///< bound on P(X <= mean - x)
  double upper;  ///< bound on P(X >= mean + x)
};

/// Chernoff-type binomial tail bounds exp(-x^2 / (2 mean)) and
/// exp(-x^2 / (2 (mean + x/3))). Requires mean > 0 and x > 0.
TailBounds binomial_tail_bounds(double mean, double x);

/// floor(pmn - sqrt(304 pmn log f)): the envelope size a Binomial(m, p)
/// n x n matrix has with probability at least 1 - f^-16.
long long envelope_threshold(long long n, long long m, double p, double f);

/// pmn >= 152 log f
bool envelope_threshold_hypothesis(long long n, long long m, double p, double f);

}  // namespace switchsim
