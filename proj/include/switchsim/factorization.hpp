#pragma once
// Queue matrices as bipartite multigraphs: beta-regular sub-matrices
// ("lower envelopes"), their decomposition into perfect matchings, and
// minimum-length clearing schedules.

#include <cstddef>

#include "switchsim/queue_matrix.hpp"
#include "switchsim/schedule.hpp"

namespace switchsim {

/// A beta-regular integer matrix g with 0 <= g <= q for some source matrix q.
struct LowerEnvelope {
  Count beta = 0;
  QueueMatrix g;

  std::size_t size() const noexcept { return g.size(); }
  /// Checks the bounds against `q` and that every line of g sums to beta.
  bool valid_for(const QueueMatrix& q) const;
};

/// True iff q has a beta-regular sub-matrix (max flow on the envelope network equals beta*n).
bool has_beta_envelope(const QueueMatrix& q, Count beta);

/// Envelope with the largest beta, read off an integral maximum flow.
/// Binary search over [0, min line sum]; feasibility is monotone in beta.
LowerEnvelope largest_envelope(const QueueMatrix& q);

/// Same, but returns the flow-derived envelope for a specific feasible beta.
/// Throws InvariantViolation if beta is infeasible.
LowerEnvelope envelope_of(const QueueMatrix& q, Count beta);

/// Largest feasible beta by enumerating every row subset R and column subset C:
/// min over |R|+|C| > n of floor(sum_{R x C} q / (|R|+|C|-n)). Requires n <= 12.
Count envelope_oracle(const QueueMatrix& q);

/// Splits a beta-regular envelope into beta perfect matchings summing to g.
///
/// Each matching is found with Kuhn's augmenting-path search: rows are tried
/// in increasing order and, within a row, columns in increasing order, so the
/// output is reproducible.
MatchingSequence decompose_regular(const LowerEnvelope& env);

/// Raises entries of q until every line sums to the clearance time, filling
/// cells in row-major order by the smaller of the row and column deficits.
QueueMatrix pad_to_regular(const QueueMatrix& q);

/// Exactly clearance_time(q) schedules that empty q. Padding edges become
/// unmarked cells; for each cell the first q_ij copies (in emission order)
/// carry real service.
MatchingSequence optimal_clearing_schedule(const QueueMatrix& q);

/// Breadth-first search over residual matrices for the fewest feasible
/// schedules that empty q. Requires n <= 3 and entries <= 3.
Count min_clearance_oracle(const QueueMatrix& q);

/// Applies a schedule to a plain count matrix (serving min(1, q_ij) per marked
/// cell); returns the number of marked cells that found no packet.
Count serve(QueueMatrix& q, const Schedule& s);

}  // namespace switchsim
