#pragma once

#include <cstddef>
#include <vector>

#include "switchsim/errors.hpp"
#include "switchsim/queue_matrix.hpp"

namespace switchsim {

/// Directed network with integral capacities.
class FlowNetwork {
 public:
  struct Arc {
    std::size_t from;
    std::size_t to;
    Count capacity;
  };

  FlowNetwork() = default;
  FlowNetwork(std::size_t nodes, std::size_t source, std::size_t sink)
      : nodes_(nodes), source_(source), sink_(sink) {}

  /// Returns the arc index. Negative capacities are rejected.
  std::size_t add_arc(std::size_t from, std::size_t to, Count capacity);

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t source() const noexcept { return source_; }
  std::size_t sink() const noexcept { return sink_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }

 private:
  std::size_t nodes_ = 0;
  std::size_t source_ = 0;
  std::size_t sink_ = 0;
  std::vector<Arc> arcs_;
};

struct MaxFlowResult {
  Count value = 0;
  std::vector<Count> flow;  ///< per arc, same order as FlowNetwork::arcs()
};

/// Dinic blocking-flow maximum flow. Integral capacities yield an integral flow.
MaxFlowResult max_flow(const FlowNetwork& net);

/// The bipartite transportation network behind envelope feasibility.
///
/// Node 0 is the source, node 1 the sink, 2..n+1 are inputs (rows) and
/// n+2..2n+1 outputs (columns). Arcs are emitted as n source arcs (capacity
/// beta), n*n cell arcs in row-major order (capacity q_ij), then n sink arcs
/// (capacity beta).
struct EnvelopeNetwork {
  FlowNetwork net;
  std::size_t n = 0;

  static EnvelopeNetwork build(const QueueMatrix& q, Count beta);

  std::size_t cell_arc(std::size_t i, std::size_t j) const noexcept { return n + i * n + j; }
  /// Reads cell arc flows back into an n x n grid.
  QueueMatrix cell_flows(const MaxFlowResult& r) const;
};

}  // namespace switchsim
