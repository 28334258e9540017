#include "switchsim/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace switchsim {

std::size_t FlowNetwork::add_arc(std::size_t from, std::size_t to, Count capacity) {
  if (capacity < 0) throw ParameterError("arc capacity must be non-negative");
  if (from >= nodes_ || to >= nodes_) throw ParameterError("arc endpoint out of range");
  arcs_.push_back({from, to, capacity});
  return arcs_.size() - 1;
}

namespace {

// Residual graph with paired forward/backward edges (edge e and e ^ 1).
class Dinic {
 public:
  explicit Dinic(const FlowNetwork& net)
      : head_(net.node_count(), -1), level_(net.node_count()), iter_(net.node_count()) {
    to_.reserve(2 * net.arcs().size());
    for (const auto& a : net.arcs()) {
      push(a.from, a.to, a.capacity);
      push(a.to, a.from, 0);
    }
  }

  Count run(std::size_t s, std::size_t t) {
    if (s == t) return 0;
    Count total = 0;
    while (bfs(s, t)) {
      std::copy(head_.begin(), head_.end(), iter_.begin());
      while (Count pushed = dfs(s, t, std::numeric_limits<Count>::max())) total += pushed;
    }
    return total;
  }

  Count residual(std::size_t e) const { return cap_[e]; }

 private:
  void push(std::size_t from, std::size_t to, Count cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = static_cast<long>(to_.size() - 1);
  }

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> frontier;
    level_[s] = 0;
    frontier.push(s);
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      for (long e = head_[v]; e != -1; e = next_[e]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[v] + 1;
          frontier.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  Count dfs(std::size_t v, std::size_t t, Count limit) {
    if (v == t) return limit;
    for (long& e = iter_[v]; e != -1; e = next_[e]) {
      const auto w = to_[e];
      if (cap_[e] <= 0 || level_[w] != level_[v] + 1) continue;
      if (Count got = dfs(w, t, std::min(limit, cap_[e])); got > 0) {
        cap_[e] -= got;
        cap_[e ^ 1] += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<long> head_;
  std::vector<std::size_t> to_;
  std::vector<Count> cap_;
  std::vector<long> next_;
  std::vector<int> level_;
  std::vector<long> iter_;
};

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net) {
  MaxFlowResult r;
  r.flow.assign(net.arcs().size(), 0);
  if (net.node_count() == 0) return r;
  Dinic d(net);
  r.value = d.run(net.source(), net.sink());
  for (std::size_t a = 0; a < net.arcs().size(); ++a) r.flow[a] = d.residual(2 * a + 1);
  return r;
}

EnvelopeNetwork EnvelopeNetwork::build(const QueueMatrix& q, Count beta) {
  if (beta < 0) throw ParameterError("beta must be non-negative");
  EnvelopeNetwork e;
  e.n = q.size();
  const std::size_t n = e.n;
  e.net = FlowNetwork(2 * n + 2, 0, 1);
  for (std::size_t i = 0; i < n; ++i) e.net.add_arc(0, 2 + i, beta);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e.net.add_arc(2 + i, 2 + n + j, q(i, j));
  for (std::size_t j = 0; j < n; ++j) e.net.add_arc(2 + n + j, 1, beta);
  return e;
}

QueueMatrix EnvelopeNetwork::cell_flows(const MaxFlowResult& r) const {
  QueueMatrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = r.flow[cell_arc(i, j)];
  return g;
}

}  // namespace switchsim
