#include "switchsim/factorization.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <unordered_map>

#include "switchsim/max_flow.hpp"

namespace switchsim {

bool LowerEnvelope::valid_for(const QueueMatrix& q) const {
  if (g.size() != q.size() || beta < 0) return false;
  if (!g.dominated_by(q)) return false;
  const auto rows = g.row_sums();
  const auto cols = g.col_sums();
  return std::all_of(rows.begin(), rows.end(), [&](Count v) { return v == beta; }) &&
         std::all_of(cols.begin(), cols.end(), [&](Count v) { return v == beta; });
}

bool has_beta_envelope(const QueueMatrix& q, Count beta) {
  if (beta < 0) throw ParameterError("beta must be non-negative");
  if (beta == 0) return true;
  const auto net = EnvelopeNetwork::build(q, beta);
  return max_flow(net.net).value == beta * static_cast<Count>(q.size());
}

LowerEnvelope envelope_of(const QueueMatrix& q, Count beta) {
  const auto net = EnvelopeNetwork::build(q, beta);
  const auto flow = max_flow(net.net);
  if (flow.value != beta * static_cast<Count>(q.size()))
    throw InvariantViolation("requested envelope is infeasible");
  return {beta, net.cell_flows(flow)};
}

LowerEnvelope largest_envelope(const QueueMatrix& q) {
  const std::size_t n = q.size();
  if (n == 0) return {0, QueueMatrix(0)};
  const auto rows = q.row_sums();
  const auto cols = q.col_sums();
  Count lo = 0;
  Count hi = std::min(*std::min_element(rows.begin(), rows.end()),
                      *std::min_element(cols.begin(), cols.end()));
  while (lo < hi) {
    const Count mid = lo + (hi - lo + 1) / 2;
    if (has_beta_envelope(q, mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  if (lo == 0) return {0, QueueMatrix(n)};
  return envelope_of(q, lo);
}

Count envelope_oracle(const QueueMatrix& q) {
  const std::size_t n = q.size();
  if (n > 12) throw InstanceTooLarge("envelope_oracle supports n <= 12");
  if (n == 0) return 0;
  Count best = std::numeric_limits<Count>::max();
  std::vector<Count> colsum(n);
  std::vector<Count> sorted(n);
  for (std::uint32_t rmask = 1; rmask < (1u << n); ++rmask) {
    const auto k = static_cast<std::size_t>(__builtin_popcount(rmask));
    std::fill(colsum.begin(), colsum.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
      if (rmask & (1u << i))
        for (std::size_t j = 0; j < n; ++j) colsum[j] += q(i, j);
    // For a fixed |C| = l the smallest block sum takes the l lightest columns,
    // and every column subset of that size is dominated by it.
    std::copy(colsum.begin(), colsum.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    Count prefix = 0;
    for (std::size_t l = 1; l <= n; ++l) {
      prefix += sorted[l - 1];
      if (k + l <= n) continue;
      best = std::min(best, prefix / static_cast<Count>(k + l - n));
    }
  }
  return best;
}

namespace {

// Kuhn's algorithm on the support of `residual`; returns col -> row or empty on failure.
std::vector<int> perfect_matching(const QueueMatrix& residual) {
  const std::size_t n = residual.size();
  std::vector<int> row_of_col(n, -1);
  std::vector<char> seen(n);
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (residual(i, j) == 0 || seen[j]) continue;
      seen[j] = 1;
      if (row_of_col[j] < 0 || augment(static_cast<std::size_t>(row_of_col[j]))) {
        row_of_col[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(i)) return {};
  }
  return row_of_col;
}

}  // namespace

MatchingSequence decompose_regular(const LowerEnvelope& env) {
  const std::size_t n = env.size();
  if (env.beta < 0) throw ParameterError("beta must be non-negative");
  if (!env.valid_for(env.g)) throw ParameterError("envelope is not beta-regular");
  MatchingSequence out;
  if (env.beta == 0 || n == 0) return out;
  out.reserve(static_cast<std::size_t>(env.beta));
  QueueMatrix residual = env.g;
  for (Count t = 0; t < env.beta; ++t) {
    const auto row_of_col = perfect_matching(residual);
    if (row_of_col.empty()) throw InvariantViolation("regular remainder has no perfect matching");
    Schedule s(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto i = static_cast<std::size_t>(row_of_col[j]);
      s.set(i, j);
      --residual(i, j);
    }
    out.push_back(std::move(s));
  }
  return out;
}

QueueMatrix pad_to_regular(const QueueMatrix& q) {
  const std::size_t n = q.size();
  const Count gamma = q.clearance_time();
  QueueMatrix h = q;
  auto rows = q.row_sums();
  auto cols = q.col_sums();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Count add = std::min(gamma - rows[i], gamma - cols[j]);
      if (add <= 0) continue;
      h(i, j) += add;
      rows[i] += add;
      cols[j] += add;
    }
  return h;
}

MatchingSequence optimal_clearing_schedule(const QueueMatrix& q) {
  const Count gamma = q.clearance_time();
  if (gamma == 0) return {};
  auto full = decompose_regular({gamma, pad_to_regular(q)});
  QueueMatrix real = q;
  MatchingSequence out;
  out.reserve(full.size());
  for (const auto& m : full) {
    Schedule s(q.size());
    for (auto [i, j] : m.pairs()) {
      if (real(i, j) == 0) continue;
      --real(i, j);
      s.set(i, j);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Count serve(QueueMatrix& q, const Schedule& s) {
  Count wasted = 0;
  for (auto [i, j] : s.pairs()) {
    if (q(i, j) > 0)
      --q(i, j);
    else
      ++wasted;
  }
  return wasted;
}

Count min_clearance_oracle(const QueueMatrix& q) {
  const std::size_t n = q.size();
  if (n > 3) throw InstanceTooLarge("min_clearance_oracle supports n <= 3");
  const auto cells = q.cells();
  if (std::any_of(cells.begin(), cells.end(), [](Count v) { return v > 3; }))
    throw InstanceTooLarge("min_clearance_oracle supports entries <= 3");
  const std::size_t m = n * n;

  // Every feasible schedule as a cell bitmask.
  std::vector<std::uint32_t> schedules;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    Schedule s(n);
    for (std::size_t c = 0; c < m; ++c)
      if (mask & (1u << c)) s.set(c / n, c % n);
    if (s.is_feasible()) schedules.push_back(mask);
  }

  auto encode = [&](const std::vector<Count>& v) {
    std::uint32_t code = 0;
    for (std::size_t c = m; c-- > 0;) code = code * 4 + static_cast<std::uint32_t>(v[c]);
    return code;
  };
  std::vector<Count> start(cells.begin(), cells.end());
  std::unordered_map<std::uint32_t, Count> dist;
  std::queue<std::vector<Count>> frontier;
  dist[encode(start)] = 0;
  frontier.push(start);
  while (!frontier.empty()) {
    auto cur = frontier.front();
    frontier.pop();
    const Count d = dist[encode(cur)];
    if (std::all_of(cur.begin(), cur.end(), [](Count v) { return v == 0; })) return d;
    for (auto mask : schedules) {
      auto next = cur;
      bool changed = false;
      for (std::size_t c = 0; c < m; ++c)
        if ((mask & (1u << c)) && next[c] > 0) {
          --next[c];
          changed = true;
        }
      if (!changed) continue;
      if (dist.emplace(encode(next), d + 1).second) frontier.push(std::move(next));
    }
  }
  throw InvariantViolation("clearance search exhausted without reaching zero");
}

}  // namespace switchsim
