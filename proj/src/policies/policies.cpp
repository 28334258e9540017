#include "switchsim/policies.hpp"

#include <algorithm>
#include <limits>

namespace switchsim {

Schedule max_weight_schedule(const QueueMatrix& q) {
  const std::size_t n = q.size();
  Schedule out(n);
  if (n == 0 || q.is_zero()) return out;

  // Hungarian method on costs max - q (1-based arrays, column 0 is virtual).
  const auto cells = q.cells();
  const Count top = *std::max_element(cells.begin(), cells.end());
  const Count inf = std::numeric_limits<Count>::max() / 4;
  std::vector<Count> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      Count delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Count cur = (top - q(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j] - 1;
    if (q(i, j - 1) > 0) out.set(i, j - 1);
  }
  return out;
}

Schedule greedy_maximal_matching(const std::vector<std::uint8_t>& eligible, std::size_t n) {
  Schedule s(n);
  std::vector<char> col_used(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (eligible[i * n + j] && !col_used[j]) {
        s.set(i, j);
        col_used[j] = 1;
        break;
      }
  return s;
}

namespace {

// Cells whose oldest packet satisfies `pred`; FIFOs are in arrival order so
// older batches sit at the front.
template <class Pred>
std::vector<std::uint8_t> fronts_matching(const SwitchState& state, Pred pred) {
  const std::size_t n = state.size();
  std::vector<std::uint8_t> eligible(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& q = state.fifo(i, j);
      eligible[i * n + j] = static_cast<std::uint8_t>(!q.empty() && pred(q.front()));
    }
  return eligible;
}

BatchOutcome& outcome_slot(std::vector<BatchOutcome>& outcomes, Count k) {
  while (static_cast<Count>(outcomes.size()) <= k) {
    BatchOutcome o;
    o.batch = static_cast<Count>(outcomes.size());
    outcomes.push_back(o);
  }
  return outcomes[static_cast<std::size_t>(k)];
}

constexpr int kNormalClearingPlan = -2;

}  // namespace

SlotDecision MaxWeightPolicy::decide(const SwitchState& state) {
  return {max_weight_schedule(state.queue_matrix()), any_packet()};
}

StandardBatchingPolicy::StandardBatchingPolicy(std::size_t n, Count batch_len)
    : n_(n), batch_len_(batch_len) {
  if (batch_len < 1) throw ParameterError("batch length must be at least 1");
}

BatchOutcome& StandardBatchingPolicy::outcome(Count k) { return outcome_slot(outcomes_, k); }

SlotDecision StandardBatchingPolicy::decide(const SwitchState& state) {
  const Count t = state.slot();
  if (t <= batch_len_) return {Schedule(n_), any_packet()};
  const Count k = (t - batch_len_ - 1) / batch_len_;
  const Count p = (t - batch_len_ - 1) % batch_len_;
  if (p == 0) {
    if (k >= 1) {
      auto& prev = outcome(k - 1);
      prev.leftover = state.total_if(batch_is(k - 1));
      prev.leftover_known = true;
    }
    auto& cur = outcome(k);
    cur.backlog_at_start = state.total_if(batch_below(k));
    cur.backlog_known = true;
    plan_ = optimal_clearing_schedule(state.count_if(batch_is(k)));
    if (static_cast<Count>(plan_.size()) > batch_len_) plan_.resize(static_cast<std::size_t>(batch_len_));
  }
  if (p < static_cast<Count>(plan_.size())) return {plan_[static_cast<std::size_t>(p)], batch_is(k)};
  auto eligible = fronts_matching(state, [k](const PacketTag& tag) { return tag.batch < k; });
  return {greedy_maximal_matching(eligible, n_), batch_below(k)};
}

LowerEnvelopePolicy::LowerEnvelopePolicy(PolicyParams params) : params_(std::move(params)) {
  if (params_.subintervals.empty() || params_.subintervals.front() != params_.d)
    throw ParameterError("subinterval list must start with I_0 = d");
  Count at = 0;
  for (Count len : params_.subintervals) {
    starts_.push_back(at);
    at += len;
  }
  if (at != params_.b) throw ParameterError("subinterval lengths must sum to b");
  starts_.push_back(at);
}

int LowerEnvelopePolicy::subinterval_of(Count offset) const {
  const auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, offset);
  return static_cast<int>(it - starts_.begin()) - 1;
}

PacketTag LowerEnvelopePolicy::tag(Count slot) const {
  const Count k = (slot - 1) / params_.b;
  return {k, subinterval_of((slot - 1) % params_.b), slot};
}

void LowerEnvelopePolicy::on_arrivals(Count slot, const ArrivalMatrix& a) {
  const auto t = tag(slot);
  auto [it, fresh] = sub_arrivals_.try_emplace({t.batch, t.subinterval}, a.size());
  auto& m = it->second;
  const auto& bits = a.bits();
  for (std::size_t c = 0; c < bits.size(); ++c) m.cells()[c] += bits[c];
}

BatchOutcome& LowerEnvelopePolicy::outcome(Count k) { return outcome_slot(outcomes_, k); }

SlotDecision LowerEnvelopePolicy::decide(const SwitchState& state) {
  const std::size_t n = params_.n;
  const Count b = params_.b;
  const Count d = params_.d;
  const Count t = state.slot();
  last_idle_ = false;
  if (t <= d) {
    last_phase_ = Phase::waiting;
    last_idle_ = true;
    return {Schedule(n), any_packet()};
  }
  const Count k = (t - d - 1) / b;
  const Count p = (t - d - 1) % b;
  last_batch_ = k;
  if (p == 0) {
    auto& o = outcome(k);
    o.backlog_at_start = state.total_if(batch_below(k));
    o.backlog_known = true;
    o.envelope_phase_clean = true;
  }

  if (p < params_.envelope_phase()) {
    last_phase_ = Phase::envelope;
    const Count offset = d + p;
    const int u = subinterval_of(offset);
    last_subinterval_ = u;
    if (plan_batch_ != k || plan_subinterval_ != u) {
      QueueMatrix arrivals(n);
      if (auto it = sub_arrivals_.find({k, u - 1}); it != sub_arrivals_.end()) {
        arrivals = std::move(it->second);
        sub_arrivals_.erase(it);
      }
      const auto env = largest_envelope(arrivals);
      const Count usable = std::min(env.beta, params_.subintervals[static_cast<std::size_t>(u)]);
      plan_.clear();
      if (usable > 0) {
        plan_ = decompose_regular(env);
        plan_.resize(static_cast<std::size_t>(usable));
      }
      plan_batch_ = k;
      plan_subinterval_ = u;
    }
    const Count j = offset - starts_[static_cast<std::size_t>(u)];
    if (j < static_cast<Count>(plan_.size()))
      return {plan_[static_cast<std::size_t>(j)], from_subinterval(k, u - 1)};
    last_idle_ = true;
    return {Schedule(n), any_packet()};
  }

  if (p < params_.s) {
    last_phase_ = Phase::normal_clearing;
    if (plan_batch_ != k || plan_subinterval_ != kNormalClearingPlan) {
      plan_ = optimal_clearing_schedule(state.count_if(batch_is(k)));
      const Count len = params_.normal_clearing_phase();
      if (static_cast<Count>(plan_.size()) > len) plan_.resize(static_cast<std::size_t>(len));
      plan_batch_ = k;
      plan_subinterval_ = kNormalClearingPlan;
      sub_arrivals_.erase(sub_arrivals_.begin(), sub_arrivals_.upper_bound({k, std::numeric_limits<int>::max()}));
    }
    const Count j = p - params_.envelope_phase();
    if (j < static_cast<Count>(plan_.size())) return {plan_[static_cast<std::size_t>(j)], batch_is(k)};
    last_idle_ = true;
    return {Schedule(n), any_packet()};
  }

  last_phase_ = Phase::backlog_clearing;
  if (p == params_.s) {
    auto& o = outcome(k);
    o.leftover = state.total_if(batch_is(k));
    o.leftover_known = true;
  }
  auto eligible = fronts_matching(state, [k](const PacketTag& tag) { return tag.batch <= k; });
  return {greedy_maximal_matching(eligible, n), batch_at_most(k)};
}

void LowerEnvelopePolicy::on_service(const SwitchState&, const ServiceOutcome& result) {
  if (last_phase_ != Phase::envelope) return;
  auto& o = outcome(last_batch_);
  o.envelope_phase_waste += result.wasted;
  o.envelope_phase_idle += last_idle_ ? 1 : 0;
  if (last_idle_ || result.wasted > 0 || result.served != static_cast<Count>(params_.n))
    o.envelope_phase_clean = false;
}

PolicySelection make_policy(const std::string& name, std::size_t n, double rho,
                            const PolicyConstants& constants) {
  PolicySelection sel;
  sel.label = name;
  if (name == "lower-envelope") {
    try {
      auto params = derive_params(n, rho, constants);
      sel.policy = std::make_unique<LowerEnvelopePolicy>(params);
      sel.params = std::move(params);
    } catch (const InvalidRegime& e) {
      sel.policy = std::make_unique<MaxWeightPolicy>(raw_batch_length(n, rho, constants));
      sel.fell_back = true;
      sel.fallback_reason = e.condition();
      sel.label = "lower-envelope/fallback-max-weight";
    }
    return sel;
  }
  const Count batch_len = raw_batch_length(n, rho, constants);
  if (name == "max-weight")
    sel.policy = std::make_unique<MaxWeightPolicy>(batch_len);
  else if (name == "standard-batching")
    sel.policy = std::make_unique<StandardBatchingPolicy>(n, batch_len);
  else if (name == "idle")
    sel.policy = std::make_unique<IdlePolicy>(n, batch_len);
  else
    throw ParameterError("unknown policy '" + name +
                         "' (expected lower-envelope, max-weight, standard-batching or idle)");
  return sel;
}

}  // namespace switchsim
