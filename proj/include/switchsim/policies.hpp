#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "switchsim/factorization.hpp"
#include "switchsim/params.hpp"
#include "switchsim/simulator.hpp"

namespace switchsim {

/// Maximum-weight matching with queue sizes as weights (Hungarian method,
/// O(n^3)). Cells with zero weight are left unmarked, so an empty queue
/// matrix yields an empty schedule. Ties resolve toward the first optimum the
/// row-by-row search meets, which makes the result deterministic.
Schedule max_weight_schedule(const QueueMatrix& q);

/// Greedy row-major maximal matching over the cells flagged in `eligible`.
Schedule greedy_maximal_matching(const std::vector<std::uint8_t>& eligible, std::size_t n);

/// Serves nothing, ever.
class IdlePolicy final : public Policy {
 public:
  explicit IdlePolicy(std::size_t n, Count batch_len = 1) : n_(n), batch_len_(batch_len) {}
  std::string name() const override { return "idle"; }
  Count batch_length() const override { return batch_len_; }
  SlotDecision decide(const SwitchState&) override { return {Schedule(n_), any_packet()}; }

 private:
  std::size_t n_;
  Count batch_len_;
};

class MaxWeightPolicy final : public Policy {
 public:
  /// `batch_len` only sets the granularity of per-batch metrics.
  explicit MaxWeightPolicy(Count batch_len = 1) : batch_len_(batch_len) {}
  std::string name() const override { return "max-weight"; }
  Count batch_length() const override { return batch_len_; }
  SlotDecision decide(const SwitchState& state) override;

 private:
  Count batch_len_;
};

/// Batch k accumulates untouched and is cleared during batch k + 1 with an
/// optimal clearing schedule; whatever does not fit joins a backlog that the
/// rest of later periods drain with maximal matchings.
class StandardBatchingPolicy final : public Policy {
 public:
  StandardBatchingPolicy(std::size_t n, Count batch_len);
  std::string name() const override { return "standard-batching"; }
  Count batch_length() const override { return batch_len_; }
  Count service_delay() const override { return batch_len_; }
  SlotDecision decide(const SwitchState& state) override;
  std::vector<BatchOutcome> batch_outcomes() const override { return outcomes_; }

 private:
  BatchOutcome& outcome(Count k);

  std::size_t n_;
  Count batch_len_;
  MatchingSequence plan_;
  std::vector<BatchOutcome> outcomes_;
};

/// Three-phase batching policy. Service period k (slots kb+d+1 .. (k+1)b+d) runs
///   1. lower envelope, b - d slots split into subintervals I_1..I_ell: during
///      I_u the largest envelope of the arrivals tagged (k, u-1) is served with
///      full matchings, min(beta, I_u) of them, and the rest of I_u idles;
///   2. normal clearing, d + s - b slots of an optimal clearing schedule for
///      the remaining batch-k packets;
///   3. backlog clearing, b - s slots of maximal matchings over packets from
///      batches <= k.
class LowerEnvelopePolicy final : public Policy {
 public:
  explicit LowerEnvelopePolicy(PolicyParams params);

  std::string name() const override { return "lower-envelope"; }
  Count batch_length() const override { return params_.b; }
  Count service_delay() const override { return params_.d; }
  PacketTag tag(Count slot) const override;
  SlotDecision decide(const SwitchState& state) override;
  void on_arrivals(Count slot, const ArrivalMatrix& a) override;
  void on_service(const SwitchState& state, const ServiceOutcome& outcome) override;
  std::vector<BatchOutcome> batch_outcomes() const override { return outcomes_; }

  const PolicyParams& params() const noexcept { return params_; }

  enum class Phase { waiting, envelope, normal_clearing, backlog_clearing };
  /// Phase of the most recent decision.
  Phase last_phase() const noexcept { return last_phase_; }
  /// Subinterval of the most recent envelope-phase decision.
  int last_subinterval() const noexcept { return last_subinterval_; }

 private:
  int subinterval_of(Count offset) const;
  BatchOutcome& outcome(Count k);

  PolicyParams params_;
  std::vector<Count> starts_;  ///< batch offset where each subinterval begins; back() == b
  std::map<std::pair<Count, int>, QueueMatrix> sub_arrivals_;
  MatchingSequence plan_;
  Count plan_batch_ = -1;
  int plan_subinterval_ = -1;
  std::vector<BatchOutcome> outcomes_;
  Phase last_phase_ = Phase::waiting;
  int last_subinterval_ = -1;
  Count last_batch_ = -1;
  bool last_idle_ = false;
};

/// A policy built by name, with the fallback applied when the lower-envelope
/// parameters are out of regime.
struct PolicySelection {
  std::unique_ptr<Policy> policy;
  std::string label;  ///< policy column value, e.g. "lower-envelope/fallback-max-weight"
  bool fell_back = false;
  std::string fallback_reason;
  std::optional<PolicyParams> params;
};

/// Names: lower-envelope, max-weight, standard-batching, idle. Batch length for
/// the baselines is raw_batch_length(n, rho, constants).
PolicySelection make_policy(const std::string& name, std::size_t n, double rho,
                            const PolicyConstants& constants);

}  // namespace switchsim
