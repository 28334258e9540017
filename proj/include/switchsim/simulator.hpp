#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "switchsim/switch_state.hpp"

namespace switchsim {

/// What a policy does in one slot. An empty schedule idles the slot.
struct SlotDecision {
  Schedule schedule;
  PacketFilter filter = any_packet();
};

/// Per-batch bookkeeping a batching policy reports back to the trace.
struct BatchOutcome {
  Count batch = 0;
  Count backlog_at_start = 0;  ///< B_k: earlier-batch packets left when service period k opens
  Count leftover = 0;          ///< U_k: batch-k packets still queued after normal clearing
  bool backlog_known = false;
  bool leftover_known = false;
  /// Every lower-envelope slot of this batch served a full matching with no waste.
  bool envelope_phase_clean = false;
  Count envelope_phase_idle = 0;
  Count envelope_phase_waste = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  /// Length of an arrival period; also the granularity of per-batch metrics.
  virtual Count batch_length() const = 0;
  /// Slots after the last arrival period until its service period ends.
  virtual Count service_delay() const { return 0; }

  /// Tag for packets arriving at the end of `slot`.
  virtual PacketTag tag(Count slot) const {
    return {(slot - 1) / batch_length(), -1, slot};
  }

  virtual SlotDecision decide(const SwitchState& state) = 0;

  /// Called after the slot's arrivals were injected into `state`.
  virtual void on_arrivals(Count /*slot*/, const ArrivalMatrix& /*a*/) {}

  /// Called after service was applied in the current slot.
  virtual void on_service(const SwitchState& /*state*/, const ServiceOutcome& /*outcome*/) {}

  virtual std::vector<BatchOutcome> batch_outcomes() const { return {}; }
};

struct SlotMetrics {
  Count slot = 0;
  Count total_queue = 0;  ///< after the slot's arrivals, i.e. Q(slot + 1)
  Count wasted = 0;
  bool idle = false;
};

struct BatchMetrics {
  Count batch = 0;
  std::vector<Count> row_arrivals;  ///< R_i^k
  std::vector<Count> col_arrivals;  ///< C_j^k
  Count max_row_sum = 0;
  Count max_col_sum = 0;
  BatchOutcome outcome;
};

struct MetricsTrace {
  std::size_t n = 0;
  Count horizon = 0;
  std::vector<SlotMetrics> slots;  ///< empty unless RunOptions::record_slots
  std::vector<BatchMetrics> batches;
  Count total_wasted = 0;
  Count waste_slots = 0;
  Count idle_slots = 0;
  Count max_total_queue = 0;
  double mean_total_queue = 0.0;
  Count total_arrivals = 0;
  Count total_services = 0;
};

struct RunOptions {
  std::uint64_t replication = 0;
  /// Assert Q == A - S cell-wise after every slot (throws InvariantViolation).
  bool check_conservation = false;
  bool record_slots = true;
};

/// Drives one replication: per slot the policy schedules, service is applied,
/// then the slot's arrivals are injected (serveable from the next slot on).
MetricsTrace run(Policy& policy, std::size_t n, double rho, Count horizon, std::uint64_t seed,
                 const RunOptions& options = {});

/// `slot,total_queue,wasted,idle`
void write_slot_csv(std::ostream& out, const MetricsTrace& trace);
/// `batch,U_k,B_k,max_row_sum,max_col_sum`
void write_batch_csv(std::ostream& out, const MetricsTrace& trace);

}  // namespace switchsim
