#include "switchsim/simulator.hpp"

#include <algorithm>
#include <ostream>

namespace switchsim {

MetricsTrace run(Policy& policy, std::size_t n, double rho, Count horizon, std::uint64_t seed,
                 const RunOptions& options) {
  if (horizon < 1) throw ParameterError("horizon must be at least one slot");
  const Count batch_len = policy.batch_length();
  if (batch_len < 1) throw ParameterError("policy batch length must be positive");

  SwitchState state(n);
  ArrivalStream stream{{seed, options.replication}, 1};
  MetricsTrace trace;
  trace.n = n;
  trace.horizon = horizon;
  if (options.record_slots) trace.slots.reserve(static_cast<std::size_t>(horizon));

  const Count full_batches = horizon / batch_len;
  trace.batches.resize(static_cast<std::size_t>(full_batches));
  for (Count k = 0; k < full_batches; ++k) {
    auto& b = trace.batches[static_cast<std::size_t>(k)];
    b.batch = k;
    b.row_arrivals.assign(n, 0);
    b.col_arrivals.assign(n, 0);
  }

  double queue_sum = 0.0;
  for (Count t = 1; t <= horizon; ++t) {
    const auto decision = policy.decide(state);
    const auto outcome = state.apply_schedule(decision.schedule, decision.filter);
    if (outcome.served > static_cast<Count>(n))
      throw InvariantViolation("more than n packets served in one slot");
    policy.on_service(state, outcome);

    const auto a = generate_arrivals(stream, n, rho);
    state.inject_arrivals(a, policy.tag(t));
    policy.on_arrivals(t, a);

    const Count k = (t - 1) / batch_len;
    if (k < full_batches) {
      auto& b = trace.batches[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (a(i, j)) {
            ++b.row_arrivals[i];
            ++b.col_arrivals[j];
          }
    }

    const bool idle = decision.schedule.empty();
    const Count q = state.total_queue();
    trace.total_wasted += outcome.wasted;
    trace.waste_slots += outcome.wasted > 0;
    trace.idle_slots += idle;
    trace.max_total_queue = std::max(trace.max_total_queue, q);
    trace.total_arrivals += a.total();
    trace.total_services += outcome.served;
    queue_sum += static_cast<double>(q);
    if (options.record_slots) trace.slots.push_back({t, q, outcome.wasted, idle});

    state.advance();
    if (options.check_conservation && !state.conserved())
      throw InvariantViolation("conservation Q = A - S broken at slot " + std::to_string(t));
  }
  trace.mean_total_queue = queue_sum / static_cast<double>(horizon);

  for (auto& b : trace.batches) {
    b.max_row_sum = b.row_arrivals.empty() ? 0 : *std::max_element(b.row_arrivals.begin(), b.row_arrivals.end());
    b.max_col_sum = b.col_arrivals.empty() ? 0 : *std::max_element(b.col_arrivals.begin(), b.col_arrivals.end());
  }
  for (const auto& o : policy.batch_outcomes())
    if (o.batch >= 0 && o.batch < full_batches) trace.batches[static_cast<std::size_t>(o.batch)].outcome = o;
  for (auto& b : trace.batches) b.outcome.batch = b.batch;
  return trace;
}

void write_slot_csv(std::ostream& out, const MetricsTrace& trace) {
  out << "slot,total_queue,wasted,idle\n";
  for (const auto& s : trace.slots)
    out << s.slot << ',' << s.total_queue << ',' << s.wasted << ',' << (s.idle ? 1 : 0) << '\n';
}

void write_batch_csv(std::ostream& out, const MetricsTrace& trace) {
  out << "batch,U_k,B_k,max_row_sum,max_col_sum\n";
  for (const auto& b : trace.batches)
    out << b.batch << ',' << b.outcome.leftover << ',' << b.outcome.backlog_at_start << ','
        << b.max_row_sum << ',' << b.max_col_sum << '\n';
}

}  // namespace switchsim
