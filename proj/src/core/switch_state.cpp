#include "switchsim/switch_state.hpp"

#include <algorithm>

#include "switchsim/kernels.hpp"

namespace switchsim {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t slot_key(const StreamKey& key, std::uint64_t slot) noexcept {
  return splitmix64(splitmix64(splitmix64(key.seed) ^ key.replication) ^ slot);
}

Count ArrivalMatrix::total() const {
  return static_cast<Count>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

ArrivalMatrix arrivals_at(const StreamKey& key, std::uint64_t slot, std::size_t n, double rho) {
  if (n == 0) throw ParameterError("switch dimension must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("load factor must lie in (0, 1)");
  ArrivalMatrix a(n);
  kernels::active().bernoulli_fill(slot_key(key, slot), 0,
                                   kernels::probability_threshold(rho / static_cast<double>(n)),
                                   a.bits());
  return a;
}

ArrivalMatrix generate_arrivals(ArrivalStream& rng, std::size_t n, double rho) {
  auto a = arrivals_at(rng.key, rng.next_slot, n, rho);
  ++rng.next_slot;
  return a;
}

PacketFilter any_packet() {
  return [](const PacketTag&) { return true; };
}
PacketFilter batch_is(Count batch) {
  return [batch](const PacketTag& t) { return t.batch == batch; };
}
PacketFilter batch_at_most(Count batch) {
  return [batch](const PacketTag& t) { return t.batch <= batch; };
}
PacketFilter batch_below(Count batch) {
  return [batch](const PacketTag& t) { return t.batch < batch; };
}
PacketFilter from_subinterval(Count batch, int subinterval) {
  return [batch, subinterval](const PacketTag& t) {
    return t.batch == batch && t.subinterval == subinterval;
  };
}

SwitchState::SwitchState(std::size_t n)
    : n_(n), fifo_(n * n), arrived_(n * n, 0), served_(n * n, 0), offered_(n * n, 0), wasted_(n * n, 0) {}

QueueMatrix SwitchState::queue_matrix() const {
  QueueMatrix q(n_);
  for (std::size_t c = 0; c < fifo_.size(); ++c) q.cells()[c] = static_cast<Count>(fifo_[c].size());
  return q;
}

QueueMatrix SwitchState::count_if(const PacketFilter& filter) const {
  QueueMatrix q(n_);
  for (std::size_t c = 0; c < fifo_.size(); ++c)
    q.cells()[c] = static_cast<Count>(std::count_if(fifo_[c].begin(), fifo_[c].end(), filter));
  return q;
}

Count SwitchState::total_if(const PacketFilter& filter) const { return count_if(filter).total(); }

ServiceOutcome SwitchState::apply_schedule(const Schedule& sigma, const PacketFilter& filter) {
  if (sigma.size() != n_) throw InfeasibleSchedule("schedule dimension mismatch");
  if (!sigma.is_feasible()) throw InfeasibleSchedule("schedule violates the one-per-line constraint");
  ServiceOutcome out;
  for (auto [i, j] : sigma.pairs()) {
    const std::size_t c = i * n_ + j;
    ++out.offered;
    ++offered_[c];
    auto& q = fifo_[c];
    const auto it = std::find_if(q.begin(), q.end(), filter);
    if (it == q.end()) {
      ++out.wasted;
      ++wasted_[c];
      continue;
    }
    q.erase(it);
    ++served_[c];
    ++out.served;
  }
  total_ -= out.served;
  total_wasted_ += out.wasted;
  return out;
}

void SwitchState::inject_arrivals(const ArrivalMatrix& a, PacketTag tag) {
  if (a.size() != n_) throw ParameterError("arrival matrix dimension mismatch");
  tag.arrival_slot = slot_;
  const auto& bits = a.bits();
  for (std::size_t c = 0; c < bits.size(); ++c) {
    if (!bits[c]) continue;
    fifo_[c].push_back(tag);
    ++arrived_[c];
    ++total_;
  }
}

bool SwitchState::conserved() const {
  for (std::size_t c = 0; c < fifo_.size(); ++c)
    if (static_cast<Count>(fifo_[c].size()) != arrived_[c] - served_[c]) return false;
  return true;
}

}  // namespace switchsim
