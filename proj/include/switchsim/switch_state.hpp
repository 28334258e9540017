#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "switchsim/errors.hpp"
#include "switchsim/queue_matrix.hpp"
#include "switchsim/schedule.hpp"

namespace switchsim {

/// Counter-based stream identity. Arrivals for (seed, replication, slot, cell)
/// never depend on scheduling decisions or thread interleaving.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t slot_key(const StreamKey& key, std::uint64_t slot) noexcept;

/// One slot's arrivals: cell (i, j) is 1 when a packet joins queue (i, j).
class ArrivalMatrix {
 public:
  ArrivalMatrix() = default;
  explicit ArrivalMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const noexcept { return bits_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v = true) noexcept {
    bits_[i * n_ + j] = static_cast<std::uint8_t>(v);
  }
  std::vector<std::uint8_t>& bits() noexcept { return bits_; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  Count total() const;

  friend bool operator==(const ArrivalMatrix&, const ArrivalMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Advancing arrival generator; `next_slot` is the slot the next call produces.
struct ArrivalStream {
  StreamKey key;
  std::uint64_t next_slot = 1;
};

/// Bernoulli(rho / n) per cell. Throws ParameterError unless 0 < rho < 1 and n >= 1.
ArrivalMatrix generate_arrivals(ArrivalStream& rng, std::size_t n, double rho);

/// The same draw for a given slot without advancing any stream.
ArrivalMatrix arrivals_at(const StreamKey& key, std::uint64_t slot, std::size_t n, double rho);

struct PacketTag {
  Count batch = 0;
  int subinterval = -1;  ///< -1 when the policy does not subdivide batches
  Count arrival_slot = 0;

  friend bool operator==(const PacketTag&, const PacketTag&) = default;
};

/// Selects which packets a slot's schedule may serve.
using PacketFilter = std::function<bool(const PacketTag&)>;

PacketFilter any_packet();
PacketFilter batch_is(Count batch);
PacketFilter batch_at_most(Count batch);
PacketFilter batch_below(Count batch);
PacketFilter from_subinterval(Count batch, int subinterval);

struct ServiceOutcome {
  Count offered = 0;
  Count served = 0;
  Count wasted = 0;
};

/// Per-cell FIFOs plus the cumulative arrival and service counters.
class SwitchState {
 public:
  explicit SwitchState(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  /// Current slot, 1-based.
  Count slot() const noexcept { return slot_; }

  Count queue(std::size_t i, std::size_t j) const noexcept {
    return static_cast<Count>(fifo_[i * n_ + j].size());
  }
  const std::deque<PacketTag>& fifo(std::size_t i, std::size_t j) const noexcept {
    return fifo_[i * n_ + j];
  }
  Count arrivals(std::size_t i, std::size_t j) const noexcept { return arrived_[i * n_ + j]; }
  Count services(std::size_t i, std::size_t j) const noexcept { return served_[i * n_ + j]; }
  Count offered(std::size_t i, std::size_t j) const noexcept { return offered_[i * n_ + j]; }
  Count wasted(std::size_t i, std::size_t j) const noexcept { return wasted_[i * n_ + j]; }
  Count total_queue() const noexcept { return total_; }
  Count total_wasted() const noexcept { return total_wasted_; }

  QueueMatrix queue_matrix() const;
  /// Per-cell counts of queued packets accepted by `filter`.
  QueueMatrix count_if(const PacketFilter& filter) const;
  Count total_if(const PacketFilter& filter) const;

  /// Serves, for every marked cell, the oldest packet accepted by `filter`.
  /// A marked cell with no such packet is recorded as wasted offered service.
  /// Throws InfeasibleSchedule if the schedule is not a partial matching.
  ServiceOutcome apply_schedule(const Schedule& sigma, const PacketFilter& filter);

  /// Appends one packet per marked cell, stamped with `tag` and the current slot.
  void inject_arrivals(const ArrivalMatrix& a, PacketTag tag);

  void advance() noexcept { ++slot_; }

  /// Q == A - S in every cell.
  bool conserved() const;

 private:
  std::size_t n_;
  Count slot_ = 1;
  Count total_ = 0;
  Count total_wasted_ = 0;
  std::vector<std::deque<PacketTag>> fifo_;
  std::vector<Count> arrived_;
  std::vector<Count> served_;
  std::vector<Count> offered_;
  std::vector<Count> wasted_;
};

}  // namespace switchsim
