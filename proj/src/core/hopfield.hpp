#pragma once

// Hopfield associative memory where the weighted input sum of a neuron is
// computed remotely: the couplings (signed per the current state) ride out as
// the data words of an echo request, and the replying device's checksum field
// comes back as the complement of their one's-complement sum. Negate the reply
// checksum and you hold the local field h_i = sum_j J_ij * S_j, computed by a
// host that never heard of neural networks.

#include <cstdint>
#include <string>
#include <vector>

#include "core/echo_codec.hpp"
#include "core/metrics.hpp"
#include "core/netsim.hpp"

namespace ec {

using Spins = std::vector<std::int8_t>;  // entries are +1 / -1

class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  // Validates the magnitude bound (n-1)*limit <= 32767: the worst-case local
  // field must stay representable in a 16-bit one's-complement word.
  CouplingMatrix(std::size_t n, int limit);

  std::size_t size() const { return n_; }
  int limit() const { return limit_; }
  std::int16_t at(std::size_t i, std::size_t j) const { return j_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, int v);

 private:
  std::size_t n_ = 0;
  int limit_ = 0;
  std::vector<std::int16_t> j_;
};

// Clipped Hebb rule: J_ij = clamp(sum_mu xi_i xi_j, -limit, +limit), J_ii = 0.
CouplingMatrix hebb_couplings(const std::vector<Spins>& patterns, int limit);

// Request whose reply checksum encodes neuron i's local field. Identifier and
// sequence are +0 (they must not disturb the sum; the device address is the
// only correlation tag), the checksum field is arbitrary (+0; the devices used
// for this do not validate).
EchoMessage encode_neuron_request(std::size_t i, const CouplingMatrix& j,
                                  const Spins& state);

// Extracts the local field from a reply: value of ~checksum. Throws if the
// message is not an echo reply with zero identifier/sequence.
int decode_local_field(const EchoMessage& reply);

// In-process reference dynamics. Both use sign(0) = +1.
Spins parallel_update_oracle(const Spins& state, const CouplingMatrix& j);
Spins async_update_oracle(const Spins& state, const CouplingMatrix& j,
                          const std::vector<std::size_t>& order);

// Fraction of differing positions; throws on length mismatch.
double hamming_distance(const Spins& a, const Spins& b);

struct HopfieldDriverConfig {
  double send_interval_ms = 0.0;    // clock advance between consecutive sends
  double sweep_timeout_ms = 250.0;  // drain wait at the end of each sweep
  int max_sweeps = 50;              // reissue budget per step before giving up
  std::uint64_t perm_seed = 1;      // stream for the per-step update order
};

struct HopfieldDriverStats {
  std::uint64_t messages_sent = 0;
  std::uint64_t replies_seen = 0;
  std::uint64_t reissues = 0;    // requests resent because no reply was applied
  std::uint64_t malformed = 0;   // replies that failed to decode as expected
  std::uint64_t applied = 0;     // neuron updates actually performed
};

// Message-passing asynchronous dynamics. Each step draws a fresh random
// permutation, issues one request per neuron without waiting for earlier
// replies, and applies updates as replies drain in; neurons whose reply never
// arrived are reissued in follow-up sweeps until all n updates of the step
// completed. One device per neuron (the address is the only reply tag; see
// the constructor check).
class HopfieldDriver {
 public:
  HopfieldDriver(const CouplingMatrix& j, Spins initial, NetSim& net,
                 std::vector<DeviceAddress> devices, HopfieldDriverConfig cfg);

  // One full asynchronous step (n applied updates). Throws std::runtime_error
  // if the sweep budget runs out (only plausible under extreme loss).
  void async_step();

  const Spins& state() const { return state_; }
  const HopfieldDriverStats& stats() const { return stats_; }
  // Update order used by the most recent async_step; lets tests replay the
  // exact same sequence through the in-process oracle.
  const std::vector<std::size_t>& last_order() const { return last_order_; }

 private:
  void drain();

  const CouplingMatrix& j_;
  Spins state_;
  NetSim& net_;
  std::vector<DeviceAddress> devices_;
  std::map<DeviceAddress, std::size_t> neuron_of_;
  HopfieldDriverConfig cfg_;
  std::mt19937_64 perm_rng_;
  std::vector<std::uint8_t> updated_;
  std::vector<std::size_t> last_order_;
  std::size_t applied_this_step_ = 0;
  HopfieldDriverStats stats_;
};

// Recall experiment: stored random patterns, probes started at a fixed Hamming
// distance from pattern 0, mean distance to that pattern tracked per step for
// the message-passing asynchronous dynamics and the in-process parallel
// oracle. Each (set, probe) run gets its own derived-seed network so runs are
// independent and reproducible.
struct RecallConfig {
  std::size_t neurons = 512;
  std::size_t patterns = 32;
  int limit = 15;
  std::size_t sets = 10;
  std::size_t probes = 10;
  std::size_t steps = 20;
  double initial_distance = 0.25;
  std::uint64_t seed = 1;
  NetworkConfig net;  // rng_seed is re-derived per run from `seed`
  HopfieldDriverConfig driver;
  std::string csv_path;  // per-step means; empty = no file
};

struct RecallResult {
  std::vector<double> mean_distance_async;     // index = step, size steps+1
  std::vector<double> mean_distance_parallel;
  RunMetrics metrics;
};

RecallResult run_recall_experiment(const RecallConfig& cfg);

// Helpers shared by the experiment and its tests.
Spins random_spins(std::size_t n, std::mt19937_64& rng);
Spins perturb(const Spins& s, double distance, std::mt19937_64& rng);  // flips round(distance*n) distinct spins

}  // namespace ec
