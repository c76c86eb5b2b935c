#pragma once

// Conway's Life where the transition predicate for each cell is evaluated by a
// remote checksum-validating device. For a cell with live-neighbor sum s, a
// probe built for predicate k folds to -0 exactly when s == k: the data words
// carry the eight neighbor states plus balancing terms (-w1 in the first data
// word, -t's identifier balanced by its complement in the sequence field, -k
// at the end), so the device's accept/drop decision IS the predicate. Silence
// means false; a reply means true. Two probes per cell (k = 3: birth/survival
// regardless of current state, k = 2: survival only) decide the next state.

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/devicepool.hpp"
#include "core/echo_codec.hpp"
#include "core/metrics.hpp"
#include "core/netsim.hpp"

namespace ec {

struct LifeGrid {
  std::size_t width = 0;   // columns
  std::size_t height = 0;  // rows
  std::vector<std::uint8_t> cells;  // row-major, 1 = live
  std::uint64_t generation = 0;

  LifeGrid() = default;
  LifeGrid(std::size_t w, std::size_t h) : width(w), height(h), cells(w * h, 0) {}

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return cells[row * width + col];
  }
  void set(std::size_t row, std::size_t col, std::uint8_t v) {
    cells[row * width + col] = v;
  }
  // The eight neighbors on the torus, fixed order NW, N, NE, W, E, SW, S, SE.
  std::array<std::uint8_t, 8> neighborhood(std::size_t row, std::size_t col) const;
  int neighbor_sum(std::size_t row, std::size_t col) const;

  bool operator==(const LifeGrid&) const = default;
};

// Transition rule: 1 if s == 3, current state if s == 2, else 0.
// Throws on s outside [0,8] or y outside {0,1}.
int rule_oracle(int neighbor_sum, int current);

// One synchronous generation computed entirely in-process (the control
// automaton the message-passing run is compared against).
LifeGrid step_oracle(const LifeGrid& g);

// Probe for predicate "live-neighbor sum == k" at time step t. The message is
// deliberately built so its full fold is -0 iff the predicate holds; it is
// NOT a validly checksummed datagram otherwise, by design.
EchoMessage encode_cell_probe(std::uint64_t t, const std::array<std::uint8_t, 8>& neighbors,
                              int k);

struct PersistentConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LifeProtocolConfig {
  int attempts = 2;            // probe rounds per generation (1 = no retry)
  int conflict_rounds = 1;     // full re-probes for cells with contradictory replies
  double round_timeout_ms = 5000.0;
  double send_interval_ms = 0.0;
};

struct LifeStepStats {
  std::uint64_t messages_sent = 0;
  std::uint64_t replies_accepted = 0;
  std::uint64_t retry_messages = 0;     // probes sent in rounds after the first
  std::uint64_t rejected_replies = 0;   // failed verification (see update_step)
  std::uint64_t conflict_cells = 0;     // cells that entered conflict resolution
};

// Drives one grid against a device assignment over a NetSim. Each generation:
// snapshot all neighborhoods, send both probes for every cell, wait, retry the
// cells that stayed silent, re-probe cells with contradictory evidence, then
// apply all transitions simultaneously.
//
// A reply only counts for cell c and predicate k if it decodes as an echo
// reply, its own checksum verifies, identifier/sequence match the current
// step tag, and the echoed data words are exactly the probe's. A single
// corrupted bit can otherwise turn a deliberately invalid probe into a valid
// one (the fold moves by +-2^b), and a bare "any reply = true" client picks
// up false birth/survival events at measurable rates.
class LifeDriver {
 public:
  LifeDriver(LifeGrid initial, CellAssignment assignment, NetSim& net,
             LifeProtocolConfig cfg);

  // Advances one generation. Throws PersistentConflictError if a cell still
  // has contradictory replies after the conflict budget.
  void update_step();

  const LifeGrid& grid() const { return grid_; }
  const LifeStepStats& step_stats() const { return step_stats_; }    // last step
  const LifeStepStats& total_stats() const { return total_stats_; }  // since construction

 private:
  void send_probes(const std::vector<std::size_t>& cells, bool retry_round);
  void collect(OcWord id);

  LifeGrid grid_;
  CellAssignment assignment_;
  std::unordered_map<DeviceAddress, std::size_t> cell_of_;
  NetSim& net_;
  LifeProtocolConfig cfg_;
  std::vector<std::array<std::uint8_t, 8>> nbrs_;  // snapshot for the current step
  std::vector<std::uint8_t> got2_, got3_;
  LifeStepStats step_stats_;
  LifeStepStats total_stats_;
};

struct LifeRunReport {
  std::uint64_t generations_completed = 0;
  std::int64_t first_deviation_generation = -1;  // -1 = none
  std::uint64_t deviating_cells = 0;             // at the first deviation
  std::uint64_t measurement_messages = 0;        // pool measurement traffic
  RunMetrics metrics;
};

// 4x4 torus with the standard glider, one Validating device per cell wired
// directly (addresses 1..16 row-major), compared against the control automaton
// every generation. Stops at the first deviating generation.
struct GliderConfig {
  std::uint64_t generations = 8192;
  NetworkConfig net;
  LifeProtocolConfig protocol;
  std::string csv_path;  // per-generation counters; empty = no file
};
LifeRunReport run_glider_experiment(const GliderConfig& cfg);
LifeGrid make_glider_grid();

// Full-procedure run: generate (or take) a device pool, measure it, filter and
// order it, assign row-major, then run `generations` message-passing steps
// against the control automaton on a randomly filled grid.
struct LargeLifeConfig {
  std::size_t width = 200;
  std::size_t height = 500;
  std::uint64_t generations = 2;
  double fill = 0.3;              // live-cell density of the random start
  std::uint64_t seed = 1;
  PoolGenParams pool;             // pool.count devices are generated
  int probes_per_device = 3;
  double measure_timeout_ms = 60000.0;
  NetworkConfig net;
  LifeProtocolConfig protocol;
  std::string csv_path;
};
LifeRunReport run_large_life_experiment(const LargeLifeConfig& cfg);

}  // namespace ec
