#pragma once

// Throughput benchmark over the associative-memory workload. Sim mode runs
// the message path through NetSim (simulated and wall rates both meaningful);
// daemon mode runs the identical workload through a real loopback UDP daemon
// in sequential request/reply lockstep (wall rates only; there is no simulated
// clock on a real socket).

#include <cstdint>

#include "core/metrics.hpp"
#include "core/netsim.hpp"

namespace ec {

struct BenchConfig {
  bool daemon_mode = false;
  std::size_t neurons = 256;
  std::size_t patterns = 8;
  int limit = 7;
  std::size_t steps = 10;
  std::uint64_t seed = 1;
  std::uint32_t pause_us = 0;  // optional pacing between daemon-mode requests
  NetworkConfig net{.drop_probability = 0.0,
                    .duplicate_probability = 0.0,
                    .corruption_probability = 0.0,
                    .reorder_window = 0,
                    .latency = {50.0, 0.5},
                    .rng_seed = 1};
};

RunMetrics run_bench(const BenchConfig& cfg);

}  // namespace ec
