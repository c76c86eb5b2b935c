#pragma once

// Throughput accounting shared by the experiment runners. Two clocks matter:
// the simulated clock (what the modelled network would have taken) and the
// wall clock (what this process actually took). Rates are derived strictly
// from the counters so the reported numbers are auditable:
//   coupling_updates = neuron_updates * (neurons - 1)
//   cups_*           = coupling_updates / elapsed_*_seconds
//   msgs_per_s_*     = messages_sent  / elapsed_*_seconds

#include <cstdint>

namespace ec {

struct RunMetrics {
  std::uint64_t messages_sent = 0;
  std::uint64_t replies_received = 0;
  std::uint64_t retries = 0;          // reissued/retransmitted messages
  std::uint64_t neuron_updates = 0;   // cell probes count here too for life runs
  std::uint64_t coupling_updates = 0;
  double elapsed_sim_ms = 0.0;
  double elapsed_wall_ms = 0.0;
  double cups_sim = 0.0;
  double cups_wall = 0.0;
  double msgs_per_s_sim = 0.0;
  double msgs_per_s_wall = 0.0;
};

// Fills the rate fields from the counters. A zero elapsed time leaves the
// corresponding rates at 0 rather than dividing by it.
inline void finalize_rates(RunMetrics& m) {
  auto rate = [](double count, double ms) { return ms > 0.0 ? count / (ms / 1000.0) : 0.0; };
  m.cups_sim = rate(double(m.coupling_updates), m.elapsed_sim_ms);
  m.cups_wall = rate(double(m.coupling_updates), m.elapsed_wall_ms);
  m.msgs_per_s_sim = rate(double(m.messages_sent), m.elapsed_sim_ms);
  m.msgs_per_s_wall = rate(double(m.messages_sent), m.elapsed_wall_ms);
}

}  // namespace ec
