#pragma once

// Pool management for the cell-update devices: measuring per-device mean
// response times with probe echoes, discarding the hopeless ones, ordering
// the rest slowest-first and mapping them onto grid cells so that the slow
// devices get their probes earliest (latency masking: while their replies are
// in flight, the faster tail of the sweep is still being sent).

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/netsim.hpp"

namespace ec {

struct DeviceProfile {
  DeviceAddress address = 0;
  ResponderBehavior behavior = ResponderBehavior::Validating;
  LatencyModel latency;                   // ground truth used by the simulator
  std::optional<double> mean_rtt_ms;      // measured; nullopt = never answered
};

struct InsufficientDevicesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Device files are CSV: address, behavior, median_ms, shape — one device per
// line, behavior spelled validating/nonvalidating (case-insensitive, V/NV
// accepted). A leading header line starting with "address" is skipped.
std::vector<DeviceProfile> load_device_file(const std::string& path);
void save_device_file(const std::string& path, std::span<const DeviceProfile> devices);

struct PoolGenParams {
  std::size_t count = 0;
  double median_lo_ms = 1.0;   // medians drawn log-uniform in [lo, hi]
  double median_hi_ms = 3000.0;
  double shape = 0.5;
  ResponderBehavior behavior = ResponderBehavior::Validating;
  std::uint64_t seed = 1;
};
std::vector<DeviceProfile> make_random_pool(const PoolGenParams& params);

void register_pool(NetSim& net, std::span<const DeviceProfile> devices);

// Sends `probes_per_device` valid echo requests to every device (one sweep per
// round, round index carried in the sequence field so stragglers from earlier
// rounds cannot be misattributed) and fills in mean_rtt_ms from the replies
// that actually came back. Devices that never reply keep nullopt. Lost probes
// simply do not contribute.
void measure_response_times(std::vector<DeviceProfile>& devices, NetSim& net,
                            int probes_per_device, double round_timeout_ms);

// Keeps devices with a measured mean <= cutoff (default 10 s), then orders
// them slowest first; equal means fall back to ascending address so the order
// is a deterministic total order.
std::vector<DeviceProfile> filter_and_order(std::span<const DeviceProfile> devices,
                                            double cutoff_ms = 10000.0);

struct CellAssignment {
  std::size_t width = 0;   // columns
  std::size_t height = 0;  // rows
  std::vector<DeviceAddress> by_cell;  // row-major
  DeviceAddress at(std::size_t row, std::size_t col) const {
    return by_cell[row * width + col];
  }
};

// Row-major assignment starting at the top-left cell, consuming the ordered
// pool from the front (slowest device ends up on the first cell). Throws
// InsufficientDevicesError when the pool cannot cover the grid.
CellAssignment assign_to_cells(std::span<const DeviceProfile> ordered,
                               std::size_t width, std::size_t height);

// Half-open binning: counts[i] covers [edges[i], edges[i+1]); values outside
// the full range are tallied in `ignored`.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t ignored = 0;
};
Histogram make_histogram(std::span<const double> values, std::vector<double> edges);
std::vector<double> log_edges(double lo, double hi, std::size_t bins);
void write_histogram_csv(const std::string& path, const Histogram& hist);

// Sends one echo to each device in pool order (send_interval_ms of simulated
// time between consecutive sends), waits, and returns the time from the first
// send to the last reply arrival. This is the masking measurement: with the
// slowest devices first the result tracks max(send duration, slowest RTT)
// instead of the sum of RTTs. Throws if some device never replied within the
// timeout (meant for lossless fixtures).
double masked_sweep_ms(NetSim& net, std::span<const DeviceProfile> ordered,
                       double send_interval_ms, double timeout_ms);

// End-to-end pool survey: load or generate a pool, measure it, filter and
// order it, and histogram the measured means (log-spaced bins over the usable
// range, falling back to linear bins for degenerate ranges).
struct ProbeRunConfig {
  std::string devices_path;  // empty = generate from `gen`
  PoolGenParams gen;
  int probes_per_device = 3;
  double round_timeout_ms = 60000.0;
  NetworkConfig net;
  std::string histogram_csv;  // empty = no file
  std::size_t histogram_bins = 40;
  std::string devices_out;  // write the pool (useful after generation)
};

struct ProbeRunReport {
  std::size_t total = 0;
  std::size_t usable = 0;  // got at least one reply
  std::size_t kept = 0;    // usable and under the cutoff
  double slowest_kept_ms = 0.0;
  double fastest_kept_ms = 0.0;
  Histogram hist;  // over all usable means, cutoff or not
};

ProbeRunReport run_probe_experiment(const ProbeRunConfig& cfg);

}  // namespace ec
