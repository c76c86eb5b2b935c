#include "core/devicepool.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "core/echo_codec.hpp"
#include "core/errors.hpp"

namespace ec {

std::vector<DeviceProfile> make_random_pool(const PoolGenParams& params) {
  if (params.median_lo_ms <= 0.0 || params.median_hi_ms < params.median_lo_ms)
    throw std::invalid_argument("make_random_pool: bad median range");
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> u(std::log(params.median_lo_ms),
                                           std::log(params.median_hi_ms));
  std::vector<DeviceProfile> out;
  out.reserve(params.count);
  for (std::size_t i = 0; i < params.count; ++i) {
    DeviceProfile d;
    d.address = DeviceAddress(i + 1);
    d.behavior = params.behavior;
    d.latency.median_ms = std::exp(u(rng));
    d.latency.shape = params.shape;
    out.push_back(d);
  }
  return out;
}

void register_pool(NetSim& net, std::span<const DeviceProfile> devices) {
  for (const DeviceProfile& d : devices)
    net.add_device(d.address, d.behavior, d.latency);
}

static std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

static std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<DeviceProfile> load_device_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("device file: cannot open " + path);
  std::vector<DeviceProfile> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (lineno == 1 && lower(t).rfind("address", 0) == 0) continue;  // header
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 4)
      throw IoError("device file: line " + std::to_string(lineno) +
                    ": expected 4 fields (address, behavior, median_ms, shape)");
    DeviceProfile d;
    try {
      d.address = std::stoull(fields[0], nullptr, 0);
      std::string b = lower(fields[1]);
      if (b == "validating" || b == "v")
        d.behavior = ResponderBehavior::Validating;
      else if (b == "nonvalidating" || b == "non-validating" || b == "nv")
        d.behavior = ResponderBehavior::NonValidating;
      else
        throw std::invalid_argument("behavior must be validating or nonvalidating");
      d.latency.median_ms = std::stod(fields[2]);
      d.latency.shape = std::stod(fields[3]);
      if (d.latency.median_ms < 0.0 || d.latency.shape < 0.0)
        throw std::invalid_argument("median/shape must be nonnegative");
    } catch (const std::exception& e) {
      throw IoError("device file: line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(d);
  }
  return out;
}

void save_device_file(const std::string& path, std::span<const DeviceProfile> devices) {
  std::ofstream out(path);
  if (!out) throw IoError("device file: cannot write " + path);
  out << "address,behavior,median_ms,shape\n";
  for (const DeviceProfile& d : devices)
    out << d.address << ','
        << (d.behavior == ResponderBehavior::Validating ? "validating" : "nonvalidating")
        << ',' << d.latency.median_ms << ',' << d.latency.shape << '\n';
}

void measure_response_times(std::vector<DeviceProfile>& devices, NetSim& net,
                            int probes_per_device, double round_timeout_ms) {
  if (probes_per_device < 1)
    throw std::invalid_argument("measure_response_times: need at least one probe");
  std::unordered_map<DeviceAddress, std::size_t> index;
  for (std::size_t i = 0; i < devices.size(); ++i) index[devices[i].address] = i;
  std::vector<double> sum(devices.size(), 0.0);
  std::vector<std::uint64_t> count(devices.size(), 0);

  for (int round = 0; round < probes_per_device; ++round) {
    EchoMessage probe;
    probe.identifier = kPlusZero;
    probe.sequence = OcWord(round);  // round tag: keeps stragglers attributable
    probe.checksum = compute_checksum(probe);
    std::vector<std::uint8_t> bytes = encode(probe);

    double sent_at = net.now_ms();
    for (const DeviceProfile& d : devices) net.send_request(d.address, bytes);
    net.advance_clock(round_timeout_ms);

    std::vector<std::uint8_t> seen(devices.size(), 0);
    for (const Reply& r : net.poll_replies(net.now_ms())) {
      DecodeResult dr = decode(r.payload);
      if (!dr || dr.message.type != kEchoReplyType) continue;
      if (dr.message.sequence != OcWord(round)) continue;  // stale round, skip
      auto it = index.find(r.address);
      if (it == index.end()) continue;
      if (seen[it->second]) continue;  // duplicate delivery, count once
      seen[it->second] = 1;
      sum[it->second] += r.due_ms - sent_at;
      ++count[it->second];
    }
  }
  for (std::size_t i = 0; i < devices.size(); ++i)
    devices[i].mean_rtt_ms =
        count[i] > 0 ? std::optional<double>(sum[i] / double(count[i])) : std::nullopt;
}

std::vector<DeviceProfile> filter_and_order(std::span<const DeviceProfile> devices,
                                            double cutoff_ms) {
  std::vector<DeviceProfile> kept;
  for (const DeviceProfile& d : devices)
    if (d.mean_rtt_ms && *d.mean_rtt_ms <= cutoff_ms) kept.push_back(d);
  std::sort(kept.begin(), kept.end(), [](const DeviceProfile& a, const DeviceProfile& b) {
    if (*a.mean_rtt_ms != *b.mean_rtt_ms) return *a.mean_rtt_ms > *b.mean_rtt_ms;
    return a.address < b.address;
  });
  return kept;
}

CellAssignment assign_to_cells(std::span<const DeviceProfile> ordered,
                               std::size_t width, std::size_t height) {
  if (width == 0 || height == 0)
    throw std::invalid_argument("assign_to_cells: empty grid");
  std::size_t cells = width * height;
  if (ordered.size() < cells)
    throw InsufficientDevicesError(
        "assign_to_cells: " + std::to_string(ordered.size()) + " usable devices for " +
        std::to_string(cells) + " cells");
  CellAssignment a;
  a.width = width;
  a.height = height;
  a.by_cell.reserve(cells);
  for (std::size_t i = 0; i < cells; ++i) a.by_cell.push_back(ordered[i].address);
  return a;
}

Histogram make_histogram(std::span<const double> values, std::vector<double> edges) {
  if (edges.size() < 2) throw std::invalid_argument("make_histogram: need >= 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1]))
      throw std::invalid_argument("make_histogram: edges must strictly increase");
  Histogram h;
  h.edges = std::move(edges);
  h.counts.assign(h.edges.size() - 1, 0);
  for (double v : values) {
    if (v < h.edges.front() || v >= h.edges.back()) {
      ++h.ignored;
      continue;
    }
    auto it = std::upper_bound(h.edges.begin(), h.edges.end(), v);
    ++h.counts[std::size_t(it - h.edges.begin()) - 1];
  }
  return h;
}

std::vector<double> log_edges(double lo, double hi, std::size_t bins) {
  if (lo <= 0.0 || hi <= lo || bins == 0)
    throw std::invalid_argument("log_edges: need 0 < lo < hi and bins >= 1");
  std::vector<double> edges(bins + 1);
  double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo * std::exp(ratio * double(i) / double(bins));
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

void write_histogram_csv(const std::string& path, const Histogram& hist) {
  std::ofstream out(path);
  if (!out) throw IoError("histogram: cannot write " + path);
  out << "bin_lo_ms,bin_hi_ms,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    out << hist.edges[i] << ',' << hist.edges[i + 1] << ',' << hist.counts[i] << '\n';
}

ProbeRunReport run_probe_experiment(const ProbeRunConfig& cfg) {
  std::vector<DeviceProfile> pool = cfg.devices_path.empty()
                                        ? make_random_pool(cfg.gen)
                                        : load_device_file(cfg.devices_path);
  if (!cfg.devices_out.empty()) save_device_file(cfg.devices_out, pool);

  NetSim net(cfg.net);
  register_pool(net, pool);
  measure_response_times(pool, net, cfg.probes_per_device, cfg.round_timeout_ms);

  ProbeRunReport rep;
  rep.total = pool.size();
  std::vector<double> means;
  for (const DeviceProfile& d : pool)
    if (d.mean_rtt_ms) means.push_back(*d.mean_rtt_ms);
  rep.usable = means.size();

  std::vector<DeviceProfile> ordered = filter_and_order(pool);
  rep.kept = ordered.size();
  if (!ordered.empty()) {
    rep.slowest_kept_ms = *ordered.front().mean_rtt_ms;
    rep.fastest_kept_ms = *ordered.back().mean_rtt_ms;
  }

  if (!means.empty()) {
    double lo = *std::min_element(means.begin(), means.end());
    double hi = *std::max_element(means.begin(), means.end());
    std::vector<double> edges;
    if (lo > 0.0 && hi > lo * 1.0001) {
      edges = log_edges(lo * 0.999, hi * 1.001, cfg.histogram_bins);
    } else {
      // Degenerate or zero-latency range: linear bins around the values.
      double a = lo - 0.5, b = hi + 0.5;
      std::size_t bins = std::max<std::size_t>(cfg.histogram_bins, 1);
      for (std::size_t i = 0; i <= bins; ++i)
        edges.push_back(a + (b - a) * double(i) / double(bins));
    }
    rep.hist = make_histogram(means, std::move(edges));
    if (!cfg.histogram_csv.empty()) write_histogram_csv(cfg.histogram_csv, rep.hist);
  }
  return rep;
}

double masked_sweep_ms(NetSim& net, std::span<const DeviceProfile> ordered,
                       double send_interval_ms, double timeout_ms) {
  double start = net.now_ms();
  EchoMessage probe;
  probe.checksum = compute_checksum(probe);
  std::vector<std::uint8_t> bytes = encode(probe);
  for (const DeviceProfile& d : ordered) {
    net.send_request(d.address, bytes);
    net.advance_clock(send_interval_ms);
  }
  net.advance_clock(timeout_ms);

  std::unordered_map<DeviceAddress, double> first_reply;
  for (const Reply& r : net.poll_replies(net.now_ms())) {
    DecodeResult dr = decode(r.payload);
    if (!dr || dr.message.type != kEchoReplyType) continue;
    first_reply.emplace(r.address, r.due_ms);
  }
  double latest = start;
  for (const DeviceProfile& d : ordered) {
    auto it = first_reply.find(d.address);
    if (it == first_reply.end())
      throw std::runtime_error("masked_sweep_ms: device never replied within timeout");
    latest = std::max(latest, it->second);
  }
  return latest - start;
}

}  // namespace ec
