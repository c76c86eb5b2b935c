// C ABI over the core. Conventions: every entry point catches everything and
// maps it to an ec_status; the human-readable cause lands in a thread-local
// string readable via ec_last_error(); outputs are only written on EC_OK.

#include "echocalc/echocalc.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "core/bench.hpp"
#include "core/daemon.hpp"
#include "core/devicepool.hpp"
#include "core/echo_codec.hpp"
#include "core/errors.hpp"
#include "core/hopfield.hpp"
#include "core/life.hpp"
#include "core/netsim.hpp"
#include "core/seeds.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ec_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ec::InsufficientDevicesError& e) {
    g_last_error = e.what();
    return EC_ERR_INSUFFICIENT_DEVICES;
  } catch (const ec::PersistentConflictError& e) {
    g_last_error = e.what();
    return EC_ERR_PROTOCOL;
  } catch (const ec::IoError& e) {
    g_last_error = e.what();
    return EC_ERR_IO;
  } catch (const std::system_error& e) {
    g_last_error = e.what();
    return EC_ERR_IO;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return EC_ERR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return EC_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return EC_ERR_INTERNAL;
  }
}

ec_status fail(ec_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

ec::NetworkConfig to_core(const ec_net_config& c) {
  ec::NetworkConfig n;
  n.drop_probability = c.drop_probability;
  n.duplicate_probability = c.duplicate_probability;
  n.corruption_probability = c.corruption_probability;
  n.reorder_window = c.reorder_window;
  n.latency.median_ms = c.latency_median_ms;
  n.latency.shape = c.latency_shape;
  n.rng_seed = c.rng_seed;
  return n;
}

ec_run_metrics to_c(const ec::RunMetrics& m) {
  ec_run_metrics out{};
  out.messages_sent = m.messages_sent;
  out.replies_received = m.replies_received;
  out.retries = m.retries;
  out.neuron_updates = m.neuron_updates;
  out.coupling_updates = m.coupling_updates;
  out.elapsed_sim_ms = m.elapsed_sim_ms;
  out.elapsed_wall_ms = m.elapsed_wall_ms;
  out.cups_sim = m.cups_sim;
  out.cups_wall = m.cups_wall;
  out.msgs_per_s_sim = m.msgs_per_s_sim;
  out.msgs_per_s_wall = m.msgs_per_s_wall;
  return out;
}

ec_status copy_out(const std::vector<std::uint8_t>& bytes, uint8_t* out,
                   size_t capacity, size_t* out_len) {
  if (bytes.size() > capacity)
    return fail(EC_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  std::memcpy(out, bytes.data(), bytes.size());
  *out_len = bytes.size();
  return EC_OK;
}

}  // namespace

struct ec_net {
  ec::NetSim sim;
  std::vector<ec::Reply> batch;
  explicit ec_net(const ec::NetworkConfig& cfg) : sim(cfg) {}
};

struct ec_daemon {
  ec::DaemonServer server;
  explicit ec_daemon(const ec::DaemonConfig& cfg) : server(cfg) {}
};

extern "C" {

const char* ec_status_str(ec_status s) {
  switch (s) {
    case EC_OK: return "ok";
    case EC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EC_ERR_DECODE: return "undecodable message";
    case EC_ERR_UNKNOWN_ADDRESS: return "unknown device address";
    case EC_ERR_INSUFFICIENT_DEVICES: return "insufficient devices";
    case EC_ERR_IO: return "i/o error";
    case EC_ERR_PROTOCOL: return "protocol failure";
    case EC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case EC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ec_last_error(void) { return g_last_error.c_str(); }

void ec_version(int* major, int* minor) {
  if (major) *major = ECHOCALC_VERSION_MAJOR;
  if (minor) *minor = ECHOCALC_VERSION_MINOR;
}

/* --------------------------------------------------------------- codec --- */

ec_status ec_echo_checksum(const uint8_t* bytes, size_t len, uint16_t* out) {
  if (!bytes || !out) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  if (len < 8 || len % 2 != 0)
    return fail(EC_ERR_INVALID_ARGUMENT, "length must be even and >= 8");
  std::uint64_t acc = 0;
  for (size_t i = 0; i < len; i += 2) {
    if (i == 2) continue;  // checksum field reads as +0 while folding
    acc += (std::uint16_t(bytes[i]) << 8) | bytes[i + 1];
  }
  while (acc >> 16) acc = (acc & 0xFFFFu) + (acc >> 16);
  *out = std::uint16_t(~std::uint16_t(acc));
  return EC_OK;
}

int ec_echo_valid(const uint8_t* bytes, size_t len) {
  if (!bytes) return 0;
  ec::DecodeResult r = ec::decode({bytes, len});
  return (r && ec::validate(r.message)) ? 1 : 0;
}

ec_status ec_echo_build_request(uint16_t identifier, uint16_t sequence,
                                const uint16_t* data_words, size_t data_count,
                                uint8_t* out, size_t capacity, size_t* out_len) {
  if (!out || !out_len || (data_count > 0 && !data_words))
    return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ec::EchoMessage m;
    m.identifier = identifier;
    m.sequence = sequence;
    m.data.assign(data_words, data_words + data_count);
    m.checksum = ec::compute_checksum(m);
    return copy_out(ec::encode(m), out, capacity, out_len);
  });
}

ec_status ec_echo_respond(const uint8_t* bytes, size_t len, int validating,
                          uint8_t* out, size_t capacity, size_t* out_len) {
  if (!bytes || !out_len) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto reply = ec::handle_datagram(
        {bytes, len}, validating ? ec::ResponderBehavior::Validating
                                 : ec::ResponderBehavior::NonValidating);
    if (!reply) {
      *out_len = 0;
      return EC_OK;
    }
    if (!out) return fail(EC_ERR_INVALID_ARGUMENT, "null output buffer");
    return copy_out(*reply, out, capacity, out_len);
  });
}

/* ----------------------------------------------------------- simulation --- */

void ec_net_config_default(ec_net_config* cfg) {
  if (!cfg) return;
  ec::NetworkConfig d;
  cfg->drop_probability = d.drop_probability;
  cfg->duplicate_probability = d.duplicate_probability;
  cfg->corruption_probability = d.corruption_probability;
  cfg->reorder_window = d.reorder_window;
  cfg->latency_median_ms = d.latency.median_ms;
  cfg->latency_shape = d.latency.shape;
  cfg->rng_seed = d.rng_seed;
}

ec_status ec_net_create(const ec_net_config* cfg, ec_net** out) {
  if (!cfg || !out) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new ec_net(to_core(*cfg));
    return EC_OK;
  });
}

void ec_net_destroy(ec_net* net) { delete net; }

ec_status ec_net_add_device(ec_net* net, uint64_t address, int validating,
                            double latency_median_ms, double latency_shape) {
  if (!net) return fail(EC_ERR_INVALID_ARGUMENT, "null network");
  return guarded([&] {
    std::optional<ec::LatencyModel> lat;
    if (latency_median_ms >= 0.0)
      lat = ec::LatencyModel{latency_median_ms, latency_shape};
    net->sim.add_device(address,
                        validating ? ec::ResponderBehavior::Validating
                                   : ec::ResponderBehavior::NonValidating,
                        lat);
    return EC_OK;
  });
}

ec_status ec_net_send(ec_net* net, uint64_t address, const uint8_t* bytes, size_t len) {
  if (!net || (!bytes && len > 0))
    return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  try {
    net->sim.send_request(address, {bytes, len});
    return EC_OK;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return EC_ERR_UNKNOWN_ADDRESS;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EC_ERR_INTERNAL;
  }
}

ec_status ec_net_advance(ec_net* net, double delta_ms) {
  if (!net) return fail(EC_ERR_INVALID_ARGUMENT, "null network");
  return guarded([&] {
    net->sim.advance_clock(delta_ms);
    return EC_OK;
  });
}

double ec_net_now_ms(const ec_net* net) { return net ? net->sim.now_ms() : 0.0; }

ec_status ec_net_collect_replies(ec_net* net, double now_ms, size_t* count) {
  if (!net || !count) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    net->batch = net->sim.poll_replies(now_ms);
    *count = net->batch.size();
    return EC_OK;
  });
}

ec_status ec_net_reply_at(const ec_net* net, size_t index, ec_reply_view* out) {
  if (!net || !out) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= net->batch.size())
    return fail(EC_ERR_INVALID_ARGUMENT, "reply index out of range");
  const ec::Reply& r = net->batch[index];
  out->address = r.address;
  out->due_ms = r.due_ms;
  out->bytes = r.payload.data();
  out->len = r.payload.size();
  return EC_OK;
}

/* ---------------------------------------------------------- experiments --- */

void ec_neuro_params_default(ec_neuro_params* p) {
  if (!p) return;
  ec::RecallConfig d;
  p->neurons = uint32_t(d.neurons);
  p->patterns = uint32_t(d.patterns);
  p->coupling_limit = d.limit;
  p->sets = uint32_t(d.sets);
  p->probes = uint32_t(d.probes);
  p->steps = uint32_t(d.steps);
  p->initial_distance = d.initial_distance;
  p->seed = d.seed;
  ec_net_config_default(&p->net);
  p->csv_path = nullptr;
}

ec_status ec_neuro_run(const ec_neuro_params* p, ec_run_metrics* metrics,
                       double* final_mean_distance_async) {
  if (!p) return fail(EC_ERR_INVALID_ARGUMENT, "null params");
  return guarded([&] {
    ec::RecallConfig cfg;
    cfg.neurons = p->neurons;
    cfg.patterns = p->patterns;
    cfg.limit = p->coupling_limit;
    cfg.sets = p->sets;
    cfg.probes = p->probes;
    cfg.steps = p->steps;
    cfg.initial_distance = p->initial_distance;
    cfg.seed = p->seed;
    cfg.net = to_core(p->net);
    if (p->csv_path) cfg.csv_path = p->csv_path;
    ec::RecallResult res = ec::run_recall_experiment(cfg);
    if (metrics) *metrics = to_c(res.metrics);
    if (final_mean_distance_async)
      *final_mean_distance_async = res.mean_distance_async.back();
    return EC_OK;
  });
}

void ec_life_params_default(ec_life_params* p) {
  if (!p) return;
  p->width = 4;
  p->height = 4;
  p->generations = 64;
  p->glider = 1;
  p->fill = 0.3;
  p->devices = 0;
  p->attempts = 2;
  p->seed = 1;
  ec_net_config_default(&p->net);
  p->pool_median_lo_ms = 1.0;
  p->pool_median_hi_ms = 3000.0;
  p->pool_shape = 0.5;
  p->csv_path = nullptr;
}

ec_status ec_life_run(const ec_life_params* p, ec_life_report* report) {
  if (!p || !report) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ec::LifeRunReport rep;
    if (p->glider) {
      ec::GliderConfig cfg;
      cfg.generations = p->generations;
      cfg.net = to_core(p->net);
      cfg.protocol.attempts = int(p->attempts);
      if (p->csv_path) cfg.csv_path = p->csv_path;
      rep = ec::run_glider_experiment(cfg);
    } else {
      ec::LargeLifeConfig cfg;
      cfg.width = p->width;
      cfg.height = p->height;
      cfg.generations = p->generations;
      cfg.fill = p->fill;
      cfg.seed = p->seed;
      cfg.pool.count = p->devices ? p->devices : std::size_t(p->width) * p->height;
      cfg.pool.median_lo_ms = p->pool_median_lo_ms;
      cfg.pool.median_hi_ms = p->pool_median_hi_ms;
      cfg.pool.shape = p->pool_shape;
      cfg.pool.seed = ec::mix_seed(p->seed, 0xD001);
      cfg.net = to_core(p->net);
      cfg.protocol.attempts = int(p->attempts);
      // A round has to outlast the slow tail of the pool, or late replies read
      // as losses and the run "deviates" for no protocol reason.
      cfg.protocol.round_timeout_ms = std::max(5000.0, 20.0 * p->pool_median_hi_ms);
      cfg.measure_timeout_ms = std::max(60000.0, 20.0 * p->pool_median_hi_ms);
      if (p->csv_path) cfg.csv_path = p->csv_path;
      rep = ec::run_large_life_experiment(cfg);
    }
    report->generations_completed = rep.generations_completed;
    report->first_deviation_generation = rep.first_deviation_generation;
    report->deviating_cells = rep.deviating_cells;
    report->measurement_messages = rep.measurement_messages;
    report->metrics = to_c(rep.metrics);
    return EC_OK;
  });
}

void ec_probe_params_default(ec_probe_params* p) {
  if (!p) return;
  p->devices_path = nullptr;
  p->generate_count = 1000;
  p->generate_median_lo_ms = 1.0;
  p->generate_median_hi_ms = 3000.0;
  p->generate_shape = 0.5;
  p->probes_per_device = 3;
  p->seed = 1;
  ec_net_config_default(&p->net);
  p->histogram_csv_path = nullptr;
  p->histogram_bins = 40;
  p->devices_out_path = nullptr;
}

ec_status ec_probe_run(const ec_probe_params* p, ec_probe_report* report) {
  if (!p || !report) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ec::ProbeRunConfig cfg;
    if (p->devices_path) cfg.devices_path = p->devices_path;
    cfg.gen.count = p->generate_count;
    cfg.gen.median_lo_ms = p->generate_median_lo_ms;
    cfg.gen.median_hi_ms = p->generate_median_hi_ms;
    cfg.gen.shape = p->generate_shape;
    cfg.gen.seed = ec::mix_seed(p->seed, 0x9001);
    cfg.probes_per_device = int(p->probes_per_device);
    cfg.net = to_core(p->net);
    cfg.net.rng_seed = ec::mix_seed(p->seed, 0x9002);
    if (p->histogram_csv_path) cfg.histogram_csv = p->histogram_csv_path;
    cfg.histogram_bins = p->histogram_bins;
    if (p->devices_out_path) cfg.devices_out = p->devices_out_path;
    ec::ProbeRunReport rep = ec::run_probe_experiment(cfg);
    report->devices_total = rep.total;
    report->devices_usable = rep.usable;
    report->devices_kept = rep.kept;
    report->slowest_kept_ms = rep.slowest_kept_ms;
    report->fastest_kept_ms = rep.fastest_kept_ms;
    return EC_OK;
  });
}

void ec_bench_params_default(ec_bench_params* p) {
  if (!p) return;
  ec::BenchConfig d;
  p->daemon_mode = d.daemon_mode ? 1 : 0;
  p->neurons = uint32_t(d.neurons);
  p->patterns = uint32_t(d.patterns);
  p->coupling_limit = d.limit;
  p->steps = uint32_t(d.steps);
  p->seed = d.seed;
  p->pause_us = d.pause_us;
}

ec_status ec_bench_run(const ec_bench_params* p, ec_run_metrics* metrics) {
  if (!p || !metrics) return fail(EC_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    ec::BenchConfig cfg;
    cfg.daemon_mode = p->daemon_mode != 0;
    cfg.neurons = p->neurons;
    cfg.patterns = p->patterns;
    cfg.limit = p->coupling_limit;
    cfg.steps = p->steps;
    cfg.seed = p->seed;
    cfg.pause_us = p->pause_us;
    *metrics = to_c(ec::run_bench(cfg));
    return EC_OK;
  });
}

/* --------------------------------------------------------------- daemon --- */

ec_status ec_daemon_start(uint16_t port, const char* devices_path,
                          uint32_t mix_validating, uint32_t mix_nonvalidating,
                          ec_daemon** out) {
  if (!out) return fail(EC_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    ec::DaemonConfig cfg;
    cfg.port = port;
    cfg.mix_validating = mix_validating;
    cfg.mix_nonvalidating = mix_nonvalidating;
    if (devices_path) {
      for (const ec::DeviceProfile& d : ec::load_device_file(devices_path))
        cfg.behaviors[d.address] = d.behavior;
    }
    *out = new ec_daemon(cfg);
    return EC_OK;
  });
}

uint16_t ec_daemon_port(const ec_daemon* d) { return d ? d->server.port() : 0; }

uint64_t ec_daemon_datagrams_received(const ec_daemon* d) {
  return d ? d->server.datagrams_received() : 0;
}

uint64_t ec_daemon_replies_sent(const ec_daemon* d) {
  return d ? d->server.replies_sent() : 0;
}

ec_status ec_daemon_stop(ec_daemon* d) {
  if (!d) return fail(EC_ERR_INVALID_ARGUMENT, "null daemon");
  return guarded([&] {
    d->server.stop();
    delete d;
    return EC_OK;
  });
}

}  // extern "C"
