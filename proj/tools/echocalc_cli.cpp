// Command-line front end. Talks to the library exclusively through the public
// C API in echocalc/echocalc.h; summaries go to stdout as JSON so runs are
// easy to script against.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "echocalc/echocalc.h"

using nlohmann::json;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ECHOCALC_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      std::cerr << "warning: ignoring non-numeric ECHOCALC_SEED\n";
    }
  }
  return 1;
}

json metrics_json(const ec_run_metrics& m) {
  return json{{"messages_sent", m.messages_sent},
              {"replies_received", m.replies_received},
              {"retries", m.retries},
              {"neuron_updates", m.neuron_updates},
              {"coupling_updates", m.coupling_updates},
              {"elapsed_sim_ms", m.elapsed_sim_ms},
              {"elapsed_wall_ms", m.elapsed_wall_ms},
              {"cups_sim", m.cups_sim},
              {"cups_wall", m.cups_wall},
              {"msgs_per_s_sim", m.msgs_per_s_sim},
              {"msgs_per_s_wall", m.msgs_per_s_wall}};
}

void emit_summary(const json& j, const std::string& summary_path) {
  std::cout << j.dump(2) << "\n";
  if (!summary_path.empty()) {
    std::ofstream out(summary_path);
    if (!out) {
      std::cerr << "error: cannot write " << summary_path << "\n";
      std::exit(1);
    }
    out << j.dump(2) << "\n";
  }
}

[[noreturn]] void die(const char* what, ec_status s) {
  std::cerr << "error: " << what << ": " << ec_status_str(s) << " (" << ec_last_error()
            << ")\n";
  std::exit(1);
}

struct NetFlags {
  double drop = -1.0, corruption = -1.0, duplicate = -1.0;
  double latency_median = -1.0, latency_shape = -1.0;
  std::uint32_t reorder = 0;
  bool reorder_set = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--drop", drop, "Per-leg drop probability");
    cmd->add_option("--corruption", corruption,
                    "Per-copy corruption probability (one random bit flip)");
    cmd->add_option("--duplicate", duplicate, "Request duplication probability");
    cmd->add_option("--latency-median", latency_median,
                    "Round-trip latency median in ms");
    cmd->add_option("--latency-shape", latency_shape, "Lognormal latency shape");
    cmd->add_option("--reorder", reorder, "Reply reorder window")
        ->each([this](const std::string&) { reorder_set = true; });
  }

  void apply(ec_net_config& net) const {
    if (drop >= 0.0) net.drop_probability = drop;
    if (corruption >= 0.0) net.corruption_probability = corruption;
    if (duplicate >= 0.0) net.duplicate_probability = duplicate;
    if (latency_median >= 0.0) net.latency_median_ms = latency_median;
    if (latency_shape >= 0.0) net.latency_shape = latency_shape;
    if (reorder_set) net.reorder_window = reorder;
  }
};

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echocalc: neural recall and cellular automata computed by the "
               "checksum engines of echo-answering devices"};
  app.require_subcommand(1);
  // Every flag below can also come from a TOML/INI file, keyed by subcommand
  // section ([neuro], [life], ...). Explicit command-line flags win over the
  // file; unknown keys are rejected like unknown flags. See README for the
  // schema.
  app.set_config("--config", "",
                 "Read options from a TOML/INI file (command-line flags override it)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  // ---- neuro ----
  auto* neuro = app.add_subcommand("neuro", "Associative recall experiment");
  ec_neuro_params np;
  ec_neuro_params_default(&np);
  np.seed = default_seed();
  std::string neuro_out, neuro_summary;
  NetFlags neuro_net;
  neuro->add_option("--n", np.neurons, "Neurons");
  neuro->add_option("--p", np.patterns, "Stored patterns per set");
  neuro->add_option("--l", np.coupling_limit, "Coupling clamp limit");
  neuro->add_option("--sets", np.sets, "Pattern sets");
  neuro->add_option("--probes", np.probes, "Probes per set");
  neuro->add_option("--steps", np.steps, "Asynchronous steps per probe");
  neuro->add_option("--distance", np.initial_distance, "Initial Hamming distance");
  neuro->add_option("--seed", np.seed, "Master seed");
  neuro->add_option("--out", neuro_out, "Per-step mean-distance CSV path");
  neuro->add_option("--summary-out", neuro_summary, "Summary JSON path");
  neuro_net.add_to(neuro);

  // ---- life ----
  auto* life = app.add_subcommand("life", "Cellular automaton experiment");
  ec_life_params lp;
  ec_life_params_default(&lp);
  lp.glider = 0;
  lp.seed = default_seed();
  std::uint32_t life_retries = 1;
  bool life_glider = false, life_strict = false;
  std::string life_out, life_summary;
  NetFlags life_net;
  life->add_option("--width", lp.width, "Grid width (columns)");
  life->add_option("--height", lp.height, "Grid height (rows)");
  life->add_option("--steps", lp.generations, "Generations to run");
  life->add_option("--devices", lp.devices, "Device pool size (0 = one per cell)");
  life->add_option("--fill", lp.fill, "Random start live density");
  life->add_option("--retries", life_retries,
                   "Probe retries per generation (0 disables retrying)");
  life->add_option("--seed", lp.seed, "Master seed");
  life->add_flag("--glider", life_glider, "4x4 glider preset with direct device wiring");
  life->add_flag("--strict", life_strict, "Exit nonzero if the run deviates from the oracle");
  life->add_option("--pool-median-lo", lp.pool_median_lo_ms, "Pool latency median low (ms)");
  life->add_option("--pool-median-hi", lp.pool_median_hi_ms, "Pool latency median high (ms)");
  life->add_option("--pool-shape", lp.pool_shape, "Pool latency shape");
  life->add_option("--out", life_out, "Per-generation CSV path");
  life->add_option("--summary-out", life_summary, "Summary JSON path");
  life_net.add_to(life);

  // ---- probe ----
  auto* probe = app.add_subcommand("probe", "Measure a device pool and histogram it");
  ec_probe_params pp;
  ec_probe_params_default(&pp);
  pp.seed = default_seed();
  std::string probe_devices, probe_hist, probe_devices_out;
  std::string probe_summary;
  NetFlags probe_net;
  probe->add_option("--devices", probe_devices, "Device file (address, behavior, median_ms, shape)");
  probe->add_option("--generate", pp.generate_count, "Generate this many devices instead");
  probe->add_option("--median-lo", pp.generate_median_lo_ms, "Generated median low (ms)");
  probe->add_option("--median-hi", pp.generate_median_hi_ms, "Generated median high (ms)");
  probe->add_option("--shape", pp.generate_shape, "Generated latency shape");
  probe->add_option("--probes", pp.probes_per_device, "Probes per device");
  probe->add_option("--bins", pp.histogram_bins, "Histogram bins");
  probe->add_option("--seed", pp.seed, "Master seed");
  probe->add_option("--histogram-out", probe_hist, "Histogram CSV path");
  probe->add_option("--devices-out", probe_devices_out, "Write the pool as a device file");
  probe->add_option("--summary-out", probe_summary, "Summary JSON path");
  probe_net.add_to(probe);

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "Throughput benchmark");
  ec_bench_params bp;
  ec_bench_params_default(&bp);
  bp.seed = default_seed();
  std::string bench_mode = "sim", bench_summary;
  bench->add_option("--mode", bench_mode, "sim or daemon")
      ->check(CLI::IsMember({"sim", "daemon"}));
  bench->add_option("--n", bp.neurons, "Neurons");
  bench->add_option("--p", bp.patterns, "Patterns");
  bench->add_option("--l", bp.coupling_limit, "Coupling clamp limit");
  bench->add_option("--steps", bp.steps, "Steps");
  bench->add_option("--seed", bp.seed, "Master seed");
  bench->add_option("--pause-us", bp.pause_us, "Pause between daemon-mode requests (us)");
  bench->add_option("--summary-out", bench_summary, "Summary JSON path");

  // ---- daemon ----
  auto* daemon = app.add_subcommand("daemon", "Loopback UDP device daemon");
  std::uint16_t daemon_port = 0;
  std::string daemon_devices, daemon_mix = "1:0";
  daemon->add_option("--port", daemon_port, "UDP port (0 = ephemeral)");
  daemon->add_option("--devices", daemon_devices, "Device file for per-address behaviors");
  daemon->add_option("--behavior-mix", daemon_mix,
                     "validating:nonvalidating ratio for unlisted addresses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // anything but help/version is a usage error
  }

  if (neuro->parsed()) {
    neuro_net.apply(np.net);
    np.csv_path = neuro_out.empty() ? nullptr : neuro_out.c_str();
    ec_run_metrics m{};
    double final_dist = 0.0;
    if (ec_status s = ec_neuro_run(&np, &m, &final_dist); s != EC_OK)
      die("neuro run failed", s);
    json j{{"experiment", "neuro"},
           {"neurons", np.neurons},
           {"patterns", np.patterns},
           {"final_mean_distance_async", final_dist},
           {"metrics", metrics_json(m)}};
    emit_summary(j, neuro_summary);
    return 0;
  }

  if (life->parsed()) {
    life_net.apply(lp.net);
    lp.glider = life_glider ? 1 : 0;
    lp.attempts = life_retries + 1;
    lp.csv_path = life_out.empty() ? nullptr : life_out.c_str();
    ec_life_report rep{};
    if (ec_status s = ec_life_run(&lp, &rep); s != EC_OK) die("life run failed", s);
    json j{{"experiment", "life"},
           {"glider", bool(lp.glider)},
           {"generations_completed", rep.generations_completed},
           {"first_deviation_generation", rep.first_deviation_generation},
           {"deviating_cells", rep.deviating_cells},
           {"measurement_messages", rep.measurement_messages},
           {"metrics", metrics_json(rep.metrics)}};
    emit_summary(j, life_summary);
    if (life_strict && rep.first_deviation_generation >= 0) {
      std::cerr << "strict mode: run deviated from the oracle at generation "
                << rep.first_deviation_generation << "\n";
      return 1;
    }
    return 0;
  }

  if (probe->parsed()) {
    probe_net.apply(pp.net);
    pp.devices_path = probe_devices.empty() ? nullptr : probe_devices.c_str();
    pp.histogram_csv_path = probe_hist.empty() ? nullptr : probe_hist.c_str();
    pp.devices_out_path = probe_devices_out.empty() ? nullptr : probe_devices_out.c_str();
    ec_probe_report rep{};
    if (ec_status s = ec_probe_run(&pp, &rep); s != EC_OK) die("probe run failed", s);
    json j{{"experiment", "probe"},
           {"devices_total", rep.devices_total},
           {"devices_usable", rep.devices_usable},
           {"devices_kept", rep.devices_kept},
           {"slowest_kept_ms", rep.slowest_kept_ms},
           {"fastest_kept_ms", rep.fastest_kept_ms}};
    emit_summary(j, probe_summary);
    return 0;
  }

  if (bench->parsed()) {
    bp.daemon_mode = (bench_mode == "daemon") ? 1 : 0;
    ec_run_metrics m{};
    if (ec_status s = ec_bench_run(&bp, &m); s != EC_OK) die("bench run failed", s);
    // Historical figures from the original 2002 runs of this scheme, printed
    // for scale. They are hardware-bound and not targets.
    json j{{"experiment", "bench"},
           {"mode", bench_mode},
           {"neurons", bp.neurons},
           {"steps", bp.steps},
           {"metrics", metrics_json(m)},
           {"reference_2002",
            json{{"cups_message_path", 0.76e6},
                 {"cups_conventional", 5.5e6},
                 {"note", "measured on 2002 hardware; context only, not targets"}}}};
    emit_summary(j, bench_summary);
    return 0;
  }

  if (daemon->parsed()) {
    std::uint32_t mixv = 1, mixnv = 0;
    auto colon = daemon_mix.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
      mixv = std::stoul(daemon_mix.substr(0, colon));
      mixnv = std::stoul(daemon_mix.substr(colon + 1));
    } catch (const std::exception&) {
      std::cerr << "error: --behavior-mix wants V:NV (e.g. 3:1)\n";
      return 2;
    }
    ec_daemon* d = nullptr;
    if (ec_status s = ec_daemon_start(daemon_port,
                                      daemon_devices.empty() ? nullptr
                                                             : daemon_devices.c_str(),
                                      mixv, mixnv, &d);
        s != EC_OK)
      die("daemon start failed", s);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "daemon listening on 127.0.0.1:" << ec_daemon_port(d) << std::endl;
    while (!g_stop.load())
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    std::uint64_t rx = ec_daemon_datagrams_received(d);
    std::uint64_t tx = ec_daemon_replies_sent(d);
    ec_daemon_stop(d);
    std::cout << "daemon stopped after " << rx << " datagrams in, " << tx
              << " replies out\n";
    return 0;
  }

  return 2;
}
