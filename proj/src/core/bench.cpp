#include "core/bench.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>
#include <thread>
#include <vector>

#include "core/daemon.hpp"
#include "core/hopfield.hpp"
#include "core/seeds.hpp"

namespace ec {

namespace {

struct Workload {
  CouplingMatrix j;
  Spins start;
};

Workload make_workload(const BenchConfig& cfg) {
  std::mt19937_64 rng(mix_seed(cfg.seed, 0xBE));
  std::vector<Spins> patterns;
  for (std::size_t p = 0; p < cfg.patterns; ++p)
    patterns.push_back(random_spins(cfg.neurons, rng));
  Workload w;
  w.j = hebb_couplings(patterns, cfg.limit);
  w.start = perturb(patterns[0], 0.25, rng);
  return w;
}

RunMetrics bench_sim(const BenchConfig& cfg) {
  Workload w = make_workload(cfg);
  NetworkConfig nc = cfg.net;
  nc.rng_seed = mix_seed(cfg.seed, 0x51);
  NetSim net(nc);
  std::vector<DeviceAddress> devs(cfg.neurons);
  for (std::size_t i = 0; i < cfg.neurons; ++i) {
    devs[i] = DeviceAddress(i + 1);
    net.add_device(devs[i], ResponderBehavior::NonValidating);
  }
  HopfieldDriverConfig dc;
  dc.perm_seed = mix_seed(cfg.seed, 0x9E);
  HopfieldDriver driver(w.j, w.start, net, devs, dc);

  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t s = 0; s < cfg.steps; ++s) driver.async_step();
  auto t1 = std::chrono::steady_clock::now();

  RunMetrics m;
  m.messages_sent = driver.stats().messages_sent;
  m.replies_received = driver.stats().replies_seen;
  m.retries = driver.stats().reissues;
  m.neuron_updates = driver.stats().applied;
  m.coupling_updates = m.neuron_updates * (cfg.neurons - 1);
  m.elapsed_sim_ms = net.now_ms();
  m.elapsed_wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  finalize_rates(m);
  return m;
}

RunMetrics bench_daemon(const BenchConfig& cfg) {
  Workload w = make_workload(cfg);
  DaemonConfig dcfg;
  dcfg.mix_validating = 0;  // field sums ride on arbitrary checksums
  dcfg.mix_nonvalidating = 1;
  DaemonServer daemon(dcfg);

  int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) throw std::runtime_error("bench: client socket failed");
  sockaddr_in peer{};
  peer.sin_family = AF_INET;
  peer.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  peer.sin_port = htons(daemon.port());
  timeval tv{2, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));

  Spins state = w.start;
  RunMetrics m;
  std::vector<std::uint8_t> rx(65536);
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t s = 0; s < cfg.steps; ++s) {
    for (std::size_t i = 0; i < cfg.neurons; ++i) {
      std::vector<std::uint8_t> icmp = encode(encode_neuron_request(i, w.j, state));
      std::uint64_t address = i + 1;
      std::vector<std::uint8_t> dgram(8);
      for (int b = 0; b < 8; ++b) dgram[std::size_t(b)] = std::uint8_t(address >> (56 - 8 * b));
      dgram.insert(dgram.end(), icmp.begin(), icmp.end());

      bool applied = false;
      for (int tries = 0; tries < 5 && !applied; ++tries) {
        if (tries > 0) ++m.retries;
        if (::sendto(fd, dgram.data(), dgram.size(), 0,
                     reinterpret_cast<sockaddr*>(&peer), sizeof(peer)) < 0)
          continue;
        ++m.messages_sent;
        ssize_t n = ::recvfrom(fd, rx.data(), rx.size(), 0, nullptr, nullptr);
        if (n < 8) continue;  // timeout or runt; resend
        DecodeResult dr = decode({rx.data() + 8, std::size_t(n) - 8});
        if (!dr || dr.message.type != kEchoReplyType) continue;
        ++m.replies_received;
        state[i] = decode_local_field(dr.message) >= 0 ? 1 : -1;
        ++m.neuron_updates;
        applied = true;
      }
      if (!applied) {
        ::close(fd);
        throw std::runtime_error("bench: daemon stopped answering");
      }
      if (cfg.pause_us) std::this_thread::sleep_for(std::chrono::microseconds(cfg.pause_us));
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  ::close(fd);

  m.coupling_updates = m.neuron_updates * (cfg.neurons - 1);
  m.elapsed_wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  finalize_rates(m);
  return m;
}

}  // namespace

RunMetrics run_bench(const BenchConfig& cfg) {
  if (cfg.neurons < 2) throw std::invalid_argument("bench: need at least two neurons");
  return cfg.daemon_mode ? bench_daemon(cfg) : bench_sim(cfg);
}

}  // namespace ec
