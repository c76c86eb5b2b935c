#include "core/hopfield.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/seeds.hpp"

namespace ec {

CouplingMatrix::CouplingMatrix(std::size_t n, int limit) : n_(n), limit_(limit) {
  if (n == 0) throw std::invalid_argument("CouplingMatrix: empty network");
  if (limit < 0) throw std::invalid_argument("CouplingMatrix: negative limit");
  if (n > 1 && double(n - 1) * limit > 32767.0)
    throw std::invalid_argument(
        "CouplingMatrix: (n-1)*limit exceeds the representable field range");
  j_.assign(n * n, 0);
}

void CouplingMatrix::set(std::size_t i, std::size_t j, int v) {
  if (i >= n_ || j >= n_) throw std::out_of_range("CouplingMatrix::set: index");
  if (i == j && v != 0)
    throw std::invalid_argument("CouplingMatrix::set: diagonal must stay zero");
  if (v > limit_ || v < -limit_)
    throw std::invalid_argument("CouplingMatrix::set: |value| exceeds limit");
  j_[i * n_ + j] = std::int16_t(v);
}

CouplingMatrix hebb_couplings(const std::vector<Spins>& patterns, int limit) {
  if (patterns.empty()) throw std::invalid_argument("hebb_couplings: no patterns");
  std::size_t n = patterns[0].size();
  for (const Spins& p : patterns) {
    if (p.size() != n)
      throw std::invalid_argument("hebb_couplings: inconsistent pattern sizes");
    for (std::int8_t s : p)
      if (s != 1 && s != -1)
        throw std::invalid_argument("hebb_couplings: entries must be +1/-1");
  }
  CouplingMatrix j(n, limit);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      int sum = 0;
      for (const Spins& p : patterns) sum += int(p[a]) * int(p[b]);
      int clipped = std::clamp(sum, -limit, limit);
      j.set(a, b, clipped);
      j.set(b, a, clipped);
    }
  }
  return j;
}

EchoMessage encode_neuron_request(std::size_t i, const CouplingMatrix& j,
                                  const Spins& state) {
  std::size_t n = j.size();
  if (state.size() != n)
    throw std::invalid_argument("encode_neuron_request: state size mismatch");
  if (i >= n) throw std::out_of_range("encode_neuron_request: neuron index");
  EchoMessage m;
  m.type = kEchoRequestType;
  m.checksum = kPlusZero;
  m.identifier = kPlusZero;
  m.sequence = kPlusZero;
  m.data.reserve(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    int term = state[k] > 0 ? j.at(i, k) : -j.at(i, k);
    m.data.push_back(oc_from_int(term));
  }
  return m;
}

int decode_local_field(const EchoMessage& reply) {
  if (reply.type != kEchoReplyType)
    throw std::invalid_argument("decode_local_field: not an echo reply");
  if (reply.identifier != kPlusZero || reply.sequence != kPlusZero)
    throw std::invalid_argument("decode_local_field: nonzero identifier/sequence");
  return oc_value(oc_negate(reply.checksum));
}

static int local_field(const Spins& s, const CouplingMatrix& j, std::size_t i) {
  int h = 0;
  std::size_t n = j.size();
  for (std::size_t k = 0; k < n; ++k) h += int(j.at(i, k)) * int(s[k]);
  return h;  // J_ii = 0 so including k == i is harmless
}

Spins parallel_update_oracle(const Spins& state, const CouplingMatrix& j) {
  if (state.size() != j.size())
    throw std::invalid_argument("parallel_update_oracle: size mismatch");
  Spins next(state.size());
  for (std::size_t i = 0; i < state.size(); ++i)
    next[i] = local_field(state, j, i) >= 0 ? 1 : -1;
  return next;
}

Spins async_update_oracle(const Spins& state, const CouplingMatrix& j,
                          const std::vector<std::size_t>& order) {
  if (state.size() != j.size())
    throw std::invalid_argument("async_update_oracle: size mismatch");
  Spins s = state;
  for (std::size_t i : order) {
    if (i >= s.size()) throw std::out_of_range("async_update_oracle: order index");
    s[i] = local_field(s, j, i) >= 0 ? 1 : -1;
  }
  return s;
}

double hamming_distance(const Spins& a, const Spins& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming_distance: size mismatch");
  if (a.empty()) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) ++diff;
  return double(diff) / double(a.size());
}

HopfieldDriver::HopfieldDriver(const CouplingMatrix& j, Spins initial, NetSim& net,
                               std::vector<DeviceAddress> devices,
                               HopfieldDriverConfig cfg)
    : j_(j),
      state_(std::move(initial)),
      net_(net),
      devices_(std::move(devices)),
      cfg_(cfg),
      perm_rng_(cfg.perm_seed) {
  if (state_.size() != j_.size())
    throw std::invalid_argument("HopfieldDriver: state size mismatch");
  if (devices_.size() != j_.size())
    throw std::invalid_argument(
        "HopfieldDriver: need exactly one device per neuron (the address is "
        "the only tag a reply carries)");
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    if (!net_.has_device(devices_[i]))
      throw std::invalid_argument("HopfieldDriver: device not registered");
    if (!neuron_of_.emplace(devices_[i], i).second)
      throw std::invalid_argument("HopfieldDriver: duplicate device address");
  }
  updated_.assign(state_.size(), 0);
}

void HopfieldDriver::drain() {
  for (Reply& r : net_.poll_replies(net_.now_ms())) {
    auto it = neuron_of_.find(r.address);
    if (it == neuron_of_.end()) continue;
    DecodeResult dr = decode(r.payload);
    if (!dr || dr.message.type != kEchoReplyType ||
        dr.message.identifier != kPlusZero || dr.message.sequence != kPlusZero) {
      ++stats_.malformed;
      continue;
    }
    ++stats_.replies_seen;
    std::size_t i = it->second;
    if (updated_[i]) continue;  // duplicate or straggler; first reply wins
    state_[i] = decode_local_field(dr.message) >= 0 ? 1 : -1;
    updated_[i] = 1;
    ++applied_this_step_;
    ++stats_.applied;
  }
}

void HopfieldDriver::async_step() {
  std::size_t n = state_.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), perm_rng_);
  last_order_ = order;

  std::fill(updated_.begin(), updated_.end(), 0);
  applied_this_step_ = 0;
  std::vector<std::size_t> pending = order;
  for (int sweep = 0; sweep < cfg_.max_sweeps && !pending.empty(); ++sweep) {
    for (std::size_t i : pending) {
      if (updated_[i]) continue;  // a straggler may have landed meanwhile
      EchoMessage m = encode_neuron_request(i, j_, state_);
      net_.send_request(devices_[i], encode(m));
      ++stats_.messages_sent;
      if (sweep > 0) ++stats_.reissues;
      net_.advance_clock(cfg_.send_interval_ms);
      drain();
    }
    net_.advance_clock(cfg_.sweep_timeout_ms);
    drain();
    std::vector<std::size_t> still;
    for (std::size_t i : order)
      if (!updated_[i]) still.push_back(i);
    pending = std::move(still);
  }
  if (!pending.empty())
    throw std::runtime_error("HopfieldDriver::async_step: sweep budget exhausted");
}

Spins random_spins(std::size_t n, std::mt19937_64& rng) {
  Spins s(n);
  for (auto& v : s) v = (rng() & 1) ? 1 : -1;
  return s;
}

Spins perturb(const Spins& s, double distance, std::mt19937_64& rng) {
  if (distance < 0.0 || distance > 1.0)
    throw std::invalid_argument("perturb: distance must be in [0,1]");
  std::size_t flips = std::size_t(distance * double(s.size()) + 0.5);
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  Spins out = s;
  for (std::size_t k = 0; k < flips; ++k) out[idx[k]] = -out[idx[k]];
  return out;
}

RecallResult run_recall_experiment(const RecallConfig& cfg) {
  auto wall_start = std::chrono::steady_clock::now();
  RecallResult res;
  res.mean_distance_async.assign(cfg.steps + 1, 0.0);
  res.mean_distance_parallel.assign(cfg.steps + 1, 0.0);
  std::size_t runs = 0;

  for (std::size_t set = 0; set < cfg.sets; ++set) {
    std::mt19937_64 pat_rng(mix_seed(cfg.seed, 0x5E7, set));
    std::vector<Spins> patterns;
    patterns.reserve(cfg.patterns);
    for (std::size_t p = 0; p < cfg.patterns; ++p)
      patterns.push_back(random_spins(cfg.neurons, pat_rng));
    CouplingMatrix j = hebb_couplings(patterns, cfg.limit);
    const Spins& target = patterns[0];

    for (std::size_t probe = 0; probe < cfg.probes; ++probe) {
      std::mt19937_64 start_rng(mix_seed(cfg.seed, 0xF11, set, probe));
      Spins start = perturb(target, cfg.initial_distance, start_rng);

      NetworkConfig nc = cfg.net;
      nc.rng_seed = mix_seed(cfg.seed, 0x0E7, set, probe);
      NetSim net(nc);
      std::vector<DeviceAddress> devs(cfg.neurons);
      for (std::size_t i = 0; i < cfg.neurons; ++i) {
        devs[i] = DeviceAddress(i + 1);
        net.add_device(devs[i], ResponderBehavior::NonValidating);
      }
      HopfieldDriverConfig dc = cfg.driver;
      dc.perm_seed = mix_seed(cfg.seed, 0xBE2, set, probe);
      HopfieldDriver driver(j, start, net, devs, dc);

      Spins par = start;
      res.mean_distance_async[0] += hamming_distance(start, target);
      res.mean_distance_parallel[0] += hamming_distance(par, target);
      for (std::size_t step = 1; step <= cfg.steps; ++step) {
        driver.async_step();
        par = parallel_update_oracle(par, j);
        res.mean_distance_async[step] += hamming_distance(driver.state(), target);
        res.mean_distance_parallel[step] += hamming_distance(par, target);
      }
      ++runs;

      const HopfieldDriverStats& ds = driver.stats();
      res.metrics.messages_sent += ds.messages_sent;
      res.metrics.replies_received += ds.replies_seen;
      res.metrics.retries += ds.reissues;
      res.metrics.neuron_updates += ds.applied;
      res.metrics.elapsed_sim_ms += net.now_ms();
    }
  }

  for (std::size_t step = 0; step <= cfg.steps; ++step) {
    res.mean_distance_async[step] /= double(runs);
    res.mean_distance_parallel[step] /= double(runs);
  }
  res.metrics.coupling_updates = res.metrics.neuron_updates * (cfg.neurons - 1);
  res.metrics.elapsed_wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                wall_start)
          .count();
  finalize_rates(res.metrics);

  if (!cfg.csv_path.empty()) {
    std::ofstream out(cfg.csv_path);
    if (!out) throw IoError("run_recall_experiment: cannot write " + cfg.csv_path);
    out << "step,mean_distance_async,mean_distance_parallel\n";
    for (std::size_t step = 0; step <= cfg.steps; ++step)
      out << step << ',' << res.mean_distance_async[step] << ','
          << res.mean_distance_parallel[step] << '\n';
  }
  return res;
}

}  // namespace ec
