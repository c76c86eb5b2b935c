#include "core/life.hpp"

#include <chrono>
#include <fstream>
#include <random>

#include "core/errors.hpp"
#include "core/seeds.hpp"

namespace ec {

std::array<std::uint8_t, 8> LifeGrid::neighborhood(std::size_t row, std::size_t col) const {
  static constexpr int kOff[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                     {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  auto wrap = [](std::size_t v, int d, std::size_t m) {
    long long x = (static_cast<long long>(v) + d + static_cast<long long>(m)) %
                  static_cast<long long>(m);
    return std::size_t(x);
  };
  std::array<std::uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i)
    out[std::size_t(i)] = at(wrap(row, kOff[i][0], height), wrap(col, kOff[i][1], width));
  return out;
}

int LifeGrid::neighbor_sum(std::size_t row, std::size_t col) const {
  int s = 0;
  for (std::uint8_t v : neighborhood(row, col)) s += v;
  return s;
}

int rule_oracle(int neighbor_sum, int current) {
  if (neighbor_sum < 0 || neighbor_sum > 8)
    throw std::invalid_argument("rule_oracle: neighbor sum out of [0,8]");
  if (current != 0 && current != 1)
    throw std::invalid_argument("rule_oracle: cell state must be 0 or 1");
  if (neighbor_sum == 3) return 1;
  if (neighbor_sum == 2) return current;
  return 0;
}

LifeGrid step_oracle(const LifeGrid& g) {
  LifeGrid next(g.width, g.height);
  next.generation = g.generation + 1;
  for (std::size_t r = 0; r < g.height; ++r)
    for (std::size_t c = 0; c < g.width; ++c)
      next.set(r, c, std::uint8_t(rule_oracle(g.neighbor_sum(r, c), g.at(r, c))));
  return next;
}

EchoMessage encode_cell_probe(std::uint64_t t, const std::array<std::uint8_t, 8>& neighbors,
                              int k) {
  if (k < 0 || k > 8) throw std::invalid_argument("encode_cell_probe: k out of [0,8]");
  for (std::uint8_t v : neighbors)
    if (v != 0 && v != 1)
      throw std::invalid_argument("encode_cell_probe: neighbor states must be 0/1");
  EchoMessage m;
  m.type = kEchoRequestType;
  // The fold of everything except the neighbor words and -k is forced to -0:
  // checksum = -0 (value 0), identifier t balanced by its complement in the
  // sequence field, the first data word balancing the type/code word. What
  // remains is s - k, so the device's checksum test accepts iff s == k.
  m.checksum = kMinusZero;
  m.identifier = OcWord(t % 32768);
  m.sequence = oc_negate(m.identifier);
  m.data.reserve(10);
  m.data.push_back(oc_negate(m.first_word()));
  for (std::uint8_t v : neighbors) m.data.push_back(OcWord(v));
  m.data.push_back(oc_from_int(-k));
  return m;
}

LifeDriver::LifeDriver(LifeGrid initial, CellAssignment assignment, NetSim& net,
                       LifeProtocolConfig cfg)
    : grid_(std::move(initial)), assignment_(std::move(assignment)), net_(net), cfg_(cfg) {
  if (grid_.width != assignment_.width || grid_.height != assignment_.height)
    throw std::invalid_argument("LifeDriver: grid and assignment dimensions differ");
  if (cfg_.attempts < 1)
    throw std::invalid_argument("LifeDriver: need at least one probe attempt");
  for (std::size_t i = 0; i < assignment_.by_cell.size(); ++i) {
    if (!net_.has_device(assignment_.by_cell[i]))
      throw std::invalid_argument("LifeDriver: assigned device not registered");
    if (!cell_of_.emplace(assignment_.by_cell[i], i).second)
      throw std::invalid_argument("LifeDriver: assignment reuses a device");
  }
}

void LifeDriver::send_probes(const std::vector<std::size_t>& cells, bool retry_round) {
  std::uint64_t t = grid_.generation;
  for (std::size_t c : cells) {
    for (int k : {3, 2}) {
      EchoMessage m = encode_cell_probe(t, nbrs_[c], k);
      net_.send_request(assignment_.by_cell[c], encode(m));
      ++step_stats_.messages_sent;
      if (retry_round) ++step_stats_.retry_messages;
      net_.advance_clock(cfg_.send_interval_ms);
    }
  }
}

void LifeDriver::collect(OcWord id) {
  for (const Reply& r : net_.poll_replies(net_.now_ms())) {
    auto it = cell_of_.find(r.address);
    if (it == cell_of_.end()) continue;
    std::size_t c = it->second;
    DecodeResult dr = decode(r.payload);
    bool ok = bool(dr) && dr.message.type == kEchoReplyType && validate(dr.message) &&
              dr.message.identifier == id && dr.message.sequence == oc_negate(id) &&
              dr.message.data.size() == 10 &&
              dr.message.data[0] == oc_negate(OcWord(kEchoRequestType) << 8);
    if (ok)
      for (int i = 0; i < 8; ++i)
        if (dr.message.data[std::size_t(i) + 1] != OcWord(nbrs_[c][std::size_t(i)]))
          ok = false;
    int k = 0;
    if (ok) {
      if (dr.message.data[9] == oc_from_int(-3))
        k = 3;
      else if (dr.message.data[9] == oc_from_int(-2))
        k = 2;
      else
        ok = false;
    }
    if (!ok) {
      ++step_stats_.rejected_replies;
      continue;
    }
    ++step_stats_.replies_accepted;
    (k == 3 ? got3_ : got2_)[c] = 1;
  }
}

void LifeDriver::update_step() {
  step_stats_ = LifeStepStats{};
  std::size_t n = grid_.width * grid_.height;
  OcWord id = OcWord(grid_.generation % 32768);

  // Snapshot every neighborhood before anything is sent: all probes of this
  // generation describe the same synchronous state.
  nbrs_.resize(n);
  for (std::size_t r = 0; r < grid_.height; ++r)
    for (std::size_t c = 0; c < grid_.width; ++c)
      nbrs_[r * grid_.width + c] = grid_.neighborhood(r, c);
  got2_.assign(n, 0);
  got3_.assign(n, 0);

  std::vector<std::size_t> pending(n);
  for (std::size_t i = 0; i < n; ++i) pending[i] = i;
  for (int attempt = 0; attempt < cfg_.attempts && !pending.empty(); ++attempt) {
    send_probes(pending, attempt > 0);
    net_.advance_clock(cfg_.round_timeout_ms);
    collect(id);
    std::vector<std::size_t> silent;
    for (std::size_t c : pending)
      if (!got2_[c] && !got3_[c]) silent.push_back(c);
    pending = std::move(silent);
  }

  // Contradictory evidence (both predicates "true") is physically impossible,
  // so at least one reply was a corruption artifact: wipe the cell's flags and
  // probe again. A cell that stays silent through re-probing reads as dead,
  // the same as anywhere else in the protocol.
  std::vector<std::size_t> suspect;
  for (std::size_t c = 0; c < n; ++c)
    if (got2_[c] && got3_[c]) suspect.push_back(c);
  step_stats_.conflict_cells += suspect.size();
  for (int round = 0; round < cfg_.conflict_rounds && !suspect.empty(); ++round) {
    for (std::size_t c : suspect) got2_[c] = got3_[c] = 0;
    send_probes(suspect, true);
    net_.advance_clock(cfg_.round_timeout_ms);
    collect(id);
    std::vector<std::size_t> still;
    for (std::size_t c : suspect)
      if (got2_[c] == got3_[c]) still.push_back(c);  // conflicted again or silent
    suspect = std::move(still);
  }
  for (std::size_t c = 0; c < n; ++c)
    if (got2_[c] && got3_[c])
      throw PersistentConflictError(
          "life: cell " + std::to_string(c) + " still has contradictory replies at generation " +
          std::to_string(grid_.generation));

  std::vector<std::uint8_t> next(n);
  for (std::size_t c = 0; c < n; ++c)
    next[c] = got3_[c] ? 1 : (got2_[c] ? grid_.cells[c] : 0);
  grid_.cells = std::move(next);
  ++grid_.generation;

  total_stats_.messages_sent += step_stats_.messages_sent;
  total_stats_.replies_accepted += step_stats_.replies_accepted;
  total_stats_.retry_messages += step_stats_.retry_messages;
  total_stats_.rejected_replies += step_stats_.rejected_replies;
  total_stats_.conflict_cells += step_stats_.conflict_cells;
}

LifeGrid make_glider_grid() {
  LifeGrid g(4, 4);
  g.set(0, 1, 1);
  g.set(1, 2, 1);
  g.set(2, 0, 1);
  g.set(2, 1, 1);
  g.set(2, 2, 1);
  return g;
}

namespace {

struct RunLoop {
  // Shared generation loop for both life experiments.
  static LifeRunReport run(LifeDriver& driver, LifeGrid control, NetSim& net,
                           std::uint64_t generations, const std::string& csv_path) {
    auto wall_start = std::chrono::steady_clock::now();
    LifeRunReport rep;
    std::ofstream csv;
    if (!csv_path.empty()) {
      csv.open(csv_path);
      if (!csv) throw IoError("life: cannot write " + csv_path);
      csv << "generation,messages_sent,replies,retries,deviations\n";
    }
    for (std::uint64_t gen = 1; gen <= generations; ++gen) {
      driver.update_step();
      control = step_oracle(control);
      std::uint64_t dev = 0;
      for (std::size_t i = 0; i < control.cells.size(); ++i)
        if (driver.grid().cells[i] != control.cells[i]) ++dev;
      const LifeStepStats& st = driver.step_stats();
      if (csv.is_open())
        csv << gen << ',' << st.messages_sent << ',' << st.replies_accepted << ','
            << st.retry_messages << ',' << dev << '\n';
      rep.metrics.neuron_updates += control.cells.size();  // applied cell updates
      if (dev > 0) {
        rep.first_deviation_generation = std::int64_t(gen);
        rep.deviating_cells = dev;
        rep.generations_completed = gen;
        break;  // the trajectories have split; further comparison is noise
      }
      rep.generations_completed = gen;
    }
    const LifeStepStats& tot = driver.total_stats();
    rep.metrics.messages_sent = tot.messages_sent;
    rep.metrics.replies_received = tot.replies_accepted;
    rep.metrics.retries = tot.retry_messages;
    rep.metrics.elapsed_sim_ms = net.now_ms();
    rep.metrics.elapsed_wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  wall_start)
            .count();
    finalize_rates(rep.metrics);
    return rep;
  }
};

}  // namespace

LifeRunReport run_glider_experiment(const GliderConfig& cfg) {
  NetSim net(cfg.net);
  CellAssignment assignment;
  assignment.width = 4;
  assignment.height = 4;
  for (std::size_t i = 0; i < 16; ++i) {
    DeviceAddress a = DeviceAddress(i + 1);
    net.add_device(a, ResponderBehavior::Validating);
    assignment.by_cell.push_back(a);
  }
  LifeGrid start = make_glider_grid();
  LifeDriver driver(start, assignment, net, cfg.protocol);
  return RunLoop::run(driver, start, net, cfg.generations, cfg.csv_path);
}

LifeRunReport run_large_life_experiment(const LargeLifeConfig& cfg) {
  NetworkConfig nc = cfg.net;
  nc.rng_seed = mix_seed(cfg.seed, 0x11FE);
  NetSim net(nc);

  std::vector<DeviceProfile> pool = make_random_pool(cfg.pool);
  register_pool(net, pool);
  measure_response_times(pool, net, cfg.probes_per_device, cfg.measure_timeout_ms);
  std::uint64_t measurement_messages = net.stats().requests_sent;

  std::vector<DeviceProfile> ordered = filter_and_order(pool);
  CellAssignment assignment = assign_to_cells(ordered, cfg.width, cfg.height);

  LifeGrid start(cfg.width, cfg.height);
  std::mt19937_64 grid_rng(mix_seed(cfg.seed, 0x62D));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& cell : start.cells) cell = u(grid_rng) < cfg.fill ? 1 : 0;

  LifeDriver driver(start, assignment, net, cfg.protocol);
  LifeRunReport rep = RunLoop::run(driver, start, net, cfg.generations, cfg.csv_path);
  rep.measurement_messages = measurement_messages;
  return rep;
}

}  // namespace ec
