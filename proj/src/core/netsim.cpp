#include "core/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ec {

NetSim::NetSim(NetworkConfig cfg) : cfg_(cfg), rng_(cfg.rng_seed) {}

void NetSim::add_device(DeviceAddress address, ResponderBehavior behavior,
                        std::optional<LatencyModel> latency) {
  devices_[address] = Device{behavior, latency.value_or(cfg_.latency)};
}

bool NetSim::has_device(DeviceAddress address) const {
  return devices_.count(address) != 0;
}

// One uniform draw per decision point, independent of the probability, so the
// RNG consumption pattern per packet is fixed and traces stay reproducible.
bool NetSim::chance(double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
}

double NetSim::leg_delay(const LatencyModel& m) {
  if (m.median_ms <= 0.0) return 0.0;  // instant, consumes no randomness
  double z = norm_(rng_);
  return std::exp(std::log(m.median_ms / 2.0) + m.shape * z);
}

void NetSim::corrupt_in_place(std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) return;
  std::uniform_int_distribution<std::size_t> pick(0, bytes.size() * 8 - 1);
  std::size_t bit = pick(rng_);
  bytes[bit / 8] ^= std::uint8_t(1u << (7 - bit % 8));
  ++stats_.corrupted_copies;
}

void NetSim::schedule(double due, DeviceAddress address, bool to_device,
                      std::vector<std::uint8_t> payload) {
  events_.push(Event{due, next_event_seq_++, address, to_device, std::move(payload)});
}

void NetSim::send_request(DeviceAddress address, std::span<const std::uint8_t> bytes) {
  auto it = devices_.find(address);
  if (it == devices_.end())
    throw std::out_of_range("NetSim::send_request: unknown device address");
  ++stats_.requests_sent;

  // Draw order per request: duplication, then per copy drop / corruption /
  // latency. Each copy's fate is independent.
  int copies = chance(cfg_.duplicate_probability) ? 2 : 1;
  for (int c = 0; c < copies; ++c) {
    ++stats_.request_copies;
    if (chance(cfg_.drop_probability)) {
      ++stats_.dropped_to_device;
      chance(cfg_.corruption_probability);  // keep per-copy draw count uniform
      leg_delay(it->second.latency);
      continue;
    }
    std::vector<std::uint8_t> copy(bytes.begin(), bytes.end());
    if (chance(cfg_.corruption_probability)) corrupt_in_place(copy);
    schedule(clock_ms_ + leg_delay(it->second.latency), address, true, std::move(copy));
  }
}

void NetSim::deliver_to_device(const Event& ev) {
  ++stats_.delivered_to_device;
  const Device& dev = devices_.at(ev.address);
  auto reply = handle_datagram(ev.payload, dev.behavior);
  if (!reply) return;
  ++stats_.replies_generated;
  if (chance(cfg_.drop_probability)) {
    ++stats_.dropped_to_client;
    chance(cfg_.corruption_probability);
    leg_delay(dev.latency);
    return;
  }
  std::vector<std::uint8_t> bytes = std::move(*reply);
  if (chance(cfg_.corruption_probability)) corrupt_in_place(bytes);
  schedule(ev.due + leg_delay(dev.latency), ev.address, false, std::move(bytes));
}

void NetSim::deliver_to_client(Event&& ev) {
  ++stats_.replies_delivered;
  std::uint64_t index = next_arrival_index_++;
  std::uint64_t key = index;
  if (cfg_.reorder_window > 0)
    key += std::uniform_int_distribution<std::uint64_t>(0, cfg_.reorder_window)(rng_);
  arrivals_.push_back(Arrival{key, index, ev.due, ev.address, std::move(ev.payload)});
}

void NetSim::advance_clock(double delta_ms) {
  if (delta_ms < 0.0)
    throw std::invalid_argument("NetSim::advance_clock: negative delta");
  double target = clock_ms_ + delta_ms;
  while (!events_.empty() && events_.top().due <= target) {
    Event ev = events_.top();
    events_.pop();
    clock_ms_ = ev.due;
    if (ev.to_device)
      deliver_to_device(ev);
    else
      deliver_to_client(std::move(ev));
  }
  clock_ms_ = target;
}

std::vector<Reply> NetSim::poll_replies(double now_ms) {
  std::vector<Arrival> taken;
  std::vector<Arrival> kept;
  for (auto& a : arrivals_) {
    if (a.due <= now_ms)
      taken.push_back(std::move(a));
    else
      kept.push_back(std::move(a));
  }
  arrivals_ = std::move(kept);
  // sort_key = arrival index + U{0..reorder_window}, so no reply is displaced
  // more than reorder_window positions from its true arrival order.
  std::sort(taken.begin(), taken.end(), [](const Arrival& a, const Arrival& b) {
    if (a.sort_key != b.sort_key) return a.sort_key < b.sort_key;
    return a.index < b.index;
  });
  std::vector<Reply> out;
  out.reserve(taken.size());
  for (auto& a : taken)
    out.push_back(Reply{a.address, a.due, std::move(a.payload)});
  return out;
}

}  // namespace ec
