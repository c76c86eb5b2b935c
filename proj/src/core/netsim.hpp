#pragma once

// Discrete-event simulation of an unreliable transport between one client and
// a set of echo-answering devices. Requests and replies each traverse one leg
// that can drop, corrupt (single random bit flip) and delay the datagram;
// request legs can additionally be duplicated. Everything is driven by a single
// seeded RNG and a (due_time, sequence) ordered event heap, so a given seed and
// send sequence always produces the identical delivery trace, regardless of
// how advance_clock calls are sliced.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <random>
#include <vector>

#include "core/responder.hpp"

namespace ec {

using DeviceAddress = std::uint64_t;

struct LatencyModel {
  // Round-trip median in milliseconds and lognormal shape (sigma). Each leg is
  // drawn lognormal with median median_ms/2, so shape 0 gives a deterministic
  // round trip of exactly median_ms. median_ms <= 0 means instant delivery.
  double median_ms = 50.0;
  double shape = 0.5;
};

struct NetworkConfig {
  double drop_probability = 0.01;        // per leg, each direction independent
  double duplicate_probability = 0.001;  // request leg only (a dup'd request
                                         // yields up to two replies, never four)
  double corruption_probability = 1.0 / 1024.0;  // per transmitted copy; flips
                                                 // one uniformly chosen bit
  std::uint32_t reorder_window = 0;      // max positions a reply can be displaced
  LatencyModel latency;                  // default; devices can override
  std::uint64_t rng_seed = 1;
};

struct Reply {
  DeviceAddress address = 0;
  double due_ms = 0.0;  // simulated arrival time, usable for RTT measurement
  std::vector<std::uint8_t> payload;
};

struct NetStats {
  std::uint64_t requests_sent = 0;       // send_request calls
  std::uint64_t request_copies = 0;      // after duplication
  std::uint64_t delivered_to_device = 0;
  std::uint64_t dropped_to_device = 0;
  std::uint64_t replies_generated = 0;   // device actually answered
  std::uint64_t replies_delivered = 0;
  std::uint64_t dropped_to_client = 0;
  std::uint64_t corrupted_copies = 0;
};

class NetSim {
 public:
  explicit NetSim(NetworkConfig cfg);

  void add_device(DeviceAddress address, ResponderBehavior behavior,
                  std::optional<LatencyModel> latency = std::nullopt);
  bool has_device(DeviceAddress address) const;
  std::size_t device_count() const { return devices_.size(); }

  // Injects a request datagram addressed to a known device; throws
  // std::out_of_range for an unknown address. The datagram is copied.
  void send_request(DeviceAddress address, std::span<const std::uint8_t> bytes);

  // Moves simulated time forward, processing device arrivals (which may queue
  // replies) and reply arrivals in (due_time, insertion sequence) order.
  // Negative delta throws std::invalid_argument.
  void advance_clock(double delta_ms);
  double now_ms() const { return clock_ms_; }
  std::size_t events_pending() const { return events_.size(); }

  // Hands over every reply that has arrived (due <= now_ms), in arrival order
  // shuffled by at most reorder_window positions. Does not advance the clock:
  // replies scheduled beyond the current clock stay queued.
  std::vector<Reply> poll_replies(double now_ms);

  const NetStats& stats() const { return stats_; }

 private:
  struct Device {
    ResponderBehavior behavior;
    LatencyModel latency;
  };
  struct Event {
    double due;
    std::uint64_t seq;
    DeviceAddress address;
    bool to_device;
    std::vector<std::uint8_t> payload;
  };
  struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
      if (a.due != b.due) return a.due > b.due;
      return a.seq > b.seq;
    }
  };
  struct Arrival {
    std::uint64_t sort_key;
    std::uint64_t index;
    double due;
    DeviceAddress address;
    std::vector<std::uint8_t> payload;
  };

  bool chance(double p);
  double leg_delay(const LatencyModel& m);
  void corrupt_in_place(std::vector<std::uint8_t>& bytes);
  void schedule(double due, DeviceAddress address, bool to_device,
                std::vector<std::uint8_t> payload);
  void deliver_to_device(const Event& ev);
  void deliver_to_client(Event&& ev);

  NetworkConfig cfg_;
  std::map<DeviceAddress, Device> devices_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> norm_{0.0, 1.0};
  std::priority_queue<Event, std::vector<Event>, EventLater> events_;
  std::vector<Arrival> arrivals_;
  double clock_ms_ = 0.0;
  std::uint64_t next_event_seq_ = 0;
  std::uint64_t next_arrival_index_ = 0;
  NetStats stats_;
};

}  // namespace ec
