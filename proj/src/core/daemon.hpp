#pragma once

// Loopback UDP stand-in for real remote devices. Each datagram is an 8-byte
// big-endian virtual device address followed by raw echo message bytes; the
// daemon runs the same responder logic as the simulator and sends the reply
// back with the same address prefix. Lets the full client stack run against
// an actual socket without needing raw-ICMP privileges.

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <thread>

#include "core/responder.hpp"

namespace ec {

struct DaemonConfig {
  std::uint16_t port = 0;  // 0 = pick an ephemeral port; see port()
  std::map<std::uint64_t, ResponderBehavior> behaviors;  // explicit per-address
  // Fallback for unlisted addresses: address % (v+nv) < v => Validating.
  std::uint32_t mix_validating = 1;
  std::uint32_t mix_nonvalidating = 0;
};

class DaemonServer {
 public:
  explicit DaemonServer(const DaemonConfig& cfg);  // binds and starts the thread
  ~DaemonServer();

  DaemonServer(const DaemonServer&) = delete;
  DaemonServer& operator=(const DaemonServer&) = delete;

  std::uint16_t port() const { return port_; }
  std::uint64_t datagrams_received() const { return received_.load(); }
  std::uint64_t replies_sent() const { return sent_.load(); }
  void stop();  // idempotent; joins the service thread

 private:
  void run_loop();
  ResponderBehavior behavior_for(std::uint64_t address) const;

  DaemonConfig cfg_;
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> received_{0};
  std::atomic<std::uint64_t> sent_{0};
  std::thread thread_;
};

}  // namespace ec
