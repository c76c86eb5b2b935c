#include "core/daemon.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <system_error>
#include <vector>

namespace ec {

DaemonServer::DaemonServer(const DaemonConfig& cfg) : cfg_(cfg) {
  if (cfg_.mix_validating + cfg_.mix_nonvalidating == 0) cfg_.mix_validating = 1;

  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0)
    throw std::system_error(errno, std::generic_category(), "daemon: socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(cfg_.port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    int e = errno;
    ::close(fd_);
    throw std::system_error(e, std::generic_category(), "daemon: bind");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  // Receive timeout so stop() is honored promptly even when idle.
  timeval tv{0, 100000};
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));

  thread_ = std::thread([this] { run_loop(); });
}

DaemonServer::~DaemonServer() { stop(); }

void DaemonServer::stop() {
  bool expected = false;
  if (!stopping_.compare_exchange_strong(expected, true)) {
    if (thread_.joinable()) thread_.join();
    return;
  }
  if (thread_.joinable()) thread_.join();
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

ResponderBehavior DaemonServer::behavior_for(std::uint64_t address) const {
  auto it = cfg_.behaviors.find(address);
  if (it != cfg_.behaviors.end()) return it->second;
  std::uint64_t span = cfg_.mix_validating + cfg_.mix_nonvalidating;
  return (address % span) < cfg_.mix_validating ? ResponderBehavior::Validating
                                                : ResponderBehavior::NonValidating;
}

void DaemonServer::run_loop() {
  std::vector<std::uint8_t> buf(65536);
  while (!stopping_.load()) {
    sockaddr_in peer{};
    socklen_t peer_len = sizeof(peer);
    ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0,
                           reinterpret_cast<sockaddr*>(&peer), &peer_len);
    if (n < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
      break;  // socket is gone; shut down
    }
    ++received_;
    if (n < 8) continue;  // no address prefix, drop
    std::uint64_t address = 0;
    for (int i = 0; i < 8; ++i) address = (address << 8) | buf[std::size_t(i)];
    auto reply = handle_datagram({buf.data() + 8, std::size_t(n) - 8},
                                 behavior_for(address));
    if (!reply) continue;
    std::vector<std::uint8_t> out(buf.begin(), buf.begin() + 8);
    out.insert(out.end(), reply->begin(), reply->end());
    if (::sendto(fd_, out.data(), out.size(), 0, reinterpret_cast<sockaddr*>(&peer),
                 peer_len) == ssize_t(out.size()))
      ++sent_;
  }
}

}  // namespace ec
