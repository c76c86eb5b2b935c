#pragma once

// Device-side echo handling. Two behaviors exist in the wild and both are
// useful to us: hosts that verify the checksum and silently drop bad datagrams,
// and hosts that answer anything that parses. Only echo requests are answered;
// anything undecodable or non-request is dropped either way.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ec {

enum class ResponderBehavior {
  Validating,     // drop datagrams whose checksum does not verify
  NonValidating,  // reply regardless of the incoming checksum
};

// Returns the encoded reply datagram, or nothing if the device stays silent.
std::optional<std::vector<std::uint8_t>> handle_datagram(
    std::span<const std::uint8_t> bytes, ResponderBehavior behavior);

}  // namespace ec
