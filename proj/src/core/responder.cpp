#include "core/responder.hpp"

#include "core/echo_codec.hpp"

namespace ec {

std::optional<std::vector<std::uint8_t>> handle_datagram(
    std::span<const std::uint8_t> bytes, ResponderBehavior behavior) {
  DecodeResult r = decode(bytes);
  if (!r) return std::nullopt;
  if (r.message.type != kEchoRequestType) return std::nullopt;
  if (behavior == ResponderBehavior::Validating && !validate(r.message))
    return std::nullopt;
  return encode(make_reply(r.message));
}

}  // namespace ec
