#pragma once

// ICMP Echo Request/Reply datagrams as sequences of 16-bit big-endian words:
//
//   word 1: type (high byte) | code (low byte)    type 8 = request, 0 = reply
//   word 2: checksum
//   word 3: identifier
//   word 4: sequence number
//   word 5...: payload data words
//
// The checksum convention is the standard one: the field carries the complement
// of the one's-complement fold of the whole message (checksum field read as +0
// while folding), so a receiver accepts iff the fold over all words including
// the checksum comes out -0 (0xFFFF).

#include <cstdint>
#include <span>
#include <vector>

#include "core/ocarith.hpp"

namespace ec {

inline constexpr std::uint8_t kEchoRequestType = 8;
inline constexpr std::uint8_t kEchoReplyType = 0;

struct EchoMessage {
  std::uint8_t type = kEchoRequestType;
  std::uint8_t code = 0;
  OcWord checksum = kPlusZero;
  OcWord identifier = kPlusZero;
  OcWord sequence = kPlusZero;
  std::vector<OcWord> data;

  OcWord first_word() const { return OcWord((std::uint16_t(type) << 8) | code); }
  std::size_t word_count() const { return 4 + data.size(); }

  bool operator==(const EchoMessage&) const = default;
};

enum class DecodeError {
  Ok = 0,
  MessageTooShort,   // fewer than the 8 header bytes
  OddLength,         // not a whole number of 16-bit words
  UnsupportedType,   // type not 0/8, or nonzero code
};

const char* decode_error_name(DecodeError e);

struct DecodeResult {
  EchoMessage message;
  DecodeError error = DecodeError::Ok;
  explicit operator bool() const { return error == DecodeError::Ok; }
};

// All words of the message in wire order, checksum field included as stored.
std::vector<OcWord> message_words(const EchoMessage& m);

// Value for the checksum field: complement of the fold with the field zeroed.
OcWord compute_checksum(const EchoMessage& m);

// Receiver-side test: fold over every word including the checksum equals -0.
bool validate(const EchoMessage& m);

std::vector<std::uint8_t> encode(const EchoMessage& m);
DecodeResult decode(std::span<const std::uint8_t> bytes);

// Build the reply a device sends back: type flipped to 0, checksum recomputed,
// identifier/sequence/data echoed untouched. Throws if m is not a request.
EchoMessage make_reply(const EchoMessage& m);

}  // namespace ec
