#include "core/echo_codec.hpp"

#include <stdexcept>

namespace ec {

const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::Ok: return "Ok";
    case DecodeError::MessageTooShort: return "MessageTooShort";
    case DecodeError::OddLength: return "OddLength";
    case DecodeError::UnsupportedType: return "UnsupportedType";
  }
  return "?";
}

std::vector<OcWord> message_words(const EchoMessage& m) {
  std::vector<OcWord> words;
  words.reserve(m.word_count());
  words.push_back(m.first_word());
  words.push_back(m.checksum);
  words.push_back(m.identifier);
  words.push_back(m.sequence);
  words.insert(words.end(), m.data.begin(), m.data.end());
  return words;
}

OcWord compute_checksum(const EchoMessage& m) {
  std::uint64_t acc = std::uint64_t(m.first_word()) + m.identifier + m.sequence;
  for (OcWord w : m.data) acc += w;
  while (acc >> 16) acc = (acc & 0xFFFFu) + (acc >> 16);
  return oc_negate(OcWord(acc));
}

bool validate(const EchoMessage& m) {
  std::uint64_t acc = std::uint64_t(m.first_word()) + m.checksum + m.identifier + m.sequence;
  for (OcWord w : m.data) acc += w;
  while (acc >> 16) acc = (acc & 0xFFFFu) + (acc >> 16);
  return OcWord(acc) == kMinusZero;
}

std::vector<std::uint8_t> encode(const EchoMessage& m) {
  std::vector<std::uint8_t> out;
  out.reserve(2 * m.word_count());
  for (OcWord w : message_words(m)) {
    out.push_back(std::uint8_t(w >> 8));
    out.push_back(std::uint8_t(w & 0xFF));
  }
  return out;
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  DecodeResult r;
  if (bytes.size() < 8) {
    r.error = DecodeError::MessageTooShort;
    return r;
  }
  if (bytes.size() % 2 != 0) {
    r.error = DecodeError::OddLength;
    return r;
  }
  r.message.type = bytes[0];
  r.message.code = bytes[1];
  if ((r.message.type != kEchoRequestType && r.message.type != kEchoReplyType) ||
      r.message.code != 0) {
    r.error = DecodeError::UnsupportedType;
    return r;
  }
  auto word_at = [&](std::size_t i) {
    return OcWord((std::uint16_t(bytes[2 * i]) << 8) | bytes[2 * i + 1]);
  };
  r.message.checksum = word_at(1);
  r.message.identifier = word_at(2);
  r.message.sequence = word_at(3);
  std::size_t nwords = bytes.size() / 2;
  r.message.data.reserve(nwords - 4);
  for (std::size_t i = 4; i < nwords; ++i) r.message.data.push_back(word_at(i));
  return r;
}

EchoMessage make_reply(const EchoMessage& m) {
  if (m.type != kEchoRequestType)
    throw std::invalid_argument("make_reply: message is not an echo request");
  EchoMessage reply = m;
  reply.type = kEchoReplyType;
  reply.checksum = compute_checksum(reply);
  return reply;
}

}  // namespace ec
