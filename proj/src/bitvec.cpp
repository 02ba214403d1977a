#include "cardxor/bitvec.hpp"

#include "cardxor/error.hpp"

namespace cardxor {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::instance_too_large: return "instance-too-large";
    case ErrorCode::spawn_failure: return "spawn-failure";
    case ErrorCode::unparseable_output: return "unparseable-output";
    case ErrorCode::witness_verification: return "witness-verification";
    case ErrorCode::precondition_not_met: return "precondition-not-met";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

std::size_t BitVec::find_next(std::size_t from) const noexcept {
  if (from >= width_) return width_;
  std::size_t w = from / word_bits;
  word_type cur = words_[w] & (~word_type{0} << (from % word_bits));
  while (true) {
    if (cur != 0) return w * word_bits + static_cast<std::size_t>(std::countr_zero(cur));
    if (++w == words_.size()) return width_;
    cur = words_[w];
  }
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string BitVec::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  const std::size_t nibbles = (width_ + 3) / 4;
  std::string out(nibbles, '0');
  for (std::size_t i = 0; i < nibbles; ++i) {
    const std::size_t bit = 4 * i;
    const unsigned v = static_cast<unsigned>((words_[bit / word_bits] >> (bit % word_bits)) & 0xF);
    out[nibbles - 1 - i] = digits[v];
  }
  return out;
}

bool BitVec::from_hex(std::string_view hex, std::size_t width, BitVec& out) {
  const std::size_t nibbles = (width + 3) / 4;
  if (hex.size() != nibbles) return false;
  BitVec v(width);
  for (std::size_t i = 0; i < nibbles; ++i) {
    const int d = hex_value(hex[nibbles - 1 - i]);
    if (d < 0) return false;
    for (std::size_t b = 0; b < 4; ++b) {
      if (!((d >> b) & 1)) continue;
      const std::size_t bit = 4 * i + b;
      if (bit >= width) return false;
      v.set(bit);
    }
  }
  out = std::move(v);
  return true;
}

std::string BitVec::to_bits() const {
  std::string out(width_, '0');
  for (std::size_t i = 0; i < width_; ++i)
    if (get(i)) out[i] = '1';
  return out;
}

bool BitVec::from_bits(std::string_view bits, BitVec& out) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i);
    else if (bits[i] != '0')
      return false;
  }
  out = std::move(v);
  return true;
}

}  // namespace cardxor
