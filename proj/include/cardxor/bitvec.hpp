#ifndef CARDXOR_BITVEC_HPP
#define CARDXOR_BITVEC_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cardxor {

/// Fixed-width vector over GF(2), packed into 64-bit words.
///
/// Bit i lives in word i / 64 at position i % 64, so column 0 is the lowest
/// bit of word 0. Bits past width() in the last word are always zero, which
/// keeps equality, popcount and hashing word-wise.
class BitVec {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  BitVec() = default;
  explicit BitVec(std::size_t width)
      : width_(width), words_(words_for(width), 0) {}

  static constexpr std::size_t words_for(std::size_t width) {
    return (width + word_bits - 1) / word_bits;
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return width_; }

  bool get(std::size_t i) const noexcept {
    return (words_[i / word_bits] >> (i % word_bits)) & 1u;
  }
  bool operator[](std::size_t i) const noexcept { return get(i); }

  void set(std::size_t i, bool value = true) noexcept {
    const word_type mask = word_type{1} << (i % word_bits);
    if (value)
      words_[i / word_bits] |= mask;
    else
      words_[i / word_bits] &= ~mask;
  }
  void reset(std::size_t i) noexcept { set(i, false); }
  void flip(std::size_t i) noexcept {
    words_[i / word_bits] ^= word_type{1} << (i % word_bits);
  }

  // Widths must match.
  BitVec& operator^=(const BitVec& other) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }
  BitVec& operator&=(const BitVec& other) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) noexcept { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) noexcept { return a &= b; }

  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (word_type w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const noexcept {
    for (word_type w : words_)
      if (w != 0) return true;
    return false;
  }
  bool none() const noexcept { return !any(); }

  /// Parity of popcount(*this & other).
  bool dot(const BitVec& other) const noexcept {
    word_type acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  /// Index of the lowest set bit at or after `from`, or width() if none.
  std::size_t find_next(std::size_t from) const noexcept;
  std::size_t find_first() const noexcept { return find_next(0); }

  std::span<const word_type> words() const noexcept { return words_; }

  /// Hex digits, most significant nibble first, exactly ceil(width/4) chars.
  std::string to_hex() const;
  /// Inverse of to_hex(); returns false on bad digits, wrong length, or set
  /// bits past `width`.
  static bool from_hex(std::string_view hex, std::size_t width, BitVec& out);

  /// '0'/'1' characters, bit 0 first.
  std::string to_bits() const;
  static bool from_bits(std::string_view bits, BitVec& out);

  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<word_type> words_;
};

}  // namespace cardxor

#endif  // CARDXOR_BITVEC_HPP
