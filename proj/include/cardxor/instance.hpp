#ifndef CARDXOR_INSTANCE_HPP
#define CARDXOR_INSTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "cardxor/bitvec.hpp"
#include "cardxor/gf2.hpp"

namespace cardxor {

/// At most k of x_1..x_n are true.
struct CardConstraint {
  std::size_t n = 0;
  std::size_t k = 0;

  friend bool operator==(const CardConstraint&, const CardConstraint&) = default;
};

using XorSystem = gf2::System;

/// One cardinality constraint conjoined with a system of XOR constraints.
struct CardXorInstance {
  XorSystem xors;
  CardConstraint card;
  std::uint64_t seed = 0;
  double s = 0.0;  // declared density; m = ceil(s n) when generated

  std::size_t n() const noexcept { return card.n; }
  std::size_t k() const noexcept { return card.k; }
  std::size_t m() const noexcept { return xors.m(); }

  friend bool operator==(const CardXorInstance&, const CardXorInstance&) = default;
};

struct GenConfig {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t trial = 0;

  /// m = ceil(s n), robust to s having been computed as m'/n in floating point.
  static std::size_t rows_for_density(std::size_t n, double s);
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Per-instance stream seed: a pure function of the tuple.
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t n, std::size_t k,
                          std::size_t m, std::uint64_t trial) noexcept;

/// Every matrix entry and rhs bit is an independent fair coin.
/// Throws Error(invalid_config) if n < 1 or k > n.
CardXorInstance generate(const GenConfig& cfg);

/// Assignment satisfies every XOR row and has weight <= k.
bool is_witness(const CardXorInstance& inst, const BitVec& x);

// Native text format:
//   cardxor <n> <m> <k> <s> <seed>
//   <hex row> <rhs bit>      (m lines)
void write_native(const CardXorInstance& inst, std::ostream& out);
/// Throws ParseError with the offending line number.
CardXorInstance read_native(std::istream& in);

CardXorInstance load_native(const std::string& path);
void save_native(const CardXorInstance& inst, const std::string& path);

}  // namespace cardxor

#endif  // CARDXOR_INSTANCE_HPP
