#ifndef CARDXOR_GF2_HPP
#define CARDXOR_GF2_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "cardxor/bitvec.hpp"

namespace cardxor::gf2 {

/// Linear system A x = b over GF(2). Every row has width n; rhs has one bit
/// per row.
struct System {
  std::size_t n = 0;
  std::vector<BitVec> rows;
  BitVec rhs;

  System() = default;
  /// Throws Error(invalid_config) when row widths or rhs length disagree.
  System(std::size_t n, std::vector<BitVec> rows, BitVec rhs);

  std::size_t m() const noexcept { return rows.size(); }

  friend bool operator==(const System&, const System&) = default;
};

/// Reduced row-echelon form of a System.
///
/// rows[0..rank) are the pivot rows, pivot_cols[i] being the pivot of row i;
/// every pivot column is zero in all other rows. rows[rank..m) are zero rows,
/// retained so that m is unchanged.
struct EchelonForm {
  std::size_t n = 0;
  std::vector<std::size_t> pivot_cols;
  std::vector<BitVec> rows;
  BitVec rhs;
  std::size_t rank = 0;
  bool consistent = true;

  std::vector<std::size_t> free_cols() const;
};

EchelonForm eliminate(const System& sys);

/// x0 with A x0 = b and every free column 0; nullopt iff inconsistent.
std::optional<BitVec> particular_solution(const EchelonForm& ef);

/// One kernel vector per free column f: bit f set, other free bits clear.
std::vector<BitVec> null_basis(const EchelonForm& ef);

/// A x as an m-bit vector.
BitVec multiply(const System& sys, const BitVec& x);
bool satisfies(const System& sys, const BitVec& x);

}  // namespace cardxor::gf2

#endif  // CARDXOR_GF2_HPP
