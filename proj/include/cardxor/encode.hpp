#ifndef CARDXOR_ENCODE_HPP
#define CARDXOR_ENCODE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "cardxor/cnf.hpp"
#include "cardxor/instance.hpp"

namespace cardxor {

enum class CardEncoding {
  adder,    // binary adder tree + comparator, O(n) clauses, not arc-consistent
  bdd,      // sequential counter, O(n k) clauses, arc-consistent
  cardnet,  // cardinality network, O(n log^2 k) clauses, arc-consistent
};

enum class XorMode { native, blast };

struct EncodingChoice {
  CardEncoding encoding = CardEncoding::bdd;
  XorMode xor_mode = XorMode::native;
  int cut = 4;  // >= 3; widest XOR emitted when blasting
};

const char* to_string(CardEncoding e);
const char* to_string(XorMode m);
/// Throw Error(invalid_config) on unknown names.
CardEncoding parse_card_encoding(std::string_view name);
XorMode parse_xor_mode(std::string_view name);

/// Clauses over x_1..x_n plus auxiliaries drawn from `pool` that are
/// satisfiable, with some auxiliary extension, iff at most k originals are
/// true. k = n yields no clauses; k = 0 yields the units -x_i.
CnfFormula encode_card(const CardConstraint& card, CardEncoding encoding, VarPool& pool);

/// Appends CNF for XOR(vars) = parity to `out`, chaining through fresh link
/// variables so no piece is wider than `cut`. Each piece of width w becomes
/// its 2^(w-1) forbidden-parity clauses.
void blast_xor(const std::vector<int>& vars, bool parity, int cut, VarPool& pool,
               std::vector<Clause>& out);

/// Cardinality encoding conjoined with the XOR rows (variable j is column j-1).
CnfFormula encode_instance(const CardXorInstance& inst, const EncodingChoice& choice);

}  // namespace cardxor

#endif  // CARDXOR_ENCODE_HPP
