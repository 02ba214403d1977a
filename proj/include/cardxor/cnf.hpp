#ifndef CARDXOR_CNF_HPP
#define CARDXOR_CNF_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace cardxor {

using Lit = int;
using Clause = std::vector<Lit>;

/// XOR of the listed variables equals parity. Variables are positive.
struct XorClause {
  std::vector<int> vars;
  bool parity = false;

  friend bool operator==(const XorClause&, const XorClause&) = default;
};

/// Clauses over variables 1..num_vars; the originals 1..n come first.
struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<XorClause> xor_clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Hands out fresh variables strictly above the ones already in use.
class VarPool {
 public:
  explicit VarPool(int last_used) : last_(last_used) {}
  int fresh() noexcept { return ++last_; }
  int last() const noexcept { return last_; }

 private:
  int last_;
};

/// `p cnf V C` (C counts CNF and XOR lines), clauses, then XOR clauses as
/// `x l1 .. lw 0`, where the XOR of the literals is true; a negated first
/// literal encodes parity 0. An empty XOR with parity 1 is written as the
/// empty clause `0`; an empty XOR with parity 0 is dropped.
void write_dimacs(const CnfFormula& cnf, std::ostream& out);

/// Reads the same dialect; `c` comment lines are skipped. Throws ParseError.
CnfFormula read_dimacs(std::istream& in);

}  // namespace cardxor

#endif  // CARDXOR_CNF_HPP
