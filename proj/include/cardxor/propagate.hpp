#ifndef CARDXOR_PROPAGATE_HPP
#define CARDXOR_PROPAGATE_HPP

#include <map>
#include <span>

#include "cardxor/cnf.hpp"

namespace cardxor {

struct PropagationResult {
  enum class Status { ok, conflict };
  Status status = Status::ok;
  /// Every variable fixed by the assumptions or derived from them,
  /// including the assumptions themselves.
  std::map<int, bool> forced;

  bool conflict() const noexcept { return status == Status::conflict; }
  /// 1 true, 0 false, -1 unassigned.
  int value(int var) const;
};

/// Fixed point of the unit-clause rule over cnf.clauses (no repeated
/// literals within a clause); XOR clauses are ignored. Contradictory
/// assumptions, an empty clause, or a falsified clause yield a conflict. On
/// conflict `forced` holds the assignment reached.
PropagationResult unit_propagate(const CnfFormula& cnf, std::span<const Lit> assumptions);

}  // namespace cardxor

#endif  // CARDXOR_PROPAGATE_HPP
