#include "cardxor/propagate.hpp"

#include <cstdlib>
#include <vector>

#include "cardxor/error.hpp"

namespace cardxor {

int PropagationResult::value(int var) const {
  auto it = forced.find(var);
  if (it == forced.end()) return -1;
  return it->second ? 1 : 0;
}

namespace {

// Two watched literals per clause; units and empty clauses are handled up
// front so every watched clause has at least two literals.
class Propagator {
 public:
  explicit Propagator(const CnfFormula& cnf)
      : cnf_(cnf),
        value_(static_cast<std::size_t>(cnf.num_vars) + 1, -1),
        watches_(2 * (static_cast<std::size_t>(cnf.num_vars) + 1)) {}

  bool run(std::span<const Lit> assumptions) {
    for (Lit l : assumptions)
      if (!assign(l)) return false;

    for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci) {
      const Clause& c = cnf_.clauses[ci];
      if (c.empty()) return false;
      if (c.size() == 1) {
        if (!assign(c[0])) return false;
        continue;
      }
      watch_lists_.push_back({c[0], c[1]});
      watches_[slot(-c[0])].push_back(ci);
      watches_[slot(-c[1])].push_back(ci);
    }
    clause_watch_.assign(cnf_.clauses.size(), 0);
    std::size_t w = 0;
    for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci)
      if (cnf_.clauses[ci].size() >= 2) clause_watch_[ci] = w++;

    // Clauses may already be unit or falsified under the initial assignment.
    for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci) {
      if (cnf_.clauses[ci].size() < 2) continue;
      if (!revisit(ci)) return false;
    }
    return drain();
  }

  std::map<int, bool> forced() const {
    std::map<int, bool> out;
    for (int v = 1; v <= cnf_.num_vars; ++v)
      if (value_[static_cast<std::size_t>(v)] >= 0) out.emplace(v, value_[static_cast<std::size_t>(v)] == 1);
    return out;
  }

 private:
  // Watches are keyed by the literal whose assignment to true falsifies the
  // watched literal, i.e. watches_[slot(-l)] holds clauses watching l.
  static std::size_t slot(Lit l) {
    return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0);
  }

  int lit_value(Lit l) const {
    const int v = value_[static_cast<std::size_t>(std::abs(l))];
    if (v < 0) return -1;
    return (l > 0) == (v == 1) ? 1 : 0;
  }

  bool assign(Lit l) {
    const std::size_t var = static_cast<std::size_t>(std::abs(l));
    if (l == 0 || var > static_cast<std::size_t>(cnf_.num_vars))
      throw Error(ErrorCode::invalid_config, "literal out of range");
    const int want = l > 0 ? 1 : 0;
    if (value_[var] >= 0) return value_[var] == want;
    value_[var] = want;
    trail_.push_back(l);
    return true;
  }

  // Re-establish the watch invariant for clause ci; false on conflict.
  bool revisit(std::size_t ci) {
    const Clause& c = cnf_.clauses[ci];
    auto& [w0, w1] = watch_lists_[clause_watch_[ci]];
    if (lit_value(w0) == 1 || lit_value(w1) == 1) return true;
    for (int pass = 0; pass < 2; ++pass) {
      Lit& watched = pass == 0 ? w0 : w1;
      const Lit other = pass == 0 ? w1 : w0;
      if (lit_value(watched) != 0) continue;
      for (Lit cand : c) {
        if (cand == other || cand == watched || lit_value(cand) == 0) continue;
        watched = cand;
        watches_[slot(-cand)].push_back(ci);
        if (lit_value(cand) == 1) return true;
        break;
      }
    }
    const int v0 = lit_value(w0);
    const int v1 = lit_value(w1);
    if (v0 == 0 && v1 == 0) return false;
    if (v0 == 0 && v1 == -1) return assign(w1);
    if (v1 == 0 && v0 == -1) return assign(w0);
    return true;
  }

  bool drain() {
    while (head_ < trail_.size()) {
      const Lit l = trail_[head_++];
      // Clauses watching -l lost a literal. Stale entries (the clause moved
      // its watch) are filtered by checking the current watch pair.
      auto& list = watches_[slot(l)];
      std::vector<std::size_t> pending;
      pending.swap(list);
      for (std::size_t ci : pending) {
        auto& [w0, w1] = watch_lists_[clause_watch_[ci]];
        if (w0 != -l && w1 != -l) continue;
        list.push_back(ci);
        if (!revisit(ci)) return false;
      }
      // Drop entries that moved away during revisit.
      std::vector<std::size_t> kept;
      for (std::size_t ci : list) {
        auto& [w0, w1] = watch_lists_[clause_watch_[ci]];
        if (w0 == -l || w1 == -l) kept.push_back(ci);
      }
      list.swap(kept);
    }
    return true;
  }

  const CnfFormula& cnf_;
  std::vector<int> value_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::pair<Lit, Lit>> watch_lists_;
  std::vector<std::size_t> clause_watch_;
  std::vector<Lit> trail_;
  std::size_t head_ = 0;
};

}  // namespace

PropagationResult unit_propagate(const CnfFormula& cnf, std::span<const Lit> assumptions) {
  Propagator p(cnf);
  PropagationResult result;
  result.status = p.run(assumptions) ? PropagationResult::Status::ok
                                     : PropagationResult::Status::conflict;
  result.forced = p.forced();
  return result;
}

}  // namespace cardxor
