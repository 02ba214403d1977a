#include "cardxor/gf2.hpp"

#include <utility>

#include "cardxor/error.hpp"

namespace cardxor::gf2 {

System::System(std::size_t n_, std::vector<BitVec> rows_, BitVec rhs_)
    : n(n_), rows(std::move(rows_)), rhs(std::move(rhs_)) {
  if (rhs.width() != rows.size())
    throw Error(ErrorCode::invalid_config, "rhs length does not match row count");
  for (const BitVec& r : rows)
    if (r.width() != n) throw Error(ErrorCode::invalid_config, "row width does not match n");
}

std::vector<std::size_t> EchelonForm::free_cols() const {
  std::vector<std::size_t> out;
  out.reserve(n - rank);
  std::size_t p = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (p < pivot_cols.size() && pivot_cols[p] == c)
      ++p;
    else
      out.push_back(c);
  }
  return out;
}

EchelonForm eliminate(const System& sys) {
  EchelonForm ef;
  ef.n = sys.n;
  ef.rows = sys.rows;
  ef.rhs = sys.rhs;
  const std::size_t m = ef.rows.size();

  std::size_t r = 0;
  for (std::size_t col = 0; col < sys.n && r < m; ++col) {
    std::size_t pick = r;
    while (pick < m && !ef.rows[pick].get(col)) ++pick;
    if (pick == m) continue;
    if (pick != r) {
      std::swap(ef.rows[pick], ef.rows[r]);
      const bool tmp = ef.rhs.get(pick);
      ef.rhs.set(pick, ef.rhs.get(r));
      ef.rhs.set(r, tmp);
    }
    const bool pivot_rhs = ef.rhs.get(r);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || !ef.rows[i].get(col)) continue;
      ef.rows[i] ^= ef.rows[r];
      if (pivot_rhs) ef.rhs.flip(i);
    }
    ef.pivot_cols.push_back(col);
    ++r;
  }
  ef.rank = r;
  for (std::size_t i = r; i < m; ++i) {
    if (ef.rhs.get(i)) {
      ef.consistent = false;
      break;
    }
  }
  return ef;
}

std::optional<BitVec> particular_solution(const EchelonForm& ef) {
  if (!ef.consistent) return std::nullopt;
  BitVec x(ef.n);
  for (std::size_t i = 0; i < ef.rank; ++i)
    if (ef.rhs.get(i)) x.set(ef.pivot_cols[i]);
  return x;
}

std::vector<BitVec> null_basis(const EchelonForm& ef) {
  std::vector<BitVec> basis;
  for (std::size_t f : ef.free_cols()) {
    BitVec v(ef.n);
    v.set(f);
    for (std::size_t i = 0; i < ef.rank; ++i)
      if (ef.rows[i].get(f)) v.set(ef.pivot_cols[i]);
    basis.push_back(std::move(v));
  }
  return basis;
}

BitVec multiply(const System& sys, const BitVec& x) {
  BitVec out(sys.m());
  for (std::size_t i = 0; i < sys.m(); ++i)
    if (sys.rows[i].dot(x)) out.set(i);
  return out;
}

bool satisfies(const System& sys, const BitVec& x) {
  if (x.width() != sys.n) return false;
  for (std::size_t i = 0; i < sys.m(); ++i)
    if (sys.rows[i].dot(x) != sys.rhs.get(i)) return false;
  return true;
}

}  // namespace cardxor::gf2
