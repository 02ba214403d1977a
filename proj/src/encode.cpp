#include "cardxor/encode.hpp"

#include <bit>
#include <cstddef>
#include <deque>
#include <utility>

#include "cardxor/error.hpp"

namespace cardxor {

const char* to_string(CardEncoding e) {
  switch (e) {
    case CardEncoding::adder: return "adder";
    case CardEncoding::bdd: return "bdd";
    case CardEncoding::cardnet: return "cardnet";
  }
  return "bdd";
}

const char* to_string(XorMode m) { return m == XorMode::native ? "native" : "blast"; }

CardEncoding parse_card_encoding(std::string_view name) {
  if (name == "adder") return CardEncoding::adder;
  if (name == "bdd" || name == "seqcounter") return CardEncoding::bdd;
  if (name == "cardnet") return CardEncoding::cardnet;
  throw Error(ErrorCode::invalid_config, "unknown encoding '" + std::string(name) + "'");
}

XorMode parse_xor_mode(std::string_view name) {
  if (name == "native") return XorMode::native;
  if (name == "blast") return XorMode::blast;
  throw Error(ErrorCode::invalid_config, "unknown xor mode '" + std::string(name) + "'");
}

namespace {

// Forbid every assignment of `vars` whose parity differs from `parity`.
void expand_xor(const std::vector<int>& vars, bool parity, std::vector<Clause>& out) {
  const std::size_t w = vars.size();
  for (std::uint32_t mask = 0; mask < (1u << w); ++mask) {
    // The clause is falsified exactly by the assignment with var i = bit i.
    if ((std::popcount(mask) & 1) == static_cast<int>(parity)) continue;
    Clause c;
    c.reserve(w);
    for (std::size_t i = 0; i < w; ++i) c.push_back((mask >> i) & 1u ? -vars[i] : vars[i]);
    out.push_back(std::move(c));
  }
}

// ---------------------------------------------------------------------------
// Sequential counter. s(i, j) means "at least j of x_1..x_i are true"
// (one direction only), for i in 1..n-1 and j in 1..k.

void seq_counter(int n, int k, VarPool& pool, std::vector<Clause>& out) {
  std::vector<std::vector<int>> s(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(k) + 1, 0));
  for (int i = 1; i < n; ++i)
    for (int j = 1; j <= k; ++j) s[i][j] = pool.fresh();

  out.push_back({-1, s[1][1]});
  for (int j = 2; j <= k; ++j) out.push_back({-s[1][j]});
  for (int i = 2; i < n; ++i) {
    out.push_back({-i, s[i][1]});
    out.push_back({-s[i - 1][1], s[i][1]});
    for (int j = 2; j <= k; ++j) {
      out.push_back({-i, -s[i - 1][j - 1], s[i][j]});
      out.push_back({-s[i - 1][j], s[i][j]});
    }
    out.push_back({-i, -s[i - 1][k]});
  }
  out.push_back({-n, -s[n - 1][k]});
}

// ---------------------------------------------------------------------------
// Cardinality network built from half-encoded comparators: only the clauses
// that push "true" towards the front of the sorted outputs are emitted.

class CardNetwork {
 public:
  CardNetwork(VarPool& pool, std::vector<Clause>& out) : pool_(pool), out_(out) {}

  std::pair<int, int> comparator(int a, int b) {
    const int hi = pool_.fresh();
    const int lo = pool_.fresh();
    out_.push_back({-a, hi});
    out_.push_back({-b, hi});
    out_.push_back({-a, -b, lo});
    return {hi, lo};
  }

  std::vector<int> hmerge(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t p = a.size();
    if (p == 1) {
      auto [hi, lo] = comparator(a[0], b[0]);
      return {hi, lo};
    }
    auto d = hmerge(odds(a), odds(b));
    auto e = hmerge(evens(a), evens(b));
    std::vector<int> c(2 * p);
    c[0] = d[0];
    for (std::size_t i = 1; i < p; ++i) {
      auto [hi, lo] = comparator(d[i], e[i - 1]);
      c[2 * i - 1] = hi;
      c[2 * i] = lo;
    }
    c[2 * p - 1] = e[p - 1];
    return c;
  }

  std::vector<int> hsort(const std::vector<int>& a) {
    if (a.size() == 1) return a;
    const std::size_t half = a.size() / 2;
    auto lo = hsort({a.begin(), a.begin() + static_cast<std::ptrdiff_t>(half)});
    auto hi = hsort({a.begin() + static_cast<std::ptrdiff_t>(half), a.end()});
    return hmerge(lo, hi);
  }

  // Merges two sorted sequences of length p, keeping the first p + 1 outputs.
  std::vector<int> smerge(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t p = a.size();
    if (p == 1) {
      auto [hi, lo] = comparator(a[0], b[0]);
      return {hi, lo};
    }
    auto d = smerge(odds(a), odds(b));
    auto e = smerge(evens(a), evens(b));
    std::vector<int> c(p + 1);
    c[0] = d[0];
    for (std::size_t i = 1; i <= p / 2; ++i) {
      auto [hi, lo] = comparator(d[i], e[i - 1]);
      c[2 * i - 1] = hi;
      c[2 * i] = lo;
    }
    return c;
  }

  // First `width` sorted outputs of `a`; |a| is a multiple of width, a power of two.
  std::vector<int> card(const std::vector<int>& a, std::size_t width) {
    if (a.size() == width) return hsort(a);
    auto d = card({a.begin(), a.begin() + static_cast<std::ptrdiff_t>(width)}, width);
    auto e = card({a.begin() + static_cast<std::ptrdiff_t>(width), a.end()}, width);
    auto c = smerge(d, e);
    c.resize(width);
    return c;
  }

 private:
  // 1st, 3rd, 5th ... element (1-based odd positions).
  static std::vector<int> odds(const std::vector<int>& v) {
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
    return out;
  }
  static std::vector<int> evens(const std::vector<int>& v) {
    std::vector<int> out;
    for (std::size_t i = 1; i < v.size(); i += 2) out.push_back(v[i]);
    return out;
  }

  VarPool& pool_;
  std::vector<Clause>& out_;
};

void cardinality_network(int n, int k, VarPool& pool, std::vector<Clause>& out) {
  const std::size_t width = std::bit_ceil(static_cast<std::size_t>(k) + 1);
  std::vector<int> inputs;
  for (int i = 1; i <= n; ++i) inputs.push_back(i);
  while (inputs.size() % width != 0) {
    const int pad = pool.fresh();
    out.push_back({-pad});
    inputs.push_back(pad);
  }
  CardNetwork net(pool, out);
  auto sorted = net.card(inputs, width);
  out.push_back({-sorted[static_cast<std::size_t>(k)]});
}

// ---------------------------------------------------------------------------
// Adder: full/half adders reduce column buckets until each binary weight holds
// at most one bit, then a lexicographic comparator enforces sum <= k.

void adder(int n, int k, VarPool& pool, std::vector<Clause>& out) {
  std::vector<std::deque<int>> buckets(1);
  for (int i = 1; i <= n; ++i) buckets[0].push_back(i);

  std::vector<int> sum_bits;  // 0 means the bit is constant false
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    while (buckets[j].size() >= 2) {
      if (buckets.size() == j + 1) buckets.emplace_back();
      const int a = buckets[j].front();
      buckets[j].pop_front();
      const int b = buckets[j].front();
      buckets[j].pop_front();
      const int s = pool.fresh();
      const int carry = pool.fresh();
      if (buckets[j].empty()) {
        expand_xor({a, b, s}, false, out);
        out.push_back({-a, -b, carry});
        out.push_back({a, -carry});
        out.push_back({b, -carry});
      } else {
        const int c = buckets[j].front();
        buckets[j].pop_front();
        expand_xor({a, b, c, s}, false, out);
        out.push_back({-a, -b, carry});
        out.push_back({-a, -c, carry});
        out.push_back({-b, -c, carry});
        out.push_back({a, b, -carry});
        out.push_back({a, c, -carry});
        out.push_back({b, c, -carry});
      }
      buckets[j].push_back(s);
      buckets[j + 1].push_back(carry);
    }
    sum_bits.push_back(buckets[j].empty() ? 0 : buckets[j].front());
  }

  const std::size_t bits = sum_bits.size();
  for (std::size_t j = 0; j < bits; ++j) {
    if ((static_cast<unsigned>(k) >> j) & 1u) continue;
    if (sum_bits[j] == 0) continue;
    Clause c{-sum_bits[j]};
    bool satisfied = false;
    for (std::size_t i = j + 1; i < bits; ++i) {
      if (!((static_cast<unsigned>(k) >> i) & 1u)) continue;
      if (sum_bits[i] == 0) {
        satisfied = true;
        break;
      }
      c.push_back(-sum_bits[i]);
    }
    if (!satisfied) out.push_back(std::move(c));
  }
}

}  // namespace

CnfFormula encode_card(const CardConstraint& card, CardEncoding encoding, VarPool& pool) {
  if (card.k > card.n) throw Error(ErrorCode::invalid_config, "k must lie in [0, n]");
  if (pool.last() < static_cast<int>(card.n))
    throw Error(ErrorCode::invalid_config, "variable pool must start past the originals");
  const int n = static_cast<int>(card.n);
  const int k = static_cast<int>(card.k);

  CnfFormula cnf;
  if (k == 0) {
    for (int i = 1; i <= n; ++i) cnf.clauses.push_back({-i});
  } else if (k < n) {
    switch (encoding) {
      case CardEncoding::adder: adder(n, k, pool, cnf.clauses); break;
      case CardEncoding::bdd: seq_counter(n, k, pool, cnf.clauses); break;
      case CardEncoding::cardnet: cardinality_network(n, k, pool, cnf.clauses); break;
    }
  }
  cnf.num_vars = pool.last();
  return cnf;
}

void blast_xor(const std::vector<int>& vars, bool parity, int cut, VarPool& pool,
               std::vector<Clause>& out) {
  if (cut < 3) throw Error(ErrorCode::invalid_config, "xor cut must be >= 3");
  const std::size_t width = static_cast<std::size_t>(cut);
  if (vars.empty()) {
    if (parity) out.push_back({});
    return;
  }
  std::vector<int> rest = vars;
  while (rest.size() > width) {
    std::vector<int> piece(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(width - 1));
    const int link = pool.fresh();
    piece.push_back(link);
    expand_xor(piece, false, out);
    std::vector<int> next{link};
    next.insert(next.end(), rest.begin() + static_cast<std::ptrdiff_t>(width - 1), rest.end());
    rest = std::move(next);
  }
  expand_xor(rest, parity, out);
}

CnfFormula encode_instance(const CardXorInstance& inst, const EncodingChoice& choice) {
  if (choice.cut < 3) throw Error(ErrorCode::invalid_config, "xor cut must be >= 3");
  VarPool pool(static_cast<int>(inst.n()));
  CnfFormula cnf = encode_card(inst.card, choice.encoding, pool);
  for (std::size_t i = 0; i < inst.m(); ++i) {
    const BitVec& row = inst.xors.rows[i];
    std::vector<int> vars;
    for (std::size_t c = row.find_first(); c < row.width(); c = row.find_next(c + 1))
      vars.push_back(static_cast<int>(c) + 1);
    const bool parity = inst.xors.rhs.get(i);
    if (choice.xor_mode == XorMode::native)
      cnf.xor_clauses.push_back({std::move(vars), parity});
    else
      blast_xor(vars, parity, choice.cut, pool, cnf.clauses);
  }
  cnf.num_vars = pool.last();
  return cnf;
}

}  // namespace cardxor
