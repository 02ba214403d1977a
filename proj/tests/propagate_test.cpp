#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cardxor/encode.hpp"
#include "cardxor/propagate.hpp"
#include "oracles.hpp"

using namespace cardxor;

TEST(PropagateTest, UnitChain) {
  CnfFormula cnf;
  cnf.num_vars = 2;
  cnf.clauses = {{1}, {-1, 2}};
  const auto r = unit_propagate(cnf, {});
  ASSERT_FALSE(r.conflict());
  EXPECT_EQ(r.forced, (std::map<int, bool>{{1, true}, {2, true}}));
}

TEST(PropagateTest, ComplementaryUnitsConflict) {
  CnfFormula cnf;
  cnf.num_vars = 1;
  cnf.clauses = {{1}, {-1}};
  EXPECT_TRUE(unit_propagate(cnf, {}).conflict());
}

TEST(PropagateTest, EmptyClauseAndContradictoryAssumptions) {
  CnfFormula cnf;
  cnf.num_vars = 2;
  cnf.clauses = {{1, 2}, {}};
  EXPECT_TRUE(unit_propagate(cnf, {}).conflict());
  cnf.clauses = {{1, 2}};
  const std::vector<Lit> contra{1, -1};
  EXPECT_TRUE(unit_propagate(cnf, contra).conflict());
}

TEST(PropagateTest, XorClausesAreIgnored) {
  CnfFormula cnf;
  cnf.num_vars = 2;
  cnf.xor_clauses.push_back({{1, 2}, true});
  const std::vector<Lit> a{1};
  const auto r = unit_propagate(cnf, a);
  EXPECT_FALSE(r.conflict());
  EXPECT_EQ(r.value(2), -1);
}

TEST(PropagateTest, SequentialCounterAtMostTwoOfFour) {
  VarPool pool(4);
  const CnfFormula cnf = encode_card({4, 2}, CardEncoding::bdd, pool);
  const std::vector<Lit> a{1, 2};
  const auto r = unit_propagate(cnf, a);
  ASSERT_FALSE(r.conflict());
  EXPECT_EQ(r.value(3), 0);
  EXPECT_EQ(r.value(4), 0);
}

// Random 3-CNF: the watched-literal fixed point equals the scanning one.
TEST(PropagateProperty, MatchesNaiveFixedPoint) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 2000; ++trial) {
    CnfFormula cnf;
    cnf.num_vars = 3 + static_cast<int>(rng() % 12);
    const int nclauses = static_cast<int>(rng() % 30);
    auto lit = [&] {
      const int v = 1 + static_cast<int>(rng() % static_cast<unsigned>(cnf.num_vars));
      return rng() & 1u ? v : -v;
    };
    for (int c = 0; c < nclauses; ++c) {
      Clause cl;
      const int w = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < w; ++i) {
        const Lit l = lit();
        if (std::find(cl.begin(), cl.end(), l) == cl.end() && std::find(cl.begin(), cl.end(), -l) == cl.end())
          cl.push_back(l);
      }
      cnf.clauses.push_back(cl);
    }
    std::vector<Lit> assume;
    for (int i = static_cast<int>(rng() % 3); i > 0; --i) assume.push_back(lit());

    std::vector<int> value;
    const bool ok = oracle::naive_propagate(cnf, assume, value);
    const auto r = unit_propagate(cnf, assume);
    ASSERT_EQ(!r.conflict(), ok) << "trial " << trial;
    if (!ok) continue;
    for (int v = 1; v <= cnf.num_vars; ++v) ASSERT_EQ(r.value(v), value[static_cast<std::size_t>(v)]);
  }
}
