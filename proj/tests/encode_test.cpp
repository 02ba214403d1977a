#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cardxor/encode.hpp"
#include "cardxor/error.hpp"
#include "cardxor/propagate.hpp"
#include "cardxor/solve.hpp"
#include "oracles.hpp"

using namespace cardxor;

namespace {

constexpr CardEncoding all_encodings[] = {CardEncoding::adder, CardEncoding::bdd, CardEncoding::cardnet};

std::size_t ball_volume(std::size_t n, std::size_t k) {
  std::size_t sum = 0, c = 1;
  for (std::size_t w = 0; w <= k; ++w) {
    sum += c;
    c = c * (n - w) / (w + 1);
  }
  return sum;
}

CnfFormula card_cnf(std::size_t n, std::size_t k, CardEncoding e) {
  VarPool pool(static_cast<int>(n));
  return encode_card({n, k}, e, pool);
}

}  // namespace

TEST(EncodeCardTest, VacuousWhenKEqualsN) {
  for (CardEncoding e : all_encodings) {
    const CnfFormula cnf = card_cnf(7, 7, e);
    EXPECT_TRUE(cnf.clauses.empty());
    EXPECT_EQ(cnf.num_vars, 7);
  }
}

TEST(EncodeCardTest, KZeroIsUnitNegations) {
  for (CardEncoding e : all_encodings) {
    const CnfFormula cnf = card_cnf(3, 0, e);
    EXPECT_EQ(cnf.clauses, (std::vector<Clause>{{-1}, {-2}, {-3}}));
    const auto r = unit_propagate(cnf, {});
    ASSERT_FALSE(r.conflict());
    for (int v = 1; v <= 3; ++v) EXPECT_EQ(r.value(v), 0);
  }
}

TEST(EncodeCardTest, ProjectedCountSixChooseAtMostTwo) {
  for (CardEncoding e : all_encodings)
    EXPECT_EQ(oracle::projected_count(card_cnf(6, 2, e), 6), 22u) << to_string(e);
}

TEST(EncodeCardTest, AuxiliariesAboveOriginals) {
  for (CardEncoding e : all_encodings) {
    const CnfFormula cnf = card_cnf(9, 4, e);
    for (const Clause& c : cnf.clauses)
      for (Lit l : c) {
        EXPECT_NE(l, 0);
        EXPECT_LE(std::abs(l), cnf.num_vars);
      }
  }
  VarPool low(2);
  EXPECT_THROW(encode_card({5, 2}, CardEncoding::bdd, low), Error);
}

// Soundness and completeness at small n, every k.
TEST(EncodeCardProperty, ProjectedModelCount) {
  for (CardEncoding e : all_encodings)
    for (std::size_t n = 1; n <= 8; ++n)
      for (std::size_t k = 0; k <= n; ++k)
        ASSERT_EQ(oracle::projected_count(card_cnf(n, k, e), n), ball_volume(n, k))
            << to_string(e) << " n=" << n << " k=" << k;
}

// Clause counts within the stated asymptotic envelopes.
TEST(EncodeCardProperty, ClauseCountEnvelopes) {
  for (std::size_t n = 2; n <= 300; n += 7) {
    for (std::size_t k = 1; k < n; k += 3) {
      const double nd = static_cast<double>(n), kd = static_cast<double>(k);
      const double lg = 1.0 + std::log2(std::max(kd, 2.0));
      EXPECT_LE(card_cnf(n, k, CardEncoding::adder).clauses.size(), 16.0 * nd);
      EXPECT_LE(card_cnf(n, k, CardEncoding::bdd).clauses.size(), 2.0 * nd * kd + nd);
      EXPECT_LE(card_cnf(n, k, CardEncoding::cardnet).clauses.size(), 6.0 * nd * lg * lg)
          << n << " " << k;
    }
  }
}

TEST(EncodeCardProperty, ArcConsistentEncodingsForceTheRest) {
  std::mt19937_64 rng(5);
  for (CardEncoding e : {CardEncoding::bdd, CardEncoding::cardnet}) {
    for (std::size_t n = 2; n <= 9; ++n) {
      for (std::size_t k = 1; k < n; ++k) {
        const CnfFormula cnf = card_cnf(n, k, e);
        for (int sample = 0; sample < 20; ++sample) {
          std::vector<int> vars(n);
          for (std::size_t i = 0; i < n; ++i) vars[i] = static_cast<int>(i + 1);
          std::shuffle(vars.begin(), vars.end(), rng);
          std::vector<Lit> assume(vars.begin(), vars.begin() + static_cast<long>(k));
          const auto r = unit_propagate(cnf, assume);
          ASSERT_FALSE(r.conflict());
          for (std::size_t i = k; i < n; ++i) ASSERT_EQ(r.value(vars[i]), 0) << to_string(e);
          // One more true original is a conflict.
          assume.push_back(vars[k]);
          ASSERT_TRUE(unit_propagate(cnf, assume).conflict());
        }
      }
    }
  }
}

TEST(BlastXorTest, TwoXorTruthTable) {
  CardXorInstance inst;
  BitVec row(2);
  row.set(0);
  row.set(1);
  BitVec rhs(1);
  rhs.set(0);
  inst.xors = XorSystem(2, {row}, rhs);
  inst.card = {2, 2};
  const CnfFormula cnf = encode_instance(inst, {CardEncoding::bdd, XorMode::blast, 4});
  EXPECT_EQ(cnf.clauses, (std::vector<Clause>{{1, 2}, {-1, -2}}));
  EXPECT_EQ(cnf.num_vars, 2);
}

TEST(BlastXorTest, EmptyRowWithOddParityIsEmptyClause) {
  std::vector<Clause> out;
  VarPool pool(3);
  blast_xor({}, true, 4, pool, out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].empty());
  out.clear();
  blast_xor({}, false, 4, pool, out);
  EXPECT_TRUE(out.empty());
  EXPECT_THROW(blast_xor({1, 2}, false, 2, pool, out), Error);
}

TEST(BlastXorTest, PiecesRespectCutAndPreserveParity) {
  for (int cut = 3; cut <= 6; ++cut) {
    for (int w = 1; w <= 11; ++w) {
      std::vector<int> vars;
      for (int i = 1; i <= w; ++i) vars.push_back(i);
      for (bool parity : {false, true}) {
        CnfFormula cnf;
        VarPool pool(w);
        blast_xor(vars, parity, cut, pool, cnf.clauses);
        cnf.num_vars = pool.last();
        for (const Clause& c : cnf.clauses) ASSERT_LE(c.size(), static_cast<std::size_t>(cut));
        // Exactly the assignments of matching parity extend to models.
        oracle::Dpll dpll(cnf);
        for (std::uint32_t x = 0; x < (1u << w); ++x) {
          std::vector<int> fixed;
          for (int i = 0; i < w; ++i) fixed.push_back((x >> i) & 1u ? i + 1 : -(i + 1));
          ASSERT_EQ(dpll.solve(fixed), (__builtin_popcount(x) & 1) == static_cast<int>(parity));
        }
      }
    }
  }
}

TEST(EncodeInstanceTest, NoRowsGivesCardinalityOnly) {
  const CardXorInstance inst = generate({8, 3, 0, 1, 0});
  VarPool pool(8);
  const CnfFormula card = encode_card(inst.card, CardEncoding::cardnet, pool);
  EXPECT_EQ(encode_instance(inst, {CardEncoding::cardnet, XorMode::blast, 4}), card);
  EXPECT_EQ(encode_instance(inst, {CardEncoding::cardnet, XorMode::native, 4}), card);
}

TEST(EncodeInstanceTest, NativeKeepsRowsVerbatim) {
  const CardXorInstance inst = generate({10, 3, 6, 77, 0});
  const CnfFormula cnf = encode_instance(inst, {CardEncoding::adder, XorMode::native, 4});
  ASSERT_EQ(cnf.xor_clauses.size(), inst.m());
  for (std::size_t i = 0; i < inst.m(); ++i) {
    EXPECT_EQ(cnf.xor_clauses[i].parity, inst.xors.rhs.get(i));
    EXPECT_EQ(cnf.xor_clauses[i].vars.size(), inst.xors.rows[i].popcount());
    for (int v : cnf.xor_clauses[i].vars) EXPECT_TRUE(inst.xors.rows[i].get(static_cast<std::size_t>(v - 1)));
  }
}

// Blast and native agree with each other and with the exact decision.
TEST(EncodeInstanceProperty, BlastNativeEquisatisfiable) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 11;  // <= 12 keeps the reference DPLL quick
    const std::size_t k = rng() % (n + 1);
    const std::size_t m = rng() % (n + 1);
    const CardXorInstance inst = generate({n, k, m, rng(), 0});
    const bool truth = oracle::satisfiable(inst);
    const CardEncoding e = all_encodings[trial % 3];
    const int cut = 3 + static_cast<int>(rng() % 3);
    oracle::Dpll native(encode_instance(inst, {e, XorMode::native, cut}));
    const CnfFormula blasted = encode_instance(inst, {e, XorMode::blast, cut});
    ASSERT_TRUE(blasted.xor_clauses.empty());
    oracle::Dpll blast(blasted);
    ASSERT_EQ(native.solve({}), truth);
    ASSERT_EQ(blast.solve({}), truth);
  }
}

TEST(EncodeInstanceTest, AgreesWithInternalSolverAtTen) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const CardXorInstance inst = generate({10, rng() % 11, rng() % 11, rng(), 0});
    const bool bnb = coset_bnb(inst, {}).status == SolveStatus::sat;
    oracle::Dpll blast(encode_instance(inst, {CardEncoding::bdd, XorMode::blast, 4}));
    oracle::Dpll native(encode_instance(inst, {CardEncoding::bdd, XorMode::native, 4}));
    EXPECT_EQ(blast.solve({}), bnb);
    EXPECT_EQ(native.solve({}), bnb);
  }
}

TEST(DimacsTest, EmptyFormula) {
  CnfFormula cnf;
  cnf.num_vars = 3;
  std::ostringstream out;
  write_dimacs(cnf, out);
  EXPECT_EQ(out.str(), "p cnf 3 0\n");
}

TEST(DimacsTest, XorParityConvention) {
  CnfFormula cnf;
  cnf.num_vars = 2;
  cnf.xor_clauses.push_back({{1, 2}, true});
  cnf.xor_clauses.push_back({{1, 2}, false});
  cnf.clauses.push_back({1, -2});
  std::ostringstream out;
  write_dimacs(cnf, out);
  EXPECT_EQ(out.str(), "p cnf 2 3\n1 -2 0\nx 1 2 0\nx -1 2 0\n");

  std::istringstream in(out.str());
  EXPECT_EQ(read_dimacs(in), cnf);
}

TEST(DimacsTest, EmptyXorRows) {
  CnfFormula cnf;
  cnf.num_vars = 1;
  cnf.xor_clauses.push_back({{}, false});
  cnf.xor_clauses.push_back({{}, true});
  std::ostringstream out;
  write_dimacs(cnf, out);
  EXPECT_EQ(out.str(), "p cnf 1 1\n0\n");
}

TEST(DimacsTest, RejectsMalformedInput) {
  auto fails = [](const char* text) {
    std::istringstream in(text);
    try {
      read_dimacs(in);
    } catch (const ParseError&) {
      return true;
    }
    return false;
  };
  EXPECT_TRUE(fails("1 2 0\n"));
  EXPECT_TRUE(fails("p cnf 2 1\n1 3 0\n"));
  EXPECT_TRUE(fails("p cnf 2 1\n1 2\n"));
  EXPECT_TRUE(fails("p dnf 2 1\n"));
  EXPECT_FALSE(fails("c hello\np cnf 2 1\n1 2 0\n"));
}
