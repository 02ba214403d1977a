#ifndef CARDXOR_SOLVE_HPP
#define CARDXOR_SOLVE_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cardxor/bitvec.hpp"
#include "cardxor/encode.hpp"
#include "cardxor/instance.hpp"

namespace cardxor {

enum class SolveStatus { sat, unsat, timeout };

enum class Engine { brute, bnb, external };

/// Which value a branch explores first.
enum class Polarity { false_first, true_first, cached };

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;  // always 0 for the internal engines
  std::chrono::nanoseconds elapsed{0};
};

struct SolveResult {
  SolveStatus status = SolveStatus::timeout;
  std::optional<BitVec> witness;
  std::optional<std::size_t> min_weight;
  SolveStats stats;
};

struct EngineConfig {
  Engine engine = Engine::bnb;
  std::chrono::milliseconds timeout{10'000};
  Polarity polarity = Polarity::false_first;
  /// bnb only: search to completion and report the exact coset minimum.
  bool find_minimum = false;
  /// Shell command; "{cnf}" is replaced by the DIMACS path, or the path is
  /// appended when the placeholder is absent.
  std::string external_cmd;
};

inline constexpr std::size_t brute_force_max_n = 26;

const char* to_string(SolveStatus s);
const char* to_string(Engine e);
const char* to_string(Polarity p);
Engine parse_engine(std::string_view name);
Polarity parse_polarity(std::string_view name);

/// Builds a result and checks the witness invariant: a sat result carrying
/// a witness must satisfy the instance. Throws Error(witness_verification).
SolveResult make_result(const CardXorInstance& inst, SolveStatus status,
                        std::optional<BitVec> witness, SolveStats stats,
                        std::optional<std::size_t> min_weight = std::nullopt);

/// Exhaustive Gray-code scan; the ground-truth oracle.
/// Throws Error(instance_too_large) when n > brute_force_max_n.
SolveResult brute_force(const CardXorInstance& inst, const EngineConfig& cfg);

/// Branch and bound over the free variables of the eliminated XOR system,
/// i.e. a search for a coset element of weight <= k.
SolveResult coset_bnb(const CardXorInstance& inst, const EngineConfig& cfg);

/// Encodes to extended DIMACS, runs cfg.external_cmd and parses SAT
/// competition style `s` / `v` output. Throws Error with spawn_failure,
/// unparseable_output or witness_verification.
SolveResult solve_external(const CardXorInstance& inst, const EngineConfig& cfg,
                           const EncodingChoice& choice);

/// Dispatch on cfg.engine.
SolveResult solve(const CardXorInstance& inst, const EngineConfig& cfg,
                  const EncodingChoice& choice = {});

}  // namespace cardxor

#endif  // CARDXOR_SOLVE_HPP
