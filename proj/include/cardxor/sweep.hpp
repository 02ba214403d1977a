#ifndef CARDXOR_SWEEP_HPP
#define CARDXOR_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cardxor/encode.hpp"
#include "cardxor/solve.hpp"

namespace cardxor::sweep {

struct Plan {
  std::size_t n = 0;
  std::vector<std::size_t> k_values;  // each in [0, n]
  std::vector<std::size_t> m_values;  // each >= 1
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  EngineConfig engine;
  EncodingChoice encoding;
  double margin = 0.0;
  /// 0 selects std::thread::hardware_concurrency().
  std::size_t jobs = 0;

  /// k = 0..n in steps of k_step, m = 1..n.
  static Plan full_grid(std::size_t n, std::size_t k_step = 1);
  /// Throws Error(invalid_config).
  void validate() const;
};

enum class RecordStatus { sat, unsat, timeout, error };

struct Record {
  std::uint64_t master_seed = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string engine;
  std::string encoding;
  RecordStatus status = RecordStatus::error;
  std::uint64_t time_ms = 0;
  std::uint64_t decisions = 0;
  std::optional<std::size_t> min_weight;

  friend bool operator==(const Record&, const Record&) = default;
};

const char* to_string(RecordStatus s);
RecordStatus parse_record_status(std::string_view s);

/// Label written to the encoding column: "<enc>-<xor mode>" for the external
/// engine, "none" for engines that do not encode.
std::string encoding_label(const Plan& plan);

/// One record per (k, m, trial), sorted by that key whatever the worker count.
/// Engine failures become records with status error.
std::vector<Record> run(const Plan& plan);

struct CellSummary {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  double k_over_n = 0.0;
  double s = 0.0;
  std::size_t trials = 0;
  std::size_t sat = 0;
  std::size_t unsat = 0;
  std::size_t timeouts = 0;
  std::size_t errors = 0;
  double sat_fraction = 0.0;
  double timeout_fraction = 0.0;
  double median_time_ms = 0.0;
  double median_decisions = 0.0;
  double phi = 0.0;
};

struct SummaryOptions {
  /// Drop timeouts from the sat_fraction denominator.
  bool exclude_timeouts = false;
};

/// One summary per (n, k, m) cell in key order.
std::vector<CellSummary> summarize(const std::vector<Record>& records,
                                   const SummaryOptions& options = {});

enum class Side { sat, unsat };

struct StatTestReport {
  Side side = Side::sat;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  double alpha = 0.0;
  double log2_count = 0.0;  // log2 of the Hamming-ball volume
  std::size_t trials = 0;
  std::size_t successes = 0;  // sat (or unsat) outcomes, per side
  double empirical_rate = 0.0;
  double floor = 0.0;      // 1 - 2^-alpha
  double sigma = 0.0;      // sqrt(floor (1 - floor) / trials)
  double threshold = 0.0;  // floor - 3 sigma
  bool passed = false;
};

struct StatTestConfig {
  std::size_t n = 0;
  std::size_t k = 0;
  double s = 0.0;
  double alpha = 1.0;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  Side side = Side::sat;
  EngineConfig engine;
  EncodingChoice encoding;
  std::size_t jobs = 0;
};

/// Checks the conditional satisfiability floor on fresh random instances.
/// sat side requires log2 #F >= ceil(sn) + alpha, unsat side
/// log2 #F <= ceil(sn) - alpha; otherwise Error(precondition_not_met).
StatTestReport stat_test(const StatTestConfig& cfg);

inline constexpr std::string_view csv_header =
    "master_seed,n,k,m,trial,seed,engine,encoding,status,time_ms,decisions,min_weight";

void emit_csv(const std::vector<Record>& records, std::ostream& out);
/// Throws ParseError.
std::vector<Record> parse_csv(std::istream& in);

enum class Metric { sat_fraction, median_time, timeout_fraction, median_decisions };

const char* to_string(Metric m);
Metric parse_metric(std::string_view name);

/// Self-contained SVG: x = k/n, y = s, cells shaded by `metric`, with the
/// transition curve phi(k/n) drawn over the k values present.
void emit_heatmap(const std::vector<CellSummary>& summaries, Metric metric, std::ostream& out);

}  // namespace cardxor::sweep

#endif  // CARDXOR_SWEEP_HPP
