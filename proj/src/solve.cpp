#include "cardxor/solve.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <utility>
#include <vector>

#include "cardxor/error.hpp"
#include "cardxor/gf2.hpp"

namespace cardxor {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::sat: return "sat";
    case SolveStatus::unsat: return "unsat";
    case SolveStatus::timeout: return "timeout";
  }
  return "timeout";
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::brute: return "brute";
    case Engine::bnb: return "bnb";
    case Engine::external: return "external";
  }
  return "bnb";
}

const char* to_string(Polarity p) {
  switch (p) {
    case Polarity::false_first: return "false-first";
    case Polarity::true_first: return "true-first";
    case Polarity::cached: return "cached";
  }
  return "false-first";
}

Engine parse_engine(std::string_view name) {
  if (name == "brute") return Engine::brute;
  if (name == "bnb") return Engine::bnb;
  if (name == "external") return Engine::external;
  throw Error(ErrorCode::invalid_config, "unknown engine '" + std::string(name) + "'");
}

Polarity parse_polarity(std::string_view name) {
  if (name == "false-first" || name == "false") return Polarity::false_first;
  if (name == "true-first" || name == "true") return Polarity::true_first;
  if (name == "cached") return Polarity::cached;
  throw Error(ErrorCode::invalid_config, "unknown polarity '" + std::string(name) + "'");
}

SolveResult make_result(const CardXorInstance& inst, SolveStatus status,
                        std::optional<BitVec> witness, SolveStats stats,
                        std::optional<std::size_t> min_weight) {
  if (status == SolveStatus::sat && witness && !is_witness(inst, *witness))
    throw Error(ErrorCode::witness_verification, "reported witness does not satisfy the instance");
  if (status != SolveStatus::sat) witness.reset();
  SolveResult r;
  r.status = status;
  r.witness = std::move(witness);
  r.min_weight = min_weight;
  r.stats = stats;
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr std::uint64_t timeout_check_mask = (1u << 12) - 1;

class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds budget)
      : start_(Clock::now()), end_(start_ + budget) {}
  bool expired() const { return Clock::now() >= end_; }
  std::chrono::nanoseconds elapsed() const { return Clock::now() - start_; }

 private:
  Clock::time_point start_;
  Clock::time_point end_;
};

void check_timeout(const EngineConfig& cfg) {
  if (cfg.timeout.count() <= 0) throw Error(ErrorCode::invalid_config, "timeout must be > 0");
}

}  // namespace

SolveResult brute_force(const CardXorInstance& inst, const EngineConfig& cfg) {
  check_timeout(cfg);
  const std::size_t n = inst.n();
  if (n > brute_force_max_n)
    throw Error(ErrorCode::instance_too_large,
                "brute force is limited to n <= " + std::to_string(brute_force_max_n));
  Deadline deadline(cfg.timeout);

  const std::size_t m = inst.m();
  std::vector<BitVec> columns(n, BitVec(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (inst.xors.rows[i].get(j)) columns[j].set(i);

  // residual = A x + b; zero exactly when x solves the system.
  BitVec residual = inst.xors.rhs;
  BitVec x(n);
  std::size_t weight = 0;
  SolveStats stats;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 0;; ++step) {
    ++stats.decisions;
    if (weight <= inst.k() && residual.none()) {
      stats.elapsed = deadline.elapsed();
      return make_result(inst, SolveStatus::sat, x, stats);
    }
    if (step + 1 == total) break;
    if ((step & timeout_check_mask) == timeout_check_mask && deadline.expired()) {
      stats.elapsed = deadline.elapsed();
      return make_result(inst, SolveStatus::timeout, std::nullopt, stats);
    }
    const std::size_t j = static_cast<std::size_t>(std::countr_zero(step + 1));
    x.flip(j);
    weight = x.get(j) ? weight + 1 : weight - 1;
    residual ^= columns[j];
  }
  stats.elapsed = deadline.elapsed();
  return make_result(inst, SolveStatus::unsat, std::nullopt, stats);
}

namespace {

class CosetSearch {
 public:
  CosetSearch(const CardXorInstance& inst, const EngineConfig& cfg, const gf2::EchelonForm& ef)
      : inst_(inst), cfg_(cfg), ef_(ef), deadline_(cfg.timeout) {
    const std::size_t rank = ef.rank;
    std::vector<std::size_t> free = ef.free_cols();

    // Branch order: free columns touching the most pivot rows first.
    std::vector<std::size_t> col_weight(inst.n(), 0);
    for (std::size_t r = 0; r < rank; ++r)
      for (std::size_t f : free)
        if (ef.rows[r].get(f)) ++col_weight[f];
    std::stable_sort(free.begin(), free.end(), [&](std::size_t a, std::size_t b) {
      return col_weight[a] > col_weight[b];
    });
    order_ = free;

    touches_.resize(order_.size());
    undecided_.assign(rank, 0);
    parity_.resize(rank);
    for (std::size_t r = 0; r < rank; ++r) parity_[r] = ef.rhs.get(r);
    for (std::size_t t = 0; t < order_.size(); ++t)
      for (std::size_t r = 0; r < rank; ++r)
        if (ef.rows[r].get(order_[t])) {
          touches_[t].push_back(r);
          ++undecided_[r];
        }
    for (std::size_t r = 0; r < rank; ++r)
      if (undecided_[r] == 0 && parity_[r]) ++bound_;

    values_.assign(order_.size(), false);
    saved_.assign(order_.size(), false);
    limit_ = cfg.find_minimum ? inst.n() : inst.k();
  }

  SolveResult run() {
    const bool found = descend(0);
    SolveStats stats;
    stats.decisions = decisions_;
    stats.elapsed = deadline_.elapsed();
    if (timed_out_) return make_result(inst_, SolveStatus::timeout, std::nullopt, stats);

    if (cfg_.find_minimum) {
      // The search ran to completion with a shrinking limit.
      if (best_ && best_->popcount() <= inst_.k())
        return make_result(inst_, SolveStatus::sat, best_, stats, best_->popcount());
      return make_result(inst_, SolveStatus::unsat, std::nullopt, stats,
                         best_ ? std::optional<std::size_t>(best_->popcount()) : std::nullopt);
    }
    // With no free columns the single leaf is the whole coset.
    std::optional<std::size_t> min_weight;
    if (order_.empty()) min_weight = bound_;
    if (found) return make_result(inst_, SolveStatus::sat, best_, stats, min_weight);
    return make_result(inst_, SolveStatus::unsat, std::nullopt, stats, min_weight);
  }

 private:
  // Returns true when decision-mode search found a witness (stop).
  bool descend(std::size_t depth) {
    if (bound_ > limit_) return false;
    if (depth == order_.size()) return leaf();

    bool first = false;
    switch (cfg_.polarity) {
      case Polarity::false_first: first = false; break;
      case Polarity::true_first: first = true; break;
      case Polarity::cached: first = saved_[depth]; break;
    }
    for (bool value : {first, !first}) {
      if ((++decisions_ & timeout_check_mask) == 0 && deadline_.expired()) timed_out_ = true;
      if (timed_out_) return false;
      assign(depth, value);
      const bool stop = descend(depth + 1);
      unassign(depth, value);
      if (stop || timed_out_) return stop;
    }
    return false;
  }

  bool leaf() {
    BitVec x(inst_.n());
    for (std::size_t t = 0; t < order_.size(); ++t)
      if (values_[t]) x.set(order_[t]);
    for (std::size_t r = 0; r < ef_.rank; ++r)
      if (parity_[r]) x.set(ef_.pivot_cols[r]);
    if (cfg_.find_minimum) {
      best_ = std::move(x);
      limit_ = bound_ == 0 ? 0 : bound_ - 1;
      return bound_ == 0;  // nothing lighter than the zero vector
    }
    best_ = std::move(x);
    return true;
  }

  void assign(std::size_t t, bool value) {
    values_[t] = value;
    saved_[t] = value;
    if (value) ++bound_;
    for (std::size_t r : touches_[t]) {
      if (value) parity_[r] = !parity_[r];
      if (--undecided_[r] == 0 && parity_[r]) ++bound_;
    }
  }

  void unassign(std::size_t t, bool value) {
    for (auto it = touches_[t].rbegin(); it != touches_[t].rend(); ++it) {
      const std::size_t r = *it;
      if (undecided_[r]++ == 0 && parity_[r]) --bound_;
      if (value) parity_[r] = !parity_[r];
    }
    if (value) --bound_;
    values_[t] = false;
  }

  const CardXorInstance& inst_;
  const EngineConfig& cfg_;
  const gf2::EchelonForm& ef_;
  Deadline deadline_;

  std::vector<std::size_t> order_;                 // free columns, branch order
  std::vector<std::vector<std::size_t>> touches_;  // pivot rows per free column
  std::vector<std::size_t> undecided_;             // undecided free columns per row
  std::vector<bool> parity_;                       // running pivot value per row
  std::vector<bool> values_;
  std::vector<bool> saved_;
  std::size_t bound_ = 0;  // ones among decided free and determined pivot columns
  std::size_t limit_ = 0;
  std::uint64_t decisions_ = 0;
  bool timed_out_ = false;
  std::optional<BitVec> best_;
};

}  // namespace

SolveResult coset_bnb(const CardXorInstance& inst, const EngineConfig& cfg) {
  check_timeout(cfg);
  const auto start = Clock::now();
  const gf2::EchelonForm ef = gf2::eliminate(inst.xors);
  if (!ef.consistent) {
    SolveStats stats;
    stats.elapsed = Clock::now() - start;
    return make_result(inst, SolveStatus::unsat, std::nullopt, stats);
  }
  CosetSearch search(inst, cfg, ef);
  SolveResult r = search.run();
  r.stats.elapsed = Clock::now() - start;
  return r;
}

SolveResult solve(const CardXorInstance& inst, const EngineConfig& cfg,
                  const EncodingChoice& choice) {
  switch (cfg.engine) {
    case Engine::brute: return brute_force(inst, cfg);
    case Engine::bnb: return coset_bnb(inst, cfg);
    case Engine::external: return solve_external(inst, cfg, choice);
  }
  throw Error(ErrorCode::invalid_config, "unknown engine");
}

}  // namespace cardxor
