// cardxor: command-line front end for generating, predicting, encoding,
// solving and sweeping 1-CARD-XOR instances.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cardxor/encode.hpp"
#include "cardxor/error.hpp"
#include "cardxor/instance.hpp"
#include "cardxor/solve.hpp"
#include "cardxor/sweep.hpp"
#include "cardxor/transition.hpp"

using namespace cardxor;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_internal = 2;
constexpr int exit_sat = 10;
constexpr int exit_unsat = 20;
constexpr int exit_timeout = 30;

constexpr const char* solver_env = "CARDXOR_SOLVER";

// key=value lines, or an aligned table with --pretty.
class Report {
 public:
  template <typename T>
  void add(std::string key, const T& value) {
    std::ostringstream ss;
    ss << std::setprecision(17) << value;
    rows_.emplace_back(std::move(key), ss.str());
  }
  void add(std::string key, bool value) { rows_.emplace_back(std::move(key), value ? "true" : "false"); }
  void add(std::string key, const char* value) { rows_.emplace_back(std::move(key), value); }

  void print(std::ostream& out, bool pretty) const {
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) width = std::max(width, k.size());
    for (const auto& [k, v] : rows_) {
      if (pretty)
        out << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << '\n';
      else
        out << k << '=' << v << '\n';
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

// Flags shared by every subcommand that runs an engine.
struct EngineFlags {
  std::string engine = "bnb";
  long long timeout_ms = 10'000;
  std::string polarity = "false-first";
  std::string encoding = "bdd";
  std::string xor_mode = "native";
  int cut = 4;
  std::string external_cmd;

  void attach(CLI::App* app) {
    app->add_option("--engine", engine, "brute | bnb | external")->capture_default_str();
    app->add_option("--timeout-ms", timeout_ms, "Per-instance time limit")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--polarity", polarity, "false-first | true-first | cached (bnb)")->capture_default_str();
    app->add_option("--encoding", encoding, "adder | bdd | cardnet (external)")->capture_default_str();
    app->add_option("--xor-mode", xor_mode, "native | blast (external)")->capture_default_str();
    app->add_option("--cut", cut, "Maximum XOR piece width when blasting")->capture_default_str()->check(CLI::Range(3, 64));
    app->add_option("--external-cmd", external_cmd,
                    std::string("Solver command; {cnf} is replaced by the file path. Falls back to $") + solver_env);
  }

  EngineConfig engine_config() const {
    EngineConfig cfg;
    cfg.engine = parse_engine(engine);
    cfg.timeout = std::chrono::milliseconds(timeout_ms);
    cfg.polarity = parse_polarity(polarity);
    cfg.external_cmd = external_cmd;
    if (cfg.external_cmd.empty())
      if (const char* env = std::getenv(solver_env)) cfg.external_cmd = env;
    return cfg;
  }

  EncodingChoice encoding_choice() const {
    return {parse_card_encoding(encoding), parse_xor_mode(xor_mode), cut};
  }
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw Error(ErrorCode::io_error, "cannot write " + path);
  return file;
}

// Bit string (optionally "witness=..."), or SAT-competition `v` lines.
BitVec read_witness(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  BitVec x(n);
  bool have_v = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == 'c' || line[0] == 's') continue;
    if (line[0] == 'v') {
      have_v = true;
      std::istringstream ss(line.substr(1));
      long long lit = 0;
      while (ss >> lit)
        if (lit > 0 && static_cast<std::size_t>(lit) <= n) x.set(static_cast<std::size_t>(lit - 1));
      continue;
    }
    if (have_v) throw Error(ErrorCode::parse_error, "unexpected line after v lines: " + line);
    std::string bits = line.rfind("witness=", 0) == 0 ? line.substr(8) : line;
    if (bits.size() != n || !BitVec::from_bits(bits, x))
      throw Error(ErrorCode::parse_error, "witness must be " + std::to_string(n) + " characters of 0/1");
    return x;
  }
  if (!have_v) throw Error(ErrorCode::parse_error, "no witness in " + path);
  return x;
}

bool is_usage(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_config:
    case ErrorCode::parse_error:
    case ErrorCode::domain_error:
    case ErrorCode::instance_too_large:
    case ErrorCode::precondition_not_met:
    case ErrorCode::io_error:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random 1-CARD-XOR instances: generation, threshold prediction, encoding and solving"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Aligned human-readable output");
  app.fallthrough();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  std::size_t n = 0, k = 0, m = 0, trial = 0;
  double s = 0.0;
  std::uint64_t seed = 0;
  std::string out_path, in_path;
  auto* gen_m = gen->add_option("--m", m, "Number of XOR rows");
  auto* gen_s = gen->add_option("--s", s, "Density; m = ceil(s n)")->check(CLI::NonNegativeNumber);
  gen_m->excludes(gen_s);
  gen->add_option("--n", n, "Variables")->required()->check(CLI::PositiveNumber);
  gen->add_option("--k", k, "Cardinality bound")->required();
  gen->add_option("--seed", seed, "Master seed")->required();
  gen->add_option("--trial", trial, "Trial index")->capture_default_str();
  gen->add_option("-o,--out", out_path, "Output .cx file (default stdout)");

  // predict
  auto* predict = app.add_subcommand("predict", "Threshold and bounds for (n, k)");
  double margin = 0.0;
  predict->add_option("--n", n, "Variables")->required()->check(CLI::PositiveNumber);
  predict->add_option("--k", k, "Cardinality bound")->required();
  auto* predict_s = predict->add_option("--s", s, "Classify this density");
  predict->add_option("--margin", margin, "Classification margin")->capture_default_str()->check(CLI::NonNegativeNumber);

  // encode
  auto* encode = app.add_subcommand("encode", "Write the instance as extended DIMACS");
  EngineFlags enc_flags;
  encode->add_option("-i,--in", in_path, "Instance .cx")->required()->check(CLI::ExistingFile);
  encode->add_option("--encoding", enc_flags.encoding, "adder | bdd | cardnet")->capture_default_str();
  encode->add_option("--xor-mode", enc_flags.xor_mode, "native | blast")->capture_default_str();
  encode->add_option("--cut", enc_flags.cut, "Maximum XOR piece width when blasting")->capture_default_str()->check(CLI::Range(3, 64));
  encode->add_option("-o,--out", out_path, "Output .cnf (default stdout)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance (exit 10 sat, 20 unsat, 30 timeout)");
  EngineFlags solve_flags;
  bool find_minimum = false;
  std::string witness_out;
  solve_cmd->add_option("-i,--in", in_path, "Instance .cx")->required()->check(CLI::ExistingFile);
  solve_flags.attach(solve_cmd);
  solve_cmd->add_flag("--find-minimum", find_minimum, "bnb: report the exact coset minimum weight");
  solve_cmd->add_option("--witness-out", witness_out, "Write the witness bit string here");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a (k, m) grid and write CSV records");
  EngineFlags sweep_flags;
  std::vector<std::size_t> k_values, m_values;
  std::size_t k_step = 1, trials = 1, jobs = 1;
  std::string svg_path, metric_name = "sat_fraction";
  sweep_cmd->add_option("--n", n, "Variables")->required()->check(CLI::PositiveNumber);
  auto* kv = sweep_cmd->add_option("--k-values", k_values, "Explicit k values")->delimiter(',');
  auto* ks = sweep_cmd->add_option("--k-step", k_step, "k = 0..n in this step")->check(CLI::PositiveNumber);
  kv->excludes(ks);
  sweep_cmd->add_option("--m-values", m_values, "Explicit m values (default 1..n)")->delimiter(',');
  sweep_cmd->add_option("--trials", trials, "Trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "Master seed")->required();
  sweep_cmd->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("-o,--out", out_path, "Output .csv (default stdout)");
  sweep_cmd->add_option("--svg", svg_path, "Also write a heatmap");
  sweep_cmd->add_option("--metric", metric_name, "Heatmap metric")->capture_default_str();

  // stat-test
  auto* stat_cmd = app.add_subcommand("stat-test", "Check the conditional satisfiability floor");
  EngineFlags stat_flags;
  double alpha = 1.0;
  std::string side = "sat";
  stat_cmd->add_option("--n", n, "Variables")->required()->check(CLI::PositiveNumber);
  stat_cmd->add_option("--k", k, "Cardinality bound")->required();
  stat_cmd->add_option("--s", s, "Density")->required()->check(CLI::NonNegativeNumber);
  stat_cmd->add_option("--alpha", alpha, "Gap parameter")->capture_default_str();
  stat_cmd->add_option("--trials", trials, "Instances")->capture_default_str()->check(CLI::PositiveNumber);
  stat_cmd->add_option("--side", side, "sat | unsat")->capture_default_str()->check(CLI::IsMember({"sat", "unsat"}));
  stat_cmd->add_option("--seed", seed, "Master seed")->required();
  stat_cmd->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  stat_flags.attach(stat_cmd);

  // verify
  auto* verify = app.add_subcommand("verify", "Check a witness against an instance (exit 0 valid, 1 invalid)");
  std::string witness_path;
  verify->add_option("-i,--in", in_path, "Instance .cx")->required()->check(CLI::ExistingFile);
  verify->add_option("-w,--witness", witness_path, "Bit string or v-line file")->required()->check(CLI::ExistingFile);

  // heatmap
  auto* heatmap = app.add_subcommand("heatmap", "Render sweep records as SVG");
  bool exclude_timeouts = false;
  heatmap->add_option("-i,--in", in_path, "Records .csv")->required()->check(CLI::ExistingFile);
  heatmap->add_option("--metric", metric_name, "sat_fraction | median_time | timeout_fraction | median_decisions")->capture_default_str();
  heatmap->add_flag("--exclude-timeouts", exclude_timeouts, "Drop timeouts from sat fractions");
  heatmap->add_option("-o,--out", out_path, "Output .svg (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  const bool solving = solve_cmd->parsed();
  try {
    Report rep;
    if (gen->parsed()) {
      GenConfig cfg{n, k, *gen_s ? GenConfig::rows_for_density(n, s) : m, seed, trial};
      const CardXorInstance inst = generate(cfg);
      std::ofstream file;
      write_native(inst, open_out(out_path, file));
      return exit_ok;
    }

    if (predict->parsed()) {
      const auto r = transition::report(n, k);
      rep.add("n", r.n);
      rep.add("k", r.k);
      rep.add("phi", r.phi);
      rep.add("lower", r.lower_s);
      rep.add("lower_defined", r.lower_defined);
      rep.add("upper", r.upper_s);
      rep.add("branch", transition::to_string(r.branch));
      if (*predict_s) {
        const auto c = transition::classify(n, k, s, margin);
        rep.add("s", s);
        rep.add("region", transition::to_string(c.region));
        rep.add("distance", c.margin);
      }
      rep.print(std::cout, pretty);
      return exit_ok;
    }

    if (encode->parsed()) {
      const CardXorInstance inst = load_native(in_path);
      std::ofstream file;
      write_dimacs(encode_instance(inst, enc_flags.encoding_choice()), open_out(out_path, file));
      return exit_ok;
    }

    if (solving) {
      const CardXorInstance inst = load_native(in_path);
      EngineConfig cfg = solve_flags.engine_config();
      cfg.find_minimum = find_minimum;
      const SolveResult r = solve(inst, cfg, solve_flags.encoding_choice());
      rep.add("status", to_string(r.status));
      rep.add("engine", to_string(cfg.engine));
      std::ostringstream ms;
      ms << std::fixed << std::setprecision(3) << std::chrono::duration<double, std::milli>(r.stats.elapsed).count();
      rep.add("time_ms", ms.str());
      rep.add("decisions", r.stats.decisions);
      if (cfg.engine == Engine::external) rep.add("propagations", r.stats.propagations);
      if (r.min_weight) rep.add("min_weight", *r.min_weight);
      if (r.witness) {
        rep.add("weight", r.witness->popcount());
        rep.add("witness", r.witness->to_bits());
        if (!witness_out.empty()) {
          std::ofstream w(witness_out);
          w << r.witness->to_bits() << '\n';
          if (!w) throw Error(ErrorCode::io_error, "cannot write " + witness_out);
        }
      }
      rep.print(std::cout, pretty);
      switch (r.status) {
        case SolveStatus::sat: return exit_sat;
        case SolveStatus::unsat: return exit_unsat;
        case SolveStatus::timeout: return exit_timeout;
      }
      return exit_internal;
    }

    if (sweep_cmd->parsed()) {
      sweep::Plan plan = sweep::Plan::full_grid(n, k_step);
      if (!k_values.empty()) plan.k_values = k_values;
      if (!m_values.empty()) plan.m_values = m_values;
      plan.trials = trials;
      plan.master_seed = seed;
      plan.engine = sweep_flags.engine_config();
      plan.encoding = sweep_flags.encoding_choice();
      plan.jobs = jobs;
      const sweep::Metric metric = sweep::parse_metric(metric_name);
      const auto records = sweep::run(plan);
      {
        std::ofstream file;
        sweep::emit_csv(records, open_out(out_path, file));
      }
      if (!svg_path.empty()) {
        std::ofstream svg(svg_path);
        if (!svg) throw Error(ErrorCode::io_error, "cannot write " + svg_path);
        sweep::emit_heatmap(sweep::summarize(records), metric, svg);
      }
      if (!out_path.empty() && out_path != "-") {
        std::size_t errors = 0, timeouts = 0;
        for (const auto& r : records) {
          errors += r.status == sweep::RecordStatus::error;
          timeouts += r.status == sweep::RecordStatus::timeout;
        }
        rep.add("records", records.size());
        rep.add("timeouts", timeouts);
        rep.add("errors", errors);
        rep.print(std::cout, pretty);
      }
      return exit_ok;
    }

    if (stat_cmd->parsed()) {
      sweep::StatTestConfig cfg;
      cfg.n = n;
      cfg.k = k;
      cfg.s = s;
      cfg.alpha = alpha;
      cfg.trials = trials;
      cfg.master_seed = seed;
      cfg.side = side == "sat" ? sweep::Side::sat : sweep::Side::unsat;
      cfg.engine = stat_flags.engine_config();
      cfg.encoding = stat_flags.encoding_choice();
      cfg.jobs = jobs;
      const auto r = sweep::stat_test(cfg);
      rep.add("side", side.c_str());
      rep.add("n", r.n);
      rep.add("k", r.k);
      rep.add("m", r.m);
      rep.add("alpha", r.alpha);
      rep.add("log2_count", r.log2_count);
      rep.add("trials", r.trials);
      rep.add("successes", r.successes);
      rep.add("rate", r.empirical_rate);
      rep.add("floor", r.floor);
      rep.add("sigma", r.sigma);
      rep.add("threshold", r.threshold);
      rep.add("passed", r.passed);
      rep.print(std::cout, pretty);
      return r.passed ? exit_ok : 1;
    }

    if (verify->parsed()) {
      const CardXorInstance inst = load_native(in_path);
      const BitVec x = read_witness(witness_path, inst.n());
      const bool xor_ok = gf2::satisfies(inst.xors, x);
      const bool card_ok = x.popcount() <= inst.k();
      rep.add("valid", xor_ok && card_ok);
      rep.add("xors", xor_ok);
      rep.add("weight", x.popcount());
      rep.add("k", inst.k());
      rep.print(std::cout, pretty);
      return xor_ok && card_ok ? exit_ok : 1;
    }

    if (heatmap->parsed()) {
      std::ifstream in(in_path);
      const auto records = sweep::parse_csv(in);
      std::ofstream file;
      sweep::emit_heatmap(sweep::summarize(records, {exclude_timeouts}), sweep::parse_metric(metric_name),
                          open_out(out_path, file));
      return exit_ok;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return is_usage(e.code()) ? exit_usage : exit_internal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_internal;
  }
  return exit_usage;
}
