#include "cardxor/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "cardxor/error.hpp"
#include "cardxor/instance.hpp"
#include "cardxor/transition.hpp"

namespace cardxor::sweep {

Plan Plan::full_grid(std::size_t n, std::size_t k_step) {
  Plan p;
  p.n = n;
  if (k_step == 0) k_step = 1;
  for (std::size_t k = 0; k <= n; k += k_step) p.k_values.push_back(k);
  for (std::size_t m = 1; m <= n; ++m) p.m_values.push_back(m);
  return p;
}

void Plan::validate() const {
  if (n < 1) throw Error(ErrorCode::invalid_config, "n must be >= 1");
  if (trials < 1) throw Error(ErrorCode::invalid_config, "trials must be >= 1");
  for (std::size_t k : k_values)
    if (k > n) throw Error(ErrorCode::invalid_config, "k value outside [0, n]");
  for (std::size_t m : m_values)
    if (m < 1) throw Error(ErrorCode::invalid_config, "m values must be >= 1");
  if (engine.timeout.count() <= 0) throw Error(ErrorCode::invalid_config, "timeout must be > 0");
  if (encoding.cut < 3) throw Error(ErrorCode::invalid_config, "xor cut must be >= 3");
}

const char* to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::sat: return "sat";
    case RecordStatus::unsat: return "unsat";
    case RecordStatus::timeout: return "timeout";
    case RecordStatus::error: return "error";
  }
  return "error";
}

RecordStatus parse_record_status(std::string_view s) {
  if (s == "sat") return RecordStatus::sat;
  if (s == "unsat") return RecordStatus::unsat;
  if (s == "timeout") return RecordStatus::timeout;
  if (s == "error") return RecordStatus::error;
  throw Error(ErrorCode::invalid_config, "unknown status '" + std::string(s) + "'");
}

std::string encoding_label(const Plan& plan) {
  if (plan.engine.engine != Engine::external) return "none";
  return std::string(to_string(plan.encoding.encoding)) + "-" + to_string(plan.encoding.xor_mode);
}

namespace {

struct Cell {
  std::size_t k;
  std::size_t m;
  std::size_t trial;
};

Record solve_cell(const Plan& plan, const Cell& cell, const std::string& label) {
  Record rec;
  rec.master_seed = plan.master_seed;
  rec.n = plan.n;
  rec.k = cell.k;
  rec.m = cell.m;
  rec.trial = cell.trial;
  rec.seed = derive_seed(plan.master_seed, plan.n, cell.k, cell.m, cell.trial);
  rec.engine = to_string(plan.engine.engine);
  rec.encoding = label;
  try {
    const CardXorInstance inst = generate({plan.n, cell.k, cell.m, plan.master_seed, cell.trial});
    const SolveResult r = solve(inst, plan.engine, plan.encoding);
    switch (r.status) {
      case SolveStatus::sat: rec.status = RecordStatus::sat; break;
      case SolveStatus::unsat: rec.status = RecordStatus::unsat; break;
      case SolveStatus::timeout: rec.status = RecordStatus::timeout; break;
    }
    rec.time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(r.stats.elapsed).count());
    rec.decisions = r.stats.decisions;
    rec.min_weight = r.min_weight;
  } catch (const std::exception&) {
    rec.status = RecordStatus::error;
  }
  return rec;
}

// Cells need not satisfy m >= 1 here; stat_test may ask for m = 0.
std::vector<Record> run_cells(const Plan& plan) {
  std::vector<std::size_t> ks = plan.k_values;
  std::vector<std::size_t> ms = plan.m_values;
  std::sort(ks.begin(), ks.end());
  std::sort(ms.begin(), ms.end());

  std::vector<Cell> cells;
  cells.reserve(ks.size() * ms.size() * plan.trials);
  for (std::size_t k : ks)
    for (std::size_t m : ms)
      for (std::size_t t = 0; t < plan.trials; ++t) cells.push_back({k, m, t});

  const std::string label = encoding_label(plan);
  std::vector<Record> records(cells.size());
  std::size_t workers = plan.jobs ? plan.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(cells.size(), 1));

  // Each slot is written by exactly one worker; the output order is the
  // cell order, independent of scheduling.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
      records[i] = solve_cell(plan, cells[i], label);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return records;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

std::vector<Record> run(const Plan& plan) {
  plan.validate();
  return run_cells(plan);
}

std::vector<CellSummary> summarize(const std::vector<Record>& records,
                                   const SummaryOptions& options) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<const Record*>> cells;
  for (const Record& r : records) cells[{r.n, r.k, r.m}].push_back(&r);

  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (const auto& [key, recs] : cells) {
    CellSummary c;
    std::tie(c.n, c.k, c.m) = key;
    c.k_over_n = static_cast<double>(c.k) / static_cast<double>(c.n);
    c.s = static_cast<double>(c.m) / static_cast<double>(c.n);
    c.trials = recs.size();
    std::vector<double> times, decisions;
    for (const Record* r : recs) {
      switch (r->status) {
        case RecordStatus::sat: ++c.sat; break;
        case RecordStatus::unsat: ++c.unsat; break;
        case RecordStatus::timeout: ++c.timeouts; break;
        case RecordStatus::error: ++c.errors; break;
      }
      times.push_back(static_cast<double>(r->time_ms));
      decisions.push_back(static_cast<double>(r->decisions));
    }
    const std::size_t denom = options.exclude_timeouts ? c.trials - c.timeouts : c.trials;
    c.sat_fraction = denom ? static_cast<double>(c.sat) / static_cast<double>(denom) : 0.0;
    c.timeout_fraction = static_cast<double>(c.timeouts) / static_cast<double>(c.trials);
    c.median_time_ms = median(std::move(times));
    c.median_decisions = median(std::move(decisions));
    c.phi = c.n <= transition::max_exact_n ? transition::phi(c.n, c.k) : 0.0;
    out.push_back(c);
  }
  return out;
}

StatTestReport stat_test(const StatTestConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::invalid_config, "trials must be >= 1");
  if (!(cfg.alpha >= 1.0)) throw Error(ErrorCode::invalid_config, "alpha must be >= 1");

  StatTestReport rep;
  rep.side = cfg.side;
  rep.n = cfg.n;
  rep.k = cfg.k;
  rep.m = GenConfig::rows_for_density(cfg.n, cfg.s);
  rep.alpha = cfg.alpha;
  rep.trials = cfg.trials;
  rep.log2_count = transition::binom_sum_log2(cfg.n, cfg.k);

  const double m = static_cast<double>(rep.m);
  const bool holds = cfg.side == Side::sat ? rep.log2_count >= m + cfg.alpha
                                           : rep.log2_count <= m - cfg.alpha;
  if (!holds) {
    std::ostringstream msg;
    msg << "conditioning fails: log2 #F = " << rep.log2_count << ", ceil(sn) = " << rep.m
        << ", alpha = " << cfg.alpha;
    throw Error(ErrorCode::precondition_not_met, msg.str());
  }

  Plan plan;
  plan.n = cfg.n;
  plan.k_values = {cfg.k};
  plan.m_values = {rep.m};
  plan.trials = cfg.trials;
  plan.master_seed = cfg.master_seed;
  plan.engine = cfg.engine;
  plan.encoding = cfg.encoding;
  plan.jobs = cfg.jobs;
  const RecordStatus wanted = cfg.side == Side::sat ? RecordStatus::sat : RecordStatus::unsat;
  for (const Record& r : run_cells(plan))
    if (r.status == wanted) ++rep.successes;

  const double trials = static_cast<double>(rep.trials);
  rep.empirical_rate = static_cast<double>(rep.successes) / trials;
  rep.floor = 1.0 - std::exp2(-cfg.alpha);
  rep.sigma = std::sqrt(rep.floor * (1.0 - rep.floor) / trials);
  rep.threshold = rep.floor - 3.0 * rep.sigma;
  rep.passed = rep.empirical_rate >= rep.threshold;
  return rep;
}

void emit_csv(const std::vector<Record>& records, std::ostream& out) {
  out << csv_header << '\n';
  for (const Record& r : records) {
    out << r.master_seed << ',' << r.n << ',' << r.k << ',' << r.m << ',' << r.trial << ','
        << r.seed << ',' << r.engine << ',' << r.encoding << ',' << to_string(r.status) << ','
        << r.time_ms << ',' << r.decisions << ',';
    if (r.min_weight) out << *r.min_weight;
    out << '\n';
  }
}

namespace {

template <typename T>
bool parse_field(const std::string& tok, T& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

}  // namespace

std::vector<Record> parse_csv(std::istream& in) {
  std::vector<Record> out;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header) throw ParseError(lineno, "unexpected header");
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 12) throw ParseError(lineno, "expected 12 fields");
    Record r;
    bool ok = parse_field(f[0], r.master_seed) && parse_field(f[1], r.n) &&
              parse_field(f[2], r.k) && parse_field(f[3], r.m) && parse_field(f[4], r.trial) &&
              parse_field(f[5], r.seed) && parse_field(f[9], r.time_ms) &&
              parse_field(f[10], r.decisions);
    if (!ok) throw ParseError(lineno, "malformed numeric field");
    r.engine = f[6];
    r.encoding = f[7];
    try {
      r.status = parse_record_status(f[8]);
    } catch (const Error&) {
      throw ParseError(lineno, "unknown status '" + f[8] + "'");
    }
    if (!f[11].empty()) {
      std::size_t w = 0;
      if (!parse_field(f[11], w)) throw ParseError(lineno, "malformed min_weight");
      r.min_weight = w;
    }
    out.push_back(std::move(r));
  }
  return out;
}

const char* to_string(Metric m) {
  switch (m) {
    case Metric::sat_fraction: return "sat_fraction";
    case Metric::median_time: return "median_time";
    case Metric::timeout_fraction: return "timeout_fraction";
    case Metric::median_decisions: return "median_decisions";
  }
  return "sat_fraction";
}

Metric parse_metric(std::string_view name) {
  if (name == "sat_fraction") return Metric::sat_fraction;
  if (name == "median_time") return Metric::median_time;
  if (name == "timeout_fraction") return Metric::timeout_fraction;
  if (name == "median_decisions") return Metric::median_decisions;
  throw Error(ErrorCode::invalid_config, "unknown metric '" + std::string(name) + "'");
}

namespace {

double metric_value(const CellSummary& c, Metric m) {
  switch (m) {
    case Metric::sat_fraction: return c.sat_fraction;
    case Metric::median_time: return c.median_time_ms;
    case Metric::timeout_fraction: return c.timeout_fraction;
    case Metric::median_decisions: return c.median_decisions;
  }
  return 0.0;
}

// White to dark blue.
std::string shade(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [t](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", lerp(0xf7, 0x08), lerp(0xfb, 0x30), lerp(0xff, 0x6b));
  return buf;
}

std::vector<double> distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double min_gap(const std::vector<double>& v, double fallback) {
  double gap = fallback;
  for (std::size_t i = 1; i < v.size(); ++i) gap = std::min(gap, v[i] - v[i - 1]);
  return gap;
}

}  // namespace

void emit_heatmap(const std::vector<CellSummary>& summaries, Metric metric, std::ostream& out) {
  constexpr double width = 640, height = 560;
  constexpr double left = 70, right = 30, top = 40, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  std::vector<double> xs, ys;
  double max_value = 0.0;
  std::size_t n = 0;
  for (const CellSummary& c : summaries) {
    xs.push_back(c.k_over_n);
    ys.push_back(c.s);
    max_value = std::max(max_value, metric_value(c, metric));
    n = std::max(n, c.n);
  }
  xs = distinct(std::move(xs));
  ys = distinct(std::move(ys));
  const double dx = xs.empty() ? 1.0 : min_gap(xs, 1.0);
  const double dy = ys.empty() ? 1.0 : min_gap(ys, 1.0);
  const double x_lo = xs.empty() ? 0.0 : xs.front() - dx / 2;
  const double x_hi = xs.empty() ? 1.0 : xs.back() + dx / 2;
  const double y_lo = ys.empty() ? 0.0 : ys.front() - dy / 2;
  const double y_hi = ys.empty() ? 1.0 : ys.back() + dy / 2;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

  const bool fraction = metric == Metric::sat_fraction || metric == Metric::timeout_fraction;
  auto normalise = [&](double v) {
    if (fraction) return v;
    return max_value > 0 ? std::log1p(v) / std::log1p(max_value) : 0.0;
  };

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">n=" << n << "  metric=" << to_string(metric) << "</text>\n";
  out << "<g shape-rendering=\"crispEdges\">\n";
  for (const CellSummary& c : summaries) {
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"><title>k=%zu m=%zu %s=%g</title></rect>\n",
                  px(c.k_over_n - dx / 2), py(c.s + dy / 2), px(c.k_over_n + dx / 2) - px(c.k_over_n - dx / 2),
                  py(c.s - dy / 2) - py(c.s + dy / 2), shade(normalise(metric_value(c, metric))).c_str(),
                  c.k, c.m, to_string(metric), metric_value(c, metric));
    out << buf;
  }
  out << "</g>\n";

  // Transition curve over the k values present.
  std::map<double, double> curve;
  for (const CellSummary& c : summaries) curve.emplace(c.k_over_n, c.phi);
  if (!curve.empty()) {
    out << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& [x, y] : curve) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", px(x),
                    py(std::clamp(y, y_lo, y_hi)));
      out << buf;
      first = false;
    }
    out << "\"/>\n";
  }

  // Axes.
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, pw, ph);
  out << buf;
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
    const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">%.2f</text>\n",
                  px(fx), top + ph + 16, fx);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">%.2f</text>\n",
                  left - 6, py(fy) + 4, fy);
    out << buf;
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">k/n</text>\n";
  out << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " << top + ph / 2 << ")\">s = m/n</text>\n";
  out << "</svg>\n";
}

}  // namespace cardxor::sweep
