#include "cardxor/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cardxor/error.hpp"

namespace cardxor {

std::size_t GenConfig::rows_for_density(std::size_t n, double s) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw Error(ErrorCode::invalid_config, "density must be a finite value >= 0");
  const double prod = s * static_cast<double>(n);
  // s = m/n rounds to within an ulp of m after multiplying back.
  const double nearest = std::round(prod);
  if (std::abs(prod - nearest) <= 1e-9 * std::max(1.0, nearest))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(prod));
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t n, std::size_t k,
                          std::size_t m, std::uint64_t trial) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  h = mix64(h ^ static_cast<std::uint64_t>(k));
  h = mix64(h ^ static_cast<std::uint64_t>(m));
  h = mix64(h ^ trial);
  return h;
}

CardXorInstance generate(const GenConfig& cfg) {
  if (cfg.n < 1) throw Error(ErrorCode::invalid_config, "n must be >= 1");
  if (cfg.k > cfg.n) throw Error(ErrorCode::invalid_config, "k must lie in [0, n]");

  const std::uint64_t seed = derive_seed(cfg.master_seed, cfg.n, cfg.k, cfg.m, cfg.trial);
  // mt19937_64's output sequence is fixed by the standard; raw words only, no
  // distributions, so instances are identical across standard libraries.
  std::mt19937_64 rng(seed);

  std::vector<BitVec> rows;
  rows.reserve(cfg.m);
  BitVec rhs(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    BitVec row(cfg.n);
    for (std::size_t base = 0; base < cfg.n; base += BitVec::word_bits) {
      std::uint64_t word = rng();
      for (std::size_t b = 0; b < BitVec::word_bits && base + b < cfg.n; ++b)
        if ((word >> b) & 1u) row.set(base + b);
    }
    rows.push_back(std::move(row));
    if (rng() & 1u) rhs.set(i);
  }

  CardXorInstance inst;
  inst.xors = XorSystem(cfg.n, std::move(rows), std::move(rhs));
  inst.card = {cfg.n, cfg.k};
  inst.seed = seed;
  inst.s = static_cast<double>(cfg.m) / static_cast<double>(cfg.n);
  return inst;
}

bool is_witness(const CardXorInstance& inst, const BitVec& x) {
  return x.width() == inst.n() && x.popcount() <= inst.k() && gf2::satisfies(inst.xors, x);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
bool parse_number(const std::string& tok, T& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

void write_native(const CardXorInstance& inst, std::ostream& out) {
  out << "cardxor " << inst.n() << ' ' << inst.m() << ' ' << inst.k() << ' '
      << format_double(inst.s) << ' ' << inst.seed << '\n';
  for (std::size_t i = 0; i < inst.m(); ++i)
    out << inst.xors.rows[i].to_hex() << ' ' << (inst.xors.rhs.get(i) ? 1 : 0) << '\n';
}

CardXorInstance read_native(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!is_blank(line)) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(lineno + 1, "missing header");
  auto head = split_ws(line);
  if (head.size() != 6 || head[0] != "cardxor")
    throw ParseError(lineno, "expected 'cardxor n m k s seed'");
  std::size_t n = 0, m = 0, k = 0;
  double s = 0;
  std::uint64_t seed = 0;
  if (!parse_number(head[1], n) || !parse_number(head[2], m) || !parse_number(head[3], k) ||
      !parse_number(head[4], s) || !parse_number(head[5], seed))
    throw ParseError(lineno, "malformed header field");
  if (n < 1) throw ParseError(lineno, "n must be >= 1");
  if (k > n) throw ParseError(lineno, "k exceeds n");
  if (!(s >= 0.0)) throw ParseError(lineno, "density must be >= 0");

  std::vector<BitVec> rows;
  rows.reserve(m);
  BitVec rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!next_line()) throw ParseError(lineno + 1, "expected " + std::to_string(m) + " rows, got " + std::to_string(i));
    auto toks = split_ws(line);
    if (toks.size() != 2) throw ParseError(lineno, "expected '<hex row> <rhs bit>'");
    BitVec row;
    if (!BitVec::from_hex(toks[0], n, row)) throw ParseError(lineno, "bad hex row");
    if (toks[1] == "1")
      rhs.set(i);
    else if (toks[1] != "0")
      throw ParseError(lineno, "rhs must be 0 or 1");
    rows.push_back(std::move(row));
  }
  if (next_line()) throw ParseError(lineno, "trailing content after last row");

  CardXorInstance inst;
  inst.xors = XorSystem(n, std::move(rows), std::move(rhs));
  inst.card = {n, k};
  inst.seed = seed;
  inst.s = s;
  return inst;
}

CardXorInstance load_native(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  return read_native(in);
}

void save_native(const CardXorInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  write_native(inst, out);
  if (!out) throw Error(ErrorCode::io_error, "write failed: " + path);
}

}  // namespace cardxor
