#include "cardxor/cnf.hpp"

#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cardxor/error.hpp"

namespace cardxor {

namespace {

std::size_t dimacs_line_count(const CnfFormula& cnf) {
  std::size_t count = cnf.clauses.size();
  for (const XorClause& x : cnf.xor_clauses)
    if (!x.vars.empty() || x.parity) ++count;
  return count;
}

}  // namespace

void write_dimacs(const CnfFormula& cnf, std::ostream& out) {
  out << "p cnf " << cnf.num_vars << ' ' << dimacs_line_count(cnf) << '\n';
  for (const Clause& c : cnf.clauses) {
    for (Lit l : c) out << l << ' ';
    out << "0\n";
  }
  for (const XorClause& x : cnf.xor_clauses) {
    if (x.vars.empty()) {
      if (x.parity) out << "0\n";
      continue;
    }
    out << 'x';
    for (std::size_t i = 0; i < x.vars.size(); ++i) {
      const int v = (i == 0 && !x.parity) ? -x.vars[i] : x.vars[i];
      out << ' ' << v;
    }
    out << " 0\n";
  }
}

CnfFormula read_dimacs(std::istream& in) {
  CnfFormula cnf;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c') continue;
    std::istringstream ss(line.substr(first));
    if (line[first] == 'p') {
      std::string p, fmt;
      std::size_t nclauses = 0;
      if (!(ss >> p >> fmt >> cnf.num_vars >> nclauses) || fmt != "cnf" || cnf.num_vars < 0)
        throw ParseError(lineno, "malformed problem line");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause before problem line");
    bool is_xor = false;
    if (line[first] == 'x') {
      is_xor = true;
      ss.get();
    }
    std::vector<int> lits;
    long v = 0;
    bool terminated = false;
    while (ss >> v) {
      if (v == 0) {
        terminated = true;
        break;
      }
      if (std::labs(v) > cnf.num_vars) throw ParseError(lineno, "literal exceeds variable count");
      lits.push_back(static_cast<int>(v));
    }
    if (!terminated) throw ParseError(lineno, "clause not terminated by 0");
    if (is_xor) {
      XorClause x;
      x.parity = true;
      for (int l : lits) {
        if (l < 0) x.parity = !x.parity;
        x.vars.push_back(std::abs(l));
      }
      cnf.xor_clauses.push_back(std::move(x));
    } else {
      cnf.clauses.push_back(std::move(lits));
    }
  }
  if (!have_header) throw ParseError(lineno + 1, "missing problem line");
  return cnf;
}

}  // namespace cardxor
