#ifndef CARDXOR_TRANSITION_HPP
#define CARDXOR_TRANSITION_HPP

#include <cstddef>

namespace cardxor::transition {

/// Largest n for which exact binomial sums are computed.
inline constexpr std::size_t max_exact_n = 4096;

/// Binary entropy, base 2, with H(0) = H(1) = 0.
double entropy(double mu);

/// log2 of the Hamming-ball volume sum_{w=0}^{k} C(n, w), summed exactly.
/// Throws Error(domain_error) unless 1 <= n <= max_exact_n and k <= n.
double binom_sum_log2(std::size_t n, std::size_t k);

/// Satisfiability threshold density: binom_sum_log2(n, k) / n.
double phi(std::size_t n, std::size_t k);

/// Density below which the formula is satisfiable w.h.p.:
///   H(k/n) - log2(8k(1 - k/n)) / n   for 0 < k < n/2
///   1 - 1/n                          for n/2 <= k <= n
/// Throws Error(domain_error) for k = 0, where the bound is undefined.
double lower_bound(std::size_t n, std::size_t k);

/// Density above which the formula is unsatisfiable w.h.p.:
/// H(k/n) for k < n/2, 1 for n/2 <= k <= n.
double upper_bound(std::size_t n, std::size_t k);

enum class Branch { below_half, at_or_above_half };

struct Report {
  std::size_t n = 0;
  std::size_t k = 0;
  double phi = 0.0;
  double lower_s = 0.0;
  double upper_s = 0.0;
  // False only for k = 0: lower_s is then reported as 0 (= phi).
  bool lower_defined = true;
  Branch branch = Branch::below_half;
};

Report report(std::size_t n, std::size_t k);

enum class Region { sat_whp, unsat_whp, critical };

struct RegionPrediction {
  Region region = Region::critical;
  double margin = 0.0;  // |s - phi|
};

/// sat_whp if s <= phi - margin, unsat_whp if s >= phi + margin, otherwise
/// critical. s exactly at phi is always critical.
RegionPrediction classify(std::size_t n, std::size_t k, double s, double margin);

const char* to_string(Branch b);
const char* to_string(Region r);

}  // namespace cardxor::transition

#endif  // CARDXOR_TRANSITION_HPP
