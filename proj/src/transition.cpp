#include "cardxor/transition.hpp"

#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "cardxor/error.hpp"

namespace cardxor::transition {

namespace {

using boost::multiprecision::cpp_int;

void check_domain(std::size_t n, std::size_t k) {
  if (n < 1 || n > max_exact_n)
    throw Error(ErrorCode::domain_error,
                "n must lie in [1, " + std::to_string(max_exact_n) + "], got " + std::to_string(n));
  if (k > n)
    throw Error(ErrorCode::domain_error, "k must lie in [0, n]");
}

double log2_big(const cpp_int& v) {
  const std::size_t top = boost::multiprecision::msb(v);
  if (top < 63) return std::log2(static_cast<double>(v.convert_to<std::uint64_t>()));
  const std::size_t shift = top - 62;
  const std::uint64_t head = static_cast<cpp_int>(v >> shift).convert_to<std::uint64_t>();
  return std::log2(static_cast<double>(head)) + static_cast<double>(shift);
}

}  // namespace

double entropy(double mu) {
  if (mu <= 0.0 || mu >= 1.0) return 0.0;
  return -mu * std::log2(mu) - (1.0 - mu) * std::log2(1.0 - mu);
}

double binom_sum_log2(std::size_t n, std::size_t k) {
  check_domain(n, k);
  if (k == n) return static_cast<double>(n);
  cpp_int term = 1;
  cpp_int sum = 1;
  for (std::size_t w = 0; w < k; ++w) {
    term *= n - w;
    term /= w + 1;
    sum += term;
  }
  return log2_big(sum);
}

double phi(std::size_t n, std::size_t k) {
  return binom_sum_log2(n, k) / static_cast<double>(n);
}

double lower_bound(std::size_t n, std::size_t k) {
  check_domain(n, k);
  if (k == 0) throw Error(ErrorCode::domain_error, "lower bound undefined for k = 0");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  if (2 * k < n) return entropy(kd / nd) - std::log2(8.0 * kd * (1.0 - kd / nd)) / nd;
  return 1.0 - 1.0 / nd;
}

double upper_bound(std::size_t n, std::size_t k) {
  check_domain(n, k);
  if (2 * k < n) return entropy(static_cast<double>(k) / static_cast<double>(n));
  return 1.0;
}

Report report(std::size_t n, std::size_t k) {
  Report r;
  r.n = n;
  r.k = k;
  r.phi = phi(n, k);
  r.upper_s = upper_bound(n, k);
  r.branch = 2 * k < n ? Branch::below_half : Branch::at_or_above_half;
  if (k == 0) {
    r.lower_defined = false;
    r.lower_s = 0.0;
  } else {
    r.lower_s = lower_bound(n, k);
  }
  return r;
}

RegionPrediction classify(std::size_t n, std::size_t k, double s, double margin) {
  const double p = phi(n, k);
  RegionPrediction out;
  out.margin = std::abs(s - p);
  if (s < p && s <= p - margin)
    out.region = Region::sat_whp;
  else if (s > p && s >= p + margin)
    out.region = Region::unsat_whp;
  else
    out.region = Region::critical;
  return out;
}

const char* to_string(Branch b) {
  return b == Branch::below_half ? "below-half" : "at-or-above-half";
}

const char* to_string(Region r) {
  switch (r) {
    case Region::sat_whp: return "SAT-whp";
    case Region::unsat_whp: return "UNSAT-whp";
    case Region::critical: return "critical";
  }
  return "critical";
}

}  // namespace cardxor::transition
