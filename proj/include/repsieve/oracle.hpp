#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "repsieve/target.hpp"

namespace repsieve {

/// One exact solution: term(n) * ... * term(n + k) = a * R_m.
struct Hit {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t m = 0;
  std::uint32_t a = 0;
  mpz_class value;

  friend bool operator==(const Hit& x, const Hit& y) {
    return x.n == y.n && x.k == y.k && x.m == y.m && x.a == y.a && x.value == y.value;
  }
};

/// Orders by n, then k, then m.
bool hit_less(const Hit& x, const Hit& y);

struct ScanResult {
  TargetForm target;
  std::uint64_t max_n = 0;
  std::uint64_t max_digits = 0;
  std::vector<Hit> hits;
  /// Repdigit values with more than max_digits digits; reported, not dropped.
  std::vector<Hit> out_of_range;
};

/// Exhaustive scan over start indices min_n .. max_n. Fixed windows are
/// evaluated at every start; open windows (k >= K) cover every k with
/// n + k <= max_n. Every product is computed exactly and classified.
ScanResult scan(const TargetForm& target, std::uint64_t max_n, std::uint64_t max_digits,
                unsigned threads = 1);

/// Every solution with min_m <= m <= max_m, found by direct enumeration.
/// Complete only when terms from index min_n on are positive and strictly
/// increasing; that is guaranteed for q = -1, p >= 2 and
/// 0 <= x_{min_n - 1} < x_{min_n}, and any other spec is rejected.
std::vector<Hit> bounded_solutions(const TargetForm& target, std::uint64_t max_m);

/// True when x_{n+1} > x_n > 0 holds for all n >= min_n (checked through the
/// sufficient condition above).
bool has_growth_lemma(const RecurrenceSpec& spec, std::uint64_t min_n);

/// Exact big-integer check of a claimed solution against the target.
bool satisfies(const TargetForm& target, std::uint64_t n, std::uint64_t k, std::uint64_t m,
               std::uint32_t a);

std::string to_tsv(const ScanResult& result);

}  // namespace repsieve
