#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace repsieve {

/// A second-order integer recurrence x_{n+1} = p*x_n + q*x_{n-1} with seeds
/// x_0 and x_1. Indices start at 0.
struct RecurrenceSpec {
  std::string name;
  std::int64_t coeff_p = 0;
  std::int64_t coeff_q = 0;
  std::int64_t seed0 = 0;
  std::int64_t seed1 = 0;

  friend bool operator==(const RecurrenceSpec&, const RecurrenceSpec&) = default;

  /// True when both specs generate the same sequence (names are ignored).
  bool same_sequence(const RecurrenceSpec& other) const {
    return coeff_p == other.coeff_p && coeff_q == other.coeff_q &&
           seed0 == other.seed0 && seed1 == other.seed1;
  }
};

/// B_0 = 0, B_1 = 1, B_{n+1} = 6 B_n - B_{n-1}.
RecurrenceSpec balancing();
/// C_0 = 1, C_1 = 3, same recurrence as balancing().
RecurrenceSpec lucas_balancing();
std::optional<RecurrenceSpec> builtin_spec(std::string_view name);

struct BigTerm {
  std::uint64_t index = 0;
  mpz_class value;
};

/// Exact n-th term via 2x2 matrix powering (index doubling).
BigTerm term(const RecurrenceSpec& spec, std::uint64_t n);

/// Terms 0 .. count-1 by linear iteration.
std::vector<mpz_class> terms(const RecurrenceSpec& spec, std::size_t count);

/// term(n) * term(n+1) * ... * term(n+k). Requires n >= 1.
mpz_class consecutive_product(const RecurrenceSpec& spec, std::uint64_t n, std::uint64_t k);

struct DivisibilityPair {
  bool index_divides = false;  // m | n
  bool term_divides = false;   // term(m) | term(n)
  friend bool operator==(const DivisibilityPair&, const DivisibilityPair&) = default;
};

/// Both sides of the strong divisibility property. Only defined for the
/// balancing sequence; other specs are rejected with std::invalid_argument.
DivisibilityPair divides_index_iff_divides_term(const RecurrenceSpec& spec, std::uint64_t m,
                                                std::uint64_t n);

}  // namespace repsieve
