#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repsieve/recurrence.hpp"

namespace repsieve {

/// Which window sizes k a target covers: exactly one k, or every k >= K.
/// A window of size k is the product of k + 1 consecutive terms.
struct Window {
  enum class Kind { fixed, all_from };
  Kind kind = Kind::fixed;
  std::uint64_t k = 0;

  static Window fixed(std::uint64_t k) { return {Kind::fixed, k}; }
  static Window all_from(std::uint64_t k) { return {Kind::all_from, k}; }

  bool contains(std::uint64_t size) const { return kind == Kind::fixed ? size == k : size >= k; }
  std::string describe() const;
  friend bool operator==(const Window&, const Window&) = default;
};

/// term(n) * ... * term(n + k) = a * (g^m - 1)/(g - 1) with n >= min_n,
/// m >= min_m, a in `digits` and k in `window`.
struct TargetForm {
  RecurrenceSpec spec;
  Window window;
  std::vector<std::uint32_t> digits;
  std::uint32_t base = 10;
  std::uint64_t min_m = 1;
  std::uint64_t min_n = 1;

  /// Throws std::invalid_argument on malformed targets.
  void validate() const;
  TargetForm with_digit(std::uint32_t a) const;
  TargetForm with_window(Window w) const;
  bool has_digit(std::uint32_t a) const;
  friend bool operator==(const TargetForm&, const TargetForm&) = default;
};

/// The four built-in target equations (R_m is the base-10 repunit):
///   1: B_n = a R_m, a != 6, m >= 2
///   2: B_n ... B_{n+k} = a R_m, k >= 1, m >= 2
///   3: C_n = a R_m
///   4: C_n ... C_{n+k} = a R_m, k >= 1
TargetForm equation_target(int equation);

/// Moduli the prover applies by default for each equation, in argument order.
std::vector<std::uint64_t> equation_pool(int equation);

}  // namespace repsieve
