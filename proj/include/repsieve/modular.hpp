#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "repsieve/recurrence.hpp"

namespace repsieve {

using Residue = std::uint64_t;

/// Largest modulus accepted by the engine. Keeps every product of two
/// residues inside 64 bits.
inline constexpr Residue kMaxModulus = Residue{1} << 32;

/// One minimal period of a purely periodic residue sequence, indexed from 0.
struct ResidueCycle {
  Residue modulus = 1;
  std::vector<Residue> values;

  std::size_t period() const { return values.size(); }
  Residue at(std::uint64_t n) const { return values[n % values.size()]; }
  friend bool operator==(const ResidueCycle&, const ResidueCycle&) = default;
};

/// Residues r_m of an eventually periodic sequence indexed from m = 1:
/// `tail` covers m = 1 .. tail.size(), then `cycle` repeats forever.
struct EventualCycle {
  Residue modulus = 1;
  std::vector<Residue> tail;
  std::vector<Residue> cycle;

  /// Residue at m >= 1.
  Residue at(std::uint64_t m) const;
  /// Position inside `cycle` of any m > tail.size(), as a function of m mod period.
  std::size_t cycle_index(std::uint64_t m) const {
    const std::uint64_t c = cycle.size();
    return static_cast<std::size_t>((m % c + c - (tail.size() + 1) % c) % c);
  }
  std::size_t period() const { return cycle.size(); }
  friend bool operator==(const EventualCycle&, const EventualCycle&) = default;
};

/// For every start class s mod period: the set of residues of
/// x_s x_{s+1} ... x_{s+k} over all window sizes k >= min_k.
struct WindowClosure {
  Residue modulus = 1;
  std::uint64_t min_k = 0;
  std::vector<std::vector<Residue>> classes;  // each sorted, unique

  std::size_t period() const { return classes.size(); }
  friend bool operator==(const WindowClosure&, const WindowClosure&) = default;
};

Residue reduce(const mpz_class& value, Residue modulus);
Residue reduce(std::int64_t value, Residue modulus);

ResidueCycle residue_cycle(const RecurrenceSpec& spec, Residue modulus);
ResidueCycle product_residue_cycle(const RecurrenceSpec& spec, std::uint64_t k, Residue modulus);
EventualCycle repunit_cycle(Residue base, Residue modulus);
std::uint64_t multiplicative_order(Residue base, Residue modulus);
std::optional<std::uint64_t> rank_of_apparition(const RecurrenceSpec& spec, Residue modulus);
WindowClosure window_closure(const RecurrenceSpec& spec, std::uint64_t min_k, Residue modulus);

/// Smallest d dividing values.size() such that values is d-periodic.
std::size_t minimal_period(const std::vector<Residue>& values);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t euler_phi(std::uint64_t n);
bool is_prime(std::uint64_t n);

}  // namespace repsieve
