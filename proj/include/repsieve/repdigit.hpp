#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace repsieve {

/// a * (g^m - 1) / (g - 1): the base-g number made of m copies of digit a.
struct RepdigitForm {
  std::uint32_t base = 10;
  std::uint32_t digit = 1;
  std::uint64_t length = 1;

  friend bool operator==(const RepdigitForm&, const RepdigitForm&) = default;
  friend auto operator<=>(const RepdigitForm&, const RepdigitForm&) = default;
};

/// Throws std::invalid_argument unless base >= 2, 1 <= digit < base, length >= 1.
void validate(const RepdigitForm& form);

mpz_class repdigit_value(const RepdigitForm& form);

/// (g^m - 1)/(g - 1).
mpz_class repunit_value(std::uint32_t base, std::uint64_t length);

/// The unique form with this value, or nullopt for values <= 0 and for
/// values whose base-g digits are not all equal.
std::optional<RepdigitForm> classify_repdigit(const mpz_class& value, std::uint32_t base);

/// All forms with length <= max_digits, ordered by value.
std::vector<RepdigitForm> enumerate_repdigits(std::uint32_t base, std::uint64_t max_digits);

}  // namespace repsieve
