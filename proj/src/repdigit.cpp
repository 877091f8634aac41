#include "repsieve/repdigit.hpp"

#include <stdexcept>

namespace repsieve {

void validate(const RepdigitForm& form) {
  if (form.base < 2) throw std::invalid_argument("repdigit base must be >= 2");
  if (form.digit < 1 || form.digit >= form.base) {
    throw std::invalid_argument("repdigit digit must lie in [1, base - 1]");
  }
  if (form.length < 1) throw std::invalid_argument("repdigit length must be >= 1");
}

mpz_class repunit_value(std::uint32_t base, std::uint64_t length) {
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), base, static_cast<unsigned long>(length));
  return (power - 1) / (base - 1);
}

mpz_class repdigit_value(const RepdigitForm& form) {
  validate(form);
  return form.digit * repunit_value(form.base, form.length);
}

std::optional<RepdigitForm> classify_repdigit(const mpz_class& value, std::uint32_t base) {
  if (base < 2) throw std::invalid_argument("classify_repdigit: base must be >= 2");
  if (sgn(value) <= 0) return std::nullopt;

  const unsigned long g = base;
  const unsigned long last = mpz_fdiv_ui(value.get_mpz_t(), g);
  if (last == 0) return std::nullopt;
  if (value < g) return RepdigitForm{base, static_cast<std::uint32_t>(last), 1};
  // Cheap rejection on the last two digits before the full comparison.
  if (mpz_fdiv_ui(value.get_mpz_t(), g * g) != last * (g + 1)) return std::nullopt;

  // mpz_sizeinbase is exact for powers of two and may overshoot by one otherwise.
  const std::size_t size = mpz_sizeinbase(value.get_mpz_t(), static_cast<int>(base));
  for (std::size_t m : {size, size - 1}) {
    if (m < 1) continue;
    RepdigitForm form{base, static_cast<std::uint32_t>(last), m};
    if (repdigit_value(form) == value) return form;
  }
  return std::nullopt;
}

std::vector<RepdigitForm> enumerate_repdigits(std::uint32_t base, std::uint64_t max_digits) {
  if (base < 2) throw std::invalid_argument("enumerate_repdigits: base must be >= 2");
  if (max_digits < 1) throw std::invalid_argument("enumerate_repdigits: max_digits must be >= 1");
  // Values grow with length first, digit second.
  std::vector<RepdigitForm> out;
  out.reserve(static_cast<std::size_t>((base - 1) * max_digits));
  for (std::uint64_t m = 1; m <= max_digits; ++m) {
    for (std::uint32_t a = 1; a < base; ++a) out.push_back({base, a, m});
  }
  return out;
}

}  // namespace repsieve
