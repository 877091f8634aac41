#include "repsieve/recurrence.hpp"

#include <array>
#include <stdexcept>

namespace repsieve {

namespace {

mpz_class to_mpz(std::int64_t v) {
  mpz_class out;
  mpz_set_si(out.get_mpz_t(), static_cast<long>(v));
  return out;
}

using Mat2 = std::array<mpz_class, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

RecurrenceSpec balancing() { return {"balancing", 6, -1, 0, 1}; }

RecurrenceSpec lucas_balancing() { return {"lucas_balancing", 6, -1, 1, 3}; }

std::optional<RecurrenceSpec> builtin_spec(std::string_view name) {
  if (name == "balancing") return balancing();
  if (name == "lucas_balancing") return lucas_balancing();
  return std::nullopt;
}

BigTerm term(const RecurrenceSpec& spec, std::uint64_t n) {
  // (x_{n+1}, x_n)^T = A^n (x_1, x_0)^T with A = [[p, q], [1, 0]].
  Mat2 result{1, 0, 0, 1};
  Mat2 base{to_mpz(spec.coeff_p), to_mpz(spec.coeff_q), 1, 0};
  for (std::uint64_t e = n; e != 0; e >>= 1) {
    if (e & 1) result = mul(result, base);
    if (e > 1) base = mul(base, base);
  }
  const mpz_class x1 = to_mpz(spec.seed1);
  const mpz_class x0 = to_mpz(spec.seed0);
  return {n, result[2] * x1 + result[3] * x0};
}

std::vector<mpz_class> terms(const RecurrenceSpec& spec, std::size_t count) {
  std::vector<mpz_class> out;
  out.reserve(count);
  if (count > 0) out.push_back(to_mpz(spec.seed0));
  if (count > 1) out.push_back(to_mpz(spec.seed1));
  const mpz_class p = to_mpz(spec.coeff_p);
  const mpz_class q = to_mpz(spec.coeff_q);
  for (std::size_t i = 2; i < count; ++i) {
    out.push_back(p * out[i - 1] + q * out[i - 2]);
  }
  return out;
}

mpz_class consecutive_product(const RecurrenceSpec& spec, std::uint64_t n, std::uint64_t k) {
  if (n < 1) throw std::invalid_argument("consecutive_product: window must start at n >= 1");
  auto window = terms(spec, static_cast<std::size_t>(n + k + 1));
  mpz_class product = 1;
  for (std::uint64_t i = n; i <= n + k; ++i) product *= window[i];
  return product;
}

DivisibilityPair divides_index_iff_divides_term(const RecurrenceSpec& spec, std::uint64_t m,
                                                std::uint64_t n) {
  if (!spec.same_sequence(balancing())) {
    throw std::invalid_argument("strong divisibility is only asserted for the balancing sequence");
  }
  if (m < 1 || n < 1) throw std::invalid_argument("indices must be positive");
  const mpz_class tm = term(spec, m).value;
  const mpz_class tn = term(spec, n).value;
  return {n % m == 0, mpz_divisible_p(tn.get_mpz_t(), tm.get_mpz_t()) != 0};
}

}  // namespace repsieve
