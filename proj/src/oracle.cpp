#include "repsieve/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "repsieve/parallel.hpp"
#include "repsieve/repdigit.hpp"

namespace repsieve {

bool hit_less(const Hit& x, const Hit& y) {
  return std::tie(x.n, x.k, x.m, x.a) < std::tie(y.n, y.k, y.m, y.a);
}

namespace {

struct PerStart {
  std::vector<Hit> hits;
  std::vector<Hit> out_of_range;
};

void classify_into(const TargetForm& target, std::uint64_t n, std::uint64_t k,
                   const mpz_class& product, std::uint64_t max_digits, PerStart& sink) {
  const auto form = classify_repdigit(product, target.base);
  if (!form || form->length < target.min_m || !target.has_digit(form->digit)) return;
  Hit hit{n, k, form->length, form->digit, product};
  (form->length <= max_digits ? sink.hits : sink.out_of_range).push_back(std::move(hit));
}

}  // namespace

ScanResult scan(const TargetForm& target, std::uint64_t max_n, std::uint64_t max_digits,
                unsigned threads) {
  target.validate();
  if (max_n < 1 || max_digits < 1) throw std::invalid_argument("scan bounds must be positive");

  const bool fixed = target.window.kind == Window::Kind::fixed;
  const std::uint64_t last_index = fixed ? max_n + target.window.k : max_n;
  const auto seq = terms(target.spec, static_cast<std::size_t>(last_index + 1));

  const std::uint64_t first = target.min_n;
  const std::size_t starts = max_n >= first ? static_cast<std::size_t>(max_n - first + 1) : 0;
  auto per_start = parallel_map<PerStart>(starts, threads, [&](std::size_t i) {
    const std::uint64_t n = first + i;
    PerStart sink;
    mpz_class product = 1;
    const std::uint64_t k_lo = target.window.k;
    const std::uint64_t k_hi = fixed ? target.window.k : max_n - n;
    for (std::uint64_t k = 0; k <= k_hi; ++k) {
      product *= seq[n + k];
      if (k >= k_lo) classify_into(target, n, k, product, max_digits, sink);
    }
    return sink;
  });

  ScanResult result{target, max_n, max_digits, {}, {}};
  for (auto& s : per_start) {
    for (auto& h : s.hits) result.hits.push_back(std::move(h));
    for (auto& h : s.out_of_range) result.out_of_range.push_back(std::move(h));
  }
  std::sort(result.hits.begin(), result.hits.end(), hit_less);
  std::sort(result.out_of_range.begin(), result.out_of_range.end(), hit_less);
  return result;
}

bool has_growth_lemma(const RecurrenceSpec& spec, std::uint64_t min_n) {
  // With q = -1: x_{n+1} - x_n = (p - 2) x_n + (x_n - x_{n-1}), so a strict
  // increase from a nonnegative start persists whenever p >= 2.
  if (spec.coeff_q != -1 || spec.coeff_p < 2 || min_n < 1) return false;
  const mpz_class before = term(spec, min_n - 1).value;
  const mpz_class start = term(spec, min_n).value;
  return sgn(before) >= 0 && start > before;
}

std::vector<Hit> bounded_solutions(const TargetForm& target, std::uint64_t max_m) {
  target.validate();
  std::vector<Hit> out;
  if (max_m < target.min_m) return out;
  if (!has_growth_lemma(target.spec, target.min_n)) {
    throw std::invalid_argument("bounded_solutions: terms of '" + target.spec.name +
                                "' are not provably increasing from index " +
                                std::to_string(target.min_n));
  }
  const mpz_class bound = target.digits.back() * repunit_value(target.base, max_m);

  // Every factor is >= x_{min_n} >= 1 and every factor after the first is
  // >= 2, so the product grows with k and is at least term(n).
  std::vector<mpz_class> seq = terms(target.spec, static_cast<std::size_t>(target.min_n + 1));
  auto at = [&](std::uint64_t i) -> const mpz_class& {
    while (seq.size() <= i) {
      const std::size_t j = seq.size();
      seq.push_back(target.spec.coeff_p * seq[j - 1] + target.spec.coeff_q * seq[j - 2]);
    }
    return seq[i];
  };

  for (std::uint64_t n = target.min_n; at(n) <= bound; ++n) {
    mpz_class product = 1;
    for (std::uint64_t k = 0;; ++k) {
      product *= at(n + k);
      if (product > bound) break;
      if (target.window.contains(k)) {
        const auto form = classify_repdigit(product, target.base);
        if (form && form->length >= target.min_m && form->length <= max_m &&
            target.has_digit(form->digit)) {
          out.push_back({n, k, form->length, form->digit, product});
        }
      }
      if (target.window.kind == Window::Kind::fixed && k >= target.window.k) break;
    }
  }
  std::sort(out.begin(), out.end(), hit_less);
  return out;
}

bool satisfies(const TargetForm& target, std::uint64_t n, std::uint64_t k, std::uint64_t m,
               std::uint32_t a) {
  if (n < target.min_n || m < target.min_m || !target.has_digit(a) || !target.window.contains(k)) {
    return false;
  }
  return consecutive_product(target.spec, n, k) == repdigit_value({target.base, a, m});
}

std::string to_tsv(const ScanResult& result) {
  std::ostringstream os;
  os << "n\tk\tm\ta\tvalue\tstatus\n";
  auto emit = [&](const Hit& h, const char* status) {
    os << h.n << '\t' << h.k << '\t' << h.m << '\t' << h.a << '\t' << h.value.get_str() << '\t'
       << status << '\n';
  };
  for (const auto& h : result.hits) emit(h, "hit");
  for (const auto& h : result.out_of_range) emit(h, "out_of_range");
  return os.str();
}

}  // namespace repsieve
