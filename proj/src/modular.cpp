#include "repsieve/modular.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace repsieve {

namespace {

void check_modulus(Residue modulus, const char* what) {
  if (modulus < 2) throw std::invalid_argument(std::string(what) + ": modulus must be >= 2");
  if (modulus >= kMaxModulus) {
    throw std::invalid_argument(std::string(what) + ": modulus exceeds 2^32");
  }
}

void check_coprime_q(const RecurrenceSpec& spec, Residue modulus, const char* what) {
  const std::uint64_t q = static_cast<std::uint64_t>(spec.coeff_q < 0 ? -spec.coeff_q : spec.coeff_q);
  if (gcd_u64(q, modulus) != 1) {
    throw std::invalid_argument(std::string(what) + ": coeff_q shares a factor with modulus " +
                                std::to_string(modulus) + "; residues are not purely periodic");
  }
}

Residue mulmod(Residue a, Residue b, Residue m) { return (a * b) % m; }

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Residue reduce(const mpz_class& value, Residue modulus) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), value.get_mpz_t(), static_cast<unsigned long>(modulus));
  return r.get_ui();
}

Residue reduce(std::int64_t value, Residue modulus) {
  const auto m = static_cast<std::int64_t>(modulus);
  const std::int64_t r = value % m;
  return static_cast<Residue>(r < 0 ? r + m : r);
}

Residue EventualCycle::at(std::uint64_t m) const {
  if (m < 1) throw std::invalid_argument("repunit index starts at m = 1");
  if (m <= tail.size()) return tail[m - 1];
  return cycle[cycle_index(m)];
}

std::size_t minimal_period(const std::vector<Residue>& values) {
  const std::size_t n = values.size();
  for (std::uint64_t d : divisors(n)) {
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = values[i] == values[i - d];
    if (periodic) return static_cast<std::size_t>(d);
  }
  return n;
}

ResidueCycle residue_cycle(const RecurrenceSpec& spec, Residue modulus) {
  check_modulus(modulus, "residue_cycle");
  check_coprime_q(spec, modulus, "residue_cycle");
  const Residue p = reduce(spec.coeff_p, modulus);
  const Residue q = reduce(spec.coeff_q, modulus);
  Residue prev = reduce(spec.seed0, modulus);
  Residue cur = reduce(spec.seed1, modulus);
  const std::uint64_t start_key = prev * modulus + cur;

  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::vector<Residue> values;
  for (;;) {
    const std::uint64_t key = prev * modulus + cur;
    if (auto it = seen.find(key); it != seen.end()) {
      if (key != start_key || it->second != 0) {
        throw std::logic_error("residue_cycle: state map is not a bijection (pre-period detected)");
      }
      break;
    }
    seen.emplace(key, values.size());
    values.push_back(prev);
    const Residue next = (mulmod(p, cur, modulus) + mulmod(q, prev, modulus)) % modulus;
    prev = cur;
    cur = next;
  }
  values.resize(minimal_period(values));
  return {modulus, std::move(values)};
}

ResidueCycle product_residue_cycle(const RecurrenceSpec& spec, std::uint64_t k, Residue modulus) {
  const ResidueCycle base = residue_cycle(spec, modulus);
  if (k == 0) return base;
  const std::size_t period = base.period();
  std::vector<Residue> values(period);
  for (std::size_t n = 0; n < period; ++n) {
    Residue acc = 1 % modulus;
    for (std::uint64_t i = 0; i <= k; ++i) acc = mulmod(acc, base.at(n + i), modulus);
    values[n] = acc;
  }
  values.resize(minimal_period(values));
  return {modulus, std::move(values)};
}

EventualCycle repunit_cycle(Residue base, Residue modulus) {
  check_modulus(modulus, "repunit_cycle");
  if (base < 2) throw std::invalid_argument("repunit_cycle: base must be >= 2");
  const Residue g = base % modulus;
  std::unordered_map<Residue, std::size_t> first_seen;
  std::vector<Residue> seq;
  Residue r = 1 % modulus;
  while (!first_seen.contains(r)) {
    first_seen.emplace(r, seq.size());
    seq.push_back(r);
    r = (mulmod(g, r, modulus) + 1) % modulus;
  }
  const std::size_t start = first_seen.at(r);
  EventualCycle out;
  out.modulus = modulus;
  out.tail.assign(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(start));
  out.cycle.assign(seq.begin() + static_cast<std::ptrdiff_t>(start), seq.end());
  return out;
}

std::uint64_t multiplicative_order(Residue base, Residue modulus) {
  check_modulus(modulus, "multiplicative_order");
  if (gcd_u64(base % modulus, modulus) != 1) {
    throw std::invalid_argument("multiplicative_order: base and modulus are not coprime");
  }
  const Residue g = base % modulus;
  Residue acc = g;
  std::uint64_t e = 1;
  while (acc != 1) {
    acc = mulmod(acc, g, modulus);
    ++e;
  }
  return e;
}

std::optional<std::uint64_t> rank_of_apparition(const RecurrenceSpec& spec, Residue modulus) {
  const ResidueCycle cycle = residue_cycle(spec, modulus);
  for (std::uint64_t n = 1; n <= cycle.period(); ++n) {
    if (cycle.at(n) == 0) return n;
  }
  return std::nullopt;
}

WindowClosure window_closure(const RecurrenceSpec& spec, std::uint64_t min_k, Residue modulus) {
  const ResidueCycle base = residue_cycle(spec, modulus);
  const std::size_t period = base.period();

  // A window of w = j*period + r terms starting at s has product
  // F^j * prefix(s, r), where F is the product over one full period.
  Residue full = 1 % modulus;
  for (Residue v : base.values) full = mulmod(full, v, modulus);

  // Powers F^0, F^1, ... until the first repeat: F^j for j >= pow_tail is
  // periodic with the listed cycle.
  std::vector<Residue> powers;
  std::unordered_map<Residue, std::size_t> pow_seen;
  for (Residue x = 1 % modulus; !pow_seen.contains(x); x = mulmod(x, full, modulus)) {
    pow_seen.emplace(x, powers.size());
    powers.push_back(x);
  }
  const std::size_t pow_tail = pow_seen.at(mulmod(powers.back(), full, modulus));

  auto powers_from = [&](std::uint64_t j0) {
    const auto begin = static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(j0, pow_tail));
    return std::vector<Residue>(powers.begin() + begin, powers.end());
  };

  const std::uint64_t min_terms = min_k + 1;
  WindowClosure out;
  out.modulus = modulus;
  out.min_k = min_k;
  out.classes.resize(period);
  std::vector<char> mark(modulus);
  for (std::size_t s = 0; s < period; ++s) {
    std::fill(mark.begin(), mark.end(), 0);
    // Prefix residues grouped by the smallest admissible exponent j.
    std::map<std::uint64_t, std::vector<char>> prefixes_by_j;
    Residue prefix = 1 % modulus;
    for (std::size_t r = 0; r < period; ++r) {
      const std::uint64_t j = r >= min_terms ? 0 : (min_terms - r + period - 1) / period;
      auto& seen = prefixes_by_j[j];
      if (seen.empty()) seen.assign(modulus, 0);
      seen[prefix] = 1;
      prefix = mulmod(prefix, base.at(s + r), modulus);
    }
    for (const auto& [j0, seen] : prefixes_by_j) {
      const auto pw = powers_from(j0);
      for (Residue x = 0; x < modulus; ++x) {
        if (!seen[x]) continue;
        for (Residue e : pw) mark[mulmod(x, e, modulus)] = 1;
      }
    }
    for (Residue x = 0; x < modulus; ++x) {
      if (mark[x]) out.classes[s].push_back(x);
    }
  }
  return out;
}

}  // namespace repsieve
