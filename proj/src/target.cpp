#include "repsieve/target.hpp"

#include <algorithm>
#include <stdexcept>

namespace repsieve {

std::string Window::describe() const {
  return kind == Kind::fixed ? "k=" + std::to_string(k) : "k>=" + std::to_string(k);
}

void TargetForm::validate() const {
  if (base < 2) throw std::invalid_argument("target base must be >= 2");
  if (min_m < 1) throw std::invalid_argument("target min_m must be >= 1");
  if (min_n < 1) throw std::invalid_argument("target min_n must be >= 1");
  if (digits.empty()) throw std::invalid_argument("target needs at least one digit");
  if (!std::is_sorted(digits.begin(), digits.end()) ||
      std::adjacent_find(digits.begin(), digits.end()) != digits.end()) {
    throw std::invalid_argument("target digits must be strictly increasing");
  }
  for (std::uint32_t a : digits) {
    if (a < 1 || a >= base) throw std::invalid_argument("target digit outside [1, base - 1]");
  }
}

TargetForm TargetForm::with_digit(std::uint32_t a) const {
  TargetForm out = *this;
  out.digits = {a};
  return out;
}

TargetForm TargetForm::with_window(Window w) const {
  TargetForm out = *this;
  out.window = w;
  return out;
}

bool TargetForm::has_digit(std::uint32_t a) const {
  return std::binary_search(digits.begin(), digits.end(), a);
}

TargetForm equation_target(int equation) {
  const std::vector<std::uint32_t> all{1, 2, 3, 4, 5, 6, 7, 8, 9};
  switch (equation) {
    case 1:
      return {balancing(), Window::fixed(0), {1, 2, 3, 4, 5, 7, 8, 9}, 10, 2, 1};
    case 2:
      return {balancing(), Window::all_from(1), all, 10, 2, 1};
    case 3:
      return {lucas_balancing(), Window::fixed(0), all, 10, 1, 1};
    case 4:
      return {lucas_balancing(), Window::all_from(1), all, 10, 1, 1};
    default:
      throw std::invalid_argument("equation must be 1, 2, 3 or 4");
  }
}

std::vector<std::uint64_t> equation_pool(int equation) {
  switch (equation) {
    case 1:
      return {10, 11, 20, 3, 4, 5, 7, 8, 9, 17};
    case 2:
      return {5, 100, 10};
    case 3:
      return {5, 7, 8};
    case 4:
      return {8, 5, 7};
    default:
      throw std::invalid_argument("equation must be 1, 2, 3 or 4");
  }
}

}  // namespace repsieve
