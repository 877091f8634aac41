#include "doctest.h"

#include <string>

#include "repsieve/repdigit.hpp"

using namespace repsieve;

TEST_SUITE("repdigit") {

TEST_CASE("values") {
  CHECK(repdigit_value({10, 6, 2}) == 66);
  CHECK(repdigit_value({10, 9, 2}) == 99);
  CHECK(repdigit_value({2, 1, 5}) == 31);
  CHECK(repunit_value(10, 6) == 111111);
  CHECK(repdigit_value({16, 15, 3}) == 0xFFF);
  CHECK_THROWS_AS(repdigit_value({10, 0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(repdigit_value({10, 10, 3}), std::invalid_argument);
  CHECK_THROWS_AS(repdigit_value({1, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(repdigit_value({10, 1, 0}), std::invalid_argument);
}

TEST_CASE("classify round-trips every form for bases up to 16") {
  for (std::uint32_t g = 2; g <= 16; ++g) {
    for (std::uint32_t a = 1; a < g; ++a) {
      for (std::uint64_t m = 1; m <= 12; ++m) {
        const RepdigitForm form{g, a, m};
        const auto back = classify_repdigit(repdigit_value(form), g);
        REQUIRE(back.has_value());
        REQUIRE(*back == form);
      }
    }
  }
}

TEST_CASE("classify agrees with the decimal string for every value below 10^5") {
  for (long v = 1; v < 100000; ++v) {
    const auto s = std::to_string(v);
    const bool all_same = s.find_first_not_of(s[0]) == std::string::npos;
    const auto form = classify_repdigit(mpz_class(v), 10);
    REQUIRE(form.has_value() == all_same);
    if (form) {
      REQUIRE(form->digit == static_cast<std::uint32_t>(s[0] - '0'));
      REQUIRE(form->length == s.size());
    }
  }
}

TEST_CASE("non-repdigits and edge values") {
  CHECK_FALSE(classify_repdigit(mpz_class(0), 10).has_value());
  CHECK_FALSE(classify_repdigit(mpz_class(-11), 10).has_value());
  CHECK_FALSE(classify_repdigit(mpz_class(6930), 10).has_value());
  CHECK_FALSE(classify_repdigit(mpz_class("1111111111111111111111111111111111112"), 10).has_value());
  CHECK(classify_repdigit(mpz_class("7777777777777777777777777777777777777777"), 10)->length == 40);
}

TEST_CASE("enumeration is ordered by value") {
  const auto forms = enumerate_repdigits(10, 4);
  CHECK(forms.size() == 36);
  for (std::size_t i = 1; i < forms.size(); ++i) {
    REQUIRE(repdigit_value(forms[i - 1]) < repdigit_value(forms[i]));
  }
  CHECK(forms.front() == RepdigitForm{10, 1, 1});
  CHECK(forms.back() == RepdigitForm{10, 9, 4});
}

}
