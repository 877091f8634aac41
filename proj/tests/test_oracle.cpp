#include "doctest.h"

#include "repsieve/oracle.hpp"

using namespace repsieve;

namespace {

TargetForm all_digits(RecurrenceSpec spec, Window w) {
  TargetForm t;
  t.spec = std::move(spec);
  t.window = w;
  t.digits = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  t.min_m = 1;
  t.min_n = 1;
  return t;
}

struct Key {
  std::uint64_t n, k, m;
  std::uint32_t a;
  friend bool operator==(const Key&, const Key&) = default;
};

std::vector<Key> keys(const std::vector<Hit>& hits) {
  std::vector<Key> out;
  for (const auto& h : hits) out.push_back({h.n, h.k, h.m, h.a});
  return out;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("balancing repdigits among the first terms") {
  const auto r = scan(all_digits(balancing(), Window::fixed(0)), 202, 200);
  CHECK(keys(r.hits) == std::vector<Key>{{1, 0, 1, 1}, {2, 0, 1, 6}});
  CHECK(r.out_of_range.empty());
  CHECK(r.hits[1].value == 6);
}

TEST_CASE("Lucas-balancing repdigits") {
  const auto r = scan(all_digits(lucas_balancing(), Window::fixed(0)), 200, 200);
  CHECK(keys(r.hits) == std::vector<Key>{{1, 0, 1, 3}, {3, 0, 2, 9}});
}

TEST_CASE("pair products") {
  const auto b = scan(all_digits(balancing(), Window::fixed(1)), 200, 400);
  CHECK(keys(b.hits) == std::vector<Key>{{1, 1, 1, 6}});
  const auto c = scan(all_digits(lucas_balancing(), Window::fixed(1)), 200, 400);
  CHECK(c.hits.empty());
}

TEST_CASE("open windows") {
  const auto b = scan(all_digits(balancing(), Window::all_from(1)), 120, 100000);
  CHECK(keys(b.hits) == std::vector<Key>{{1, 1, 1, 6}});
  const auto c = scan(all_digits(lucas_balancing(), Window::all_from(1)), 120, 100000);
  CHECK(c.hits.empty());
}

TEST_CASE("hits longer than the digit bound are reported separately") {
  const auto r = scan(all_digits(lucas_balancing(), Window::fixed(0)), 50, 1);
  CHECK(keys(r.hits) == std::vector<Key>{{1, 0, 1, 3}});
  CHECK(keys(r.out_of_range) == std::vector<Key>{{3, 0, 2, 9}});
}

TEST_CASE("enlarging bounds never removes hits") {
  auto target = all_digits(balancing(), Window::fixed(0));
  target.spec = RecurrenceSpec{"small", 1, 1, 1, 1};  // Fibonacci shifted: repdigits 1, 2, 3, 5, 8, 55
  std::vector<Key> previous;
  for (std::uint64_t n = 1; n <= 60; n += 3) {
    const auto now = keys(scan(target, n, 200).hits);
    for (const auto& k : previous) REQUIRE(std::find(now.begin(), now.end(), k) != now.end());
    previous = now;
  }
  CHECK(previous.size() == 6);
}

TEST_CASE("thread count does not change the result") {
  const auto target = all_digits(lucas_balancing(), Window::all_from(1));
  const auto one = to_tsv(scan(target, 80, 100000, 1));
  const auto four = to_tsv(scan(target, 80, 100000, 4));
  CHECK(one == four);
  const auto fixed = all_digits(balancing(), Window::fixed(0));
  CHECK(to_tsv(scan(fixed, 150, 200, 1)) == to_tsv(scan(fixed, 150, 200, 3)));
}

TEST_CASE("tsv layout") {
  const auto tsv = to_tsv(scan(all_digits(lucas_balancing(), Window::fixed(0)), 10, 5));
  CHECK(tsv == "n\tk\tm\ta\tvalue\tstatus\n1\t0\t1\t3\t3\thit\n3\t0\t2\t9\t99\thit\n");
}

TEST_CASE("bounded enumeration matches the scan") {
  for (const auto& spec : {balancing(), lucas_balancing()}) {
    for (const auto w : {Window::fixed(0), Window::fixed(1), Window::fixed(2), Window::all_from(1)}) {
      const auto t = all_digits(spec, w);
      const auto bounded = bounded_solutions(t, 120);
      auto scanned = scan(t, 300, 120).hits;
      REQUIRE(keys(bounded) == keys(scanned));
    }
  }
  CHECK_THROWS_AS(bounded_solutions(all_digits(RecurrenceSpec{"alt", -6, -1, 0, 1}, Window::fixed(0)), 10),
                  std::invalid_argument);
}

TEST_CASE("growth lemma") {
  CHECK(has_growth_lemma(balancing(), 1));
  CHECK(has_growth_lemma(lucas_balancing(), 1));
  CHECK_FALSE(has_growth_lemma(balancing(), 0));
  CHECK_FALSE(has_growth_lemma(RecurrenceSpec{"fib", 1, 1, 0, 1}, 1));
}

TEST_CASE("exact solution check") {
  auto t = all_digits(lucas_balancing(), Window::fixed(0));
  CHECK(satisfies(t, 3, 0, 2, 9));
  CHECK_FALSE(satisfies(t, 3, 0, 2, 8));
  CHECK_FALSE(satisfies(t, 3, 1, 2, 9));
  t.min_m = 2;
  CHECK_FALSE(satisfies(t, 1, 0, 1, 3));
}

}
