#include "doctest.h"

#include <algorithm>

#include "repsieve/oracle.hpp"
#include "repsieve/serialize.hpp"
#include "repsieve/sieve.hpp"

using namespace repsieve;

namespace {

ProveOptions options_for(int eq) {
  ProveOptions o;
  o.pool = equation_pool(eq);
  return o;
}

Certificate prove_eq(int eq) { return prove(equation_target(eq), options_for(eq)); }

std::size_t count_intersections(const Branch& b) {
  return static_cast<std::size_t>(std::count_if(b.steps.begin(), b.steps.end(), [](const Step& s) {
    return std::holds_alternative<ResidueIntersection>(s);
  }));
}

const ConstraintState& result_of(const Step& s) {
  return std::visit([](const auto& x) -> const ConstraintState& { return x.result; }, s);
}

// Applies `mutate` to every integer leaf under "branches", one at a time.
template <typename F>
void for_each_integer_leaf(json& node, F&& mutate) {
  if (node.is_number_integer()) {
    mutate(node);
  } else if (node.is_array() || node.is_object()) {
    for (auto& child : node) for_each_integer_leaf(child, mutate);
  }
}

}  // namespace

TEST_SUITE("sieve") {

TEST_CASE("single intersection: digit 2 dies mod 5") {
  const auto t = equation_target(1).with_digit(2);
  const auto r = apply_residue_intersection(ConstraintState{}, t, 5);
  CHECK(r.state.empty());
  CHECK(r.state.n_modulus == 6);
  const auto& step = std::get<ResidueIntersection>(r.step);
  CHECK(std::get<ResidueCycle>(step.lhs).values == std::vector<Residue>{0, 1, 1, 0, 4, 4});
  CHECK(step.repunit.cycle == std::vector<Residue>{1});
}

TEST_CASE("mod 10 then mod 11 forces odd m for the digit 1") {
  const auto t = equation_target(1).with_digit(1);
  // Mod 11 alone admits even m through 11 | B_n, n = 0 (mod 6).
  const auto only11 = apply_residue_intersection(ConstraintState{}, t, 11).state;
  CHECK(only11.m_classes(2) == std::vector<std::uint64_t>{0, 1});
  const auto after10 = apply_residue_intersection(ConstraintState{}, t, 10).state;
  CHECK(after10.n_classes(6) == std::vector<std::uint64_t>{1});
  const auto r = apply_residue_intersection(after10, t, 11).state;
  CHECK(r.m_modulus == 2);
  CHECK(r.m_classes(2) == std::vector<std::uint64_t>{1});
  CHECK(r.n_classes(12) == std::vector<std::uint64_t>{1});
  CHECK(apply_residue_intersection(r, t, 20).state.empty());
}

TEST_CASE("refinement never enlarges the projected set") {
  const auto t = equation_target(1).with_digit(1);
  ConstraintState st;
  for (Residue q : {11u, 7u, 9u, 13u, 17u, 20u}) {
    const auto r = apply_residue_intersection(st, t, q);
    REQUIRE(r.state.n_modulus % st.n_modulus == 0);
    REQUIRE(r.state.m_modulus % st.m_modulus == 0);
    for (const auto& p : r.state.feasible) {
      const ResiduePair down{p.n % st.n_modulus, p.m % st.m_modulus};
      REQUIRE(std::binary_search(st.feasible.begin(), st.feasible.end(), down));
    }
    // Density of the feasible set is non-increasing.
    REQUIRE(r.state.feasible.size() * st.n_modulus * st.m_modulus <=
            st.feasible.size() * r.state.n_modulus * r.state.m_modulus);
    st = r.state;
    if (st.empty()) break;
  }
}

TEST_CASE("intersection keeps every true solution") {
  // C_3 = 99 = 9 * R_2 must survive every modulus for the digit 9.
  const auto t = equation_target(3).with_digit(9);
  for (Residue q = 2; q <= 60; ++q) {
    const auto r = apply_residue_intersection(ConstraintState{}, t, q);
    if (r.state.m_tail_checked >= 2) continue;
    const ResiduePair sol{3 % r.state.n_modulus, 2 % r.state.m_modulus};
    REQUIRE(std::binary_search(r.state.feasible.begin(), r.state.feasible.end(), sol));
  }
}

TEST_CASE("cascade d = 3, p = 7 pins m to multiples of 6") {
  const auto t = equation_target(1).with_digit(5);
  const auto after5 = apply_residue_intersection(ConstraintState{}, t, 5).state;
  CHECK(after5.n_classes(after5.n_modulus) == std::vector<std::uint64_t>{0, 3});
  const auto r = apply_divisibility_cascade(after5, t, 3, 7);
  const auto& step = std::get<DivisibilityCascade>(r.step);
  CHECK(step.route == DivisibilityCascade::Route::order);
  CHECK(step.order == 6);
  CHECK(r.state.m_modulus == 6);
  CHECK(r.state.m_classes(6) == std::vector<std::uint64_t>{0});
}

TEST_CASE("cascade d = 3, p = 5 empties the digit 7") {
  const auto t = equation_target(1).with_digit(7);
  const auto after7 = apply_residue_intersection(ConstraintState{}, t, 7).state;
  const auto r = apply_divisibility_cascade(after7, t, 3, 5);
  CHECK(std::get<DivisibilityCascade>(r.step).route == DivisibilityCascade::Route::repunit_cycle);
  CHECK(r.state.empty());
}

TEST_CASE("cascade d = 4, p = 17 contradicts odd m") {
  const auto t = equation_target(1).with_digit(4);
  const ConstraintState st{4, 2, 0, {{0, 1}}};
  const auto r = apply_divisibility_cascade(st, t, 4, 17);
  CHECK(std::get<DivisibilityCascade>(r.step).order == 16);
  CHECK(r.state.m_modulus == 16);
  CHECK(r.state.empty());
}

TEST_CASE("cascade preconditions") {
  const auto t = equation_target(1).with_digit(4);
  const ConstraintState st{4, 2, 0, {{0, 1}}};
  CHECK_THROWS_AS(apply_divisibility_cascade(st, t, 4, 2), std::invalid_argument);   // p divides the digit
  CHECK_THROWS_AS(apply_divisibility_cascade(st, t, 4, 19), std::invalid_argument);  // 19 does not divide 204
  CHECK_THROWS_AS(apply_divisibility_cascade(st, t, 3, 7), std::invalid_argument);   // 3 does not divide L
  const ConstraintState mixed{4, 2, 0, {{0, 1}, {2, 1}}};
  CHECK_THROWS_AS(apply_divisibility_cascade(mixed, t, 4, 17), std::invalid_argument);
  CHECK_THROWS_AS(apply_divisibility_cascade(st, equation_target(3).with_digit(1), 4, 17),
                  std::invalid_argument);
}

TEST_CASE("window extension at modulus 10") {
  const auto t = equation_target(2).with_digit(6).with_window(Window::all_from(2));
  const auto r = apply_window_extension(ConstraintState{}, t, 2, 10);
  CHECK(r.state.empty());
  const auto& step = std::get<WindowExtension>(r.step);
  CHECK(step.product_cycle.values == std::vector<Residue>{0});
  // A pair of terms is not always divisible by 10: B_1 B_2 = 6.
  const auto t1 = equation_target(2).with_digit(6);
  CHECK_THROWS_AS(apply_window_extension(ConstraintState{}, t1, 1, 10), std::invalid_argument);
  // Fixed windows cannot be extended.
  CHECK_THROWS_AS(apply_window_extension(ConstraintState{}, equation_target(1).with_digit(1), 0, 10),
                  std::invalid_argument);
}

TEST_CASE("lattice cap") {
  const auto t = equation_target(1).with_digit(6);
  CHECK_THROWS_AS(apply_residue_intersection(ConstraintState{}, t, 100, 10), LatticeCapExceeded);
  auto o = options_for(1);
  o.lattice_cap = 20;
  CHECK_THROWS_AS(prove(equation_target(1), o), LatticeCapExceeded);
}

TEST_CASE("equation 1 without the digit 6") {
  const auto cert = prove_eq(1);
  CHECK(cert.conclusion == Conclusion::empty);
  CHECK(cert.exceptions.empty());
  CHECK(cert.branches.size() == 8);
  for (const auto& b : cert.branches) CHECK(b.final_state.empty());
  CHECK(verify_certificate(cert).ok);
}

TEST_CASE("equation 2: pair products and the window extension") {
  const auto cert = prove_eq(2);
  CHECK(cert.conclusion == Conclusion::empty);
  CHECK(verify_certificate(cert).ok);
  for (const auto& b : cert.branches) {
    if (b.window.kind == Window::Kind::all_from) {
      REQUIRE(b.steps.size() == 1);
      CHECK(std::get<WindowExtension>(b.steps[0]).modulus == 10);
      CHECK(b.window.k == 2);
    } else {
      CHECK(b.window == Window::fixed(1));
    }
  }
}

TEST_CASE("equation 3 exceptions") {
  const auto cert = prove_eq(3);
  CHECK(cert.conclusion == Conclusion::empty);
  const std::vector<SolutionRecord> expect{{1, 0, 1, 3}, {3, 0, 2, 9}};
  CHECK(cert.exceptions == expect);
  CHECK(verify_certificate(cert).ok);
}

TEST_CASE("equation 4: mod 8 leaves the digits 5 and 7") {
  const auto cert = prove_eq(4);
  CHECK(cert.conclusion == Conclusion::empty);
  CHECK(cert.exceptions.empty());
  CHECK(surviving_digits_after(cert, 8) == std::vector<std::uint32_t>{5, 7});
  CHECK(verify_certificate(cert).ok);
}

TEST_CASE("the conclusion does not depend on pool order") {
  std::vector<Residue> pool{5, 7, 8};
  do {
    ProveOptions o;
    o.pool = pool;
    const auto cert = prove(equation_target(3), o);
    REQUIRE(cert.conclusion == Conclusion::empty);
    REQUIRE(cert.exceptions.size() == 2);
    REQUIRE(verify_certificate(cert).ok);
  } while (std::next_permutation(pool.begin(), pool.end()));

  auto greedy = options_for(1);
  greedy.strategy = Strategy::greedy_smallest_survivor;
  const auto g = prove(equation_target(1), greedy);
  CHECK(g.conclusion == Conclusion::empty);
  CHECK(verify_certificate(g).ok);
}

TEST_CASE("proving is deterministic across runs and thread counts") {
  for (int eq = 1; eq <= 4; ++eq) {
    auto o = options_for(eq);
    o.threads = 1;
    const auto one = dump_certificate(prove(equation_target(eq), o));
    o.threads = 4;
    const auto four = dump_certificate(prove(equation_target(eq), o));
    REQUIRE(one == four);
    REQUIRE(one == dump_certificate(prove(equation_target(eq), o)));
  }
}

TEST_CASE("certificates survive a JSON round trip") {
  for (int eq = 1; eq <= 4; ++eq) {
    const auto cert = prove_eq(eq);
    const auto back = parse_certificate(dump_certificate(cert));
    REQUIRE(back == cert);
    REQUIRE(verify_certificate(back).ok);
  }
}

TEST_CASE("cascades shorten the digit 5 branch") {
  ProveOptions o;
  o.pool = {5, 11};
  o.cascades = true;
  const auto cert = prove(equation_target(1).with_digit(5), o);
  CHECK(cert.conclusion == Conclusion::empty);
  const auto& b = cert.branches.at(0);
  CHECK(std::any_of(b.steps.begin(), b.steps.end(),
                    [](const Step& s) { return std::holds_alternative<DivisibilityCascade>(s); }));
  CHECK(verify_certificate(cert).ok);
}

TEST_CASE("greedy search on the digit 6 with a lattice restricted to (96, 6)") {
  ProveOptions o;
  const auto t = equation_target(1).with_digit(6);
  o.pool = filter_pool_by_lattice(t, modulus_range(t, 1000), 96, 6);
  o.strategy = Strategy::greedy_smallest_survivor;
  const auto cert = prove(t, o);
  CHECK(cert.conclusion == Conclusion::residual);
  const auto& st = cert.branches.at(0).final_state;
  CHECK(st.n_modulus == 96);
  CHECK(st.m_modulus == 6);
  CHECK(st.feasible == std::vector<ResiduePair>{{14, 1}});
  CHECK(verify_certificate(cert).ok);
}

TEST_CASE("forged exception is rejected") {
  auto cert = prove_eq(1);
  cert.exceptions.push_back({2, 0, 1, 5});
  const auto report = verify_certificate(cert);
  CHECK_FALSE(report.ok);
  CHECK(report.message.find("does not satisfy") != std::string::npos);
}

TEST_CASE("conclusion and coverage tampering is rejected") {
  auto cert = prove_eq(3);
  cert.conclusion = Conclusion::residual;
  CHECK_FALSE(verify_certificate(cert).ok);

  cert = prove_eq(3);
  cert.exceptions.clear();
  CHECK_FALSE(verify_certificate(cert).ok);

  cert = prove_eq(1);
  cert.branches.pop_back();
  CHECK_FALSE(verify_certificate(cert).ok);

  cert = prove_eq(2);
  cert.branches.erase(std::remove_if(cert.branches.begin(), cert.branches.end(),
                                     [](const Branch& b) { return b.window.kind == Window::Kind::all_from && b.digit == 4; }),
                      cert.branches.end());
  CHECK_FALSE(verify_certificate(cert).ok);

  cert = prove_eq(1);
  cert.branches[0].steps.pop_back();
  CHECK_FALSE(verify_certificate(cert).ok);
}

TEST_CASE("every single perturbed number inside the proof is rejected") {
  std::vector<Certificate> certs{prove_eq(1), prove_eq(3), prove_eq(4)};
  {
    ProveOptions o;
    o.pool = {560, 32};
    certs.push_back(prove(equation_target(1).with_digit(6), o));
  }
  for (const auto& cert : certs) {
    const json original = json(cert);
    json doc = original;
    std::size_t mutations = 0;
    for_each_integer_leaf(doc["branches"], [&](json& leaf) {
      for (int delta : {1, -1}) {
        const json saved = leaf;
        const auto v = leaf.get<std::int64_t>();
        if (v + delta < 0) continue;
        leaf = v + delta;
        bool rejected = false;
        try {
          rejected = !verify_certificate(doc.get<Certificate>()).ok;
        } catch (const std::exception&) {
          rejected = true;
        }
        leaf = saved;
        ++mutations;
        if (!rejected) FAIL("mutation accepted: " << saved << " -> " << v + delta);
      }
    });
    CHECK(mutations > 20);
    CHECK(doc == original);
  }
}

TEST_CASE("dropping a feasible pair is rejected") {
  ProveOptions o;
  o.pool = {560, 32};
  const auto cert = prove(equation_target(1).with_digit(6), o);
  for (std::size_t s = 0; s < cert.branches[0].steps.size(); ++s) {
    if (result_of(cert.branches[0].steps[s]).empty()) continue;
    auto bad = cert;
    std::visit([](auto& x) { x.result.feasible.pop_back(); }, bad.branches[0].steps[s]);
    const auto report = verify_certificate(bad);
    CHECK_FALSE(report.ok);
    CHECK(report.branch == 0u);
    CHECK(report.step == s);
  }
}

TEST_CASE("verified empty certificates agree with the exhaustive scan") {
  for (int eq = 1; eq <= 4; ++eq) {
    const auto cert = prove_eq(eq);
    REQUIRE(verify_certificate(cert).ok);
    REQUIRE(cert.conclusion == Conclusion::empty);
    const auto found = scan(cert.target, 300, 150);
    std::vector<SolutionRecord> hits;
    for (const auto& h : found.hits) hits.push_back({h.n, h.k, h.m, h.a});
    CHECK(hits == cert.exceptions);
    CHECK(found.out_of_range.empty());
  }
}

TEST_CASE("each branch records at least one intersection or extension") {
  for (int eq = 1; eq <= 4; ++eq) {
    for (const auto& b : prove_eq(eq).branches) {
      CHECK(!b.steps.empty());
      if (b.window.kind == Window::Kind::fixed) CHECK(count_intersections(b) >= 1);
    }
  }
}

}
