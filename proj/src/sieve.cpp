#include "repsieve/sieve.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "repsieve/parallel.hpp"
#include "repsieve/repdigit.hpp"

namespace repsieve {

namespace {

using u128 = unsigned __int128;

std::uint32_t single_digit(const TargetForm& target) {
  if (target.digits.size() != 1) {
    throw std::invalid_argument("sieve steps act on one digit at a time");
  }
  return target.digits.front();
}

std::size_t lhs_period(const LhsResidues& lhs) {
  return std::visit([](const auto& x) { return x.period(); }, lhs);
}

LhsResidues lhs_residues(const TargetForm& target, Residue modulus) {
  if (target.window.kind == Window::Kind::fixed) {
    return product_residue_cycle(target.spec, target.window.k, modulus);
  }
  return window_closure(target.spec, target.window.k, modulus);
}

/// ok[r * C + s]: left side at n = r (mod P) can equal the right side at
/// m = s (mod C), for m beyond the repunit tail.
std::vector<char> compatibility_table(const LhsResidues& lhs, const EventualCycle& repunit,
                                      std::uint32_t digit) {
  const std::size_t period = lhs_period(lhs);
  const std::size_t c = repunit.period();
  const Residue q = repunit.modulus;
  std::vector<Residue> rhs(c);
  for (std::size_t s = 0; s < c; ++s) rhs[s] = (digit % q) * repunit.cycle[repunit.cycle_index(s)] % q;

  std::vector<char> ok(period * c, 0);
  if (const auto* cycle = std::get_if<ResidueCycle>(&lhs)) {
    for (std::size_t r = 0; r < period; ++r) {
      for (std::size_t s = 0; s < c; ++s) ok[r * c + s] = cycle->values[r] == rhs[s];
    }
  } else {
    const auto& closure = std::get<WindowClosure>(lhs);
    for (std::size_t r = 0; r < period; ++r) {
      const auto& cls = closure.classes[r];
      for (std::size_t s = 0; s < c; ++s) {
        ok[r * c + s] = std::binary_search(cls.begin(), cls.end(), rhs[s]);
      }
    }
  }
  return ok;
}

void check_cap(std::uint64_t n_modulus, std::uint64_t m_modulus, std::uint64_t cap) {
  if (static_cast<u128>(n_modulus) * m_modulus > cap) {
    std::ostringstream os;
    os << "lattice " << n_modulus << " x " << m_modulus << " exceeds the cap of " << cap
       << " cells";
    throw LatticeCapExceeded(os.str());
  }
}

ConstraintState refine(const ConstraintState& state, const LhsResidues& lhs,
                       const EventualCycle& repunit, std::uint32_t digit, std::uint64_t cap) {
  const std::uint64_t period = lhs_period(lhs);
  const std::uint64_t c = repunit.period();
  ConstraintState out;
  out.n_modulus = lcm_u64(state.n_modulus, period);
  out.m_modulus = lcm_u64(state.m_modulus, c);
  check_cap(out.n_modulus, out.m_modulus, cap);
  out.m_tail_checked = std::max<std::uint64_t>(state.m_tail_checked, repunit.tail.size());
  out.feasible.clear();

  const auto ok = compatibility_table(lhs, repunit, digit);
  for (const auto& pair : state.feasible) {
    for (std::uint64_t n = pair.n; n < out.n_modulus; n += state.n_modulus) {
      const std::uint64_t row = (n % period) * c;
      for (std::uint64_t m = pair.m; m < out.m_modulus; m += state.m_modulus) {
        if (ok[row + m % c]) out.feasible.push_back({n, m});
      }
    }
  }
  std::sort(out.feasible.begin(), out.feasible.end());
  return out;
}

bool all_zero(const std::vector<Residue>& values) {
  return std::all_of(values.begin(), values.end(), [](Residue v) { return v == 0; });
}

/// a * R_m mod q is nonzero for every m >= min_m.
bool repdigit_never_zero(const EventualCycle& repunit, std::uint32_t digit, std::uint64_t min_m) {
  const Residue q = repunit.modulus;
  for (std::size_t i = 0; i < repunit.tail.size(); ++i) {
    if (i + 1 >= min_m && (digit % q) * repunit.tail[i] % q == 0) return false;
  }
  for (Residue r : repunit.cycle) {
    if ((digit % q) * r % q == 0) return false;
  }
  return true;
}

}  // namespace

std::vector<std::uint64_t> ConstraintState::n_classes(std::uint64_t modulus) const {
  if (modulus == 0 || n_modulus % modulus != 0) {
    throw std::invalid_argument("projection modulus must divide the n lattice");
  }
  std::set<std::uint64_t> out;
  for (const auto& p : feasible) out.insert(p.n % modulus);
  return {out.begin(), out.end()};
}

std::vector<std::uint64_t> ConstraintState::m_classes(std::uint64_t modulus) const {
  if (modulus == 0 || m_modulus % modulus != 0) {
    throw std::invalid_argument("projection modulus must divide the m lattice");
  }
  std::set<std::uint64_t> out;
  for (const auto& p : feasible) out.insert(p.m % modulus);
  return {out.begin(), out.end()};
}

std::string to_string(Strategy s) {
  return s == Strategy::paper_order ? "paper_order" : "greedy_smallest_survivor";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "paper_order") return Strategy::paper_order;
  if (s == "greedy_smallest_survivor" || s == "greedy") return Strategy::greedy_smallest_survivor;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

StepResult apply_residue_intersection(const ConstraintState& state, const TargetForm& target,
                                      Residue modulus, std::uint64_t lattice_cap) {
  const std::uint32_t digit = single_digit(target);
  ResidueIntersection step;
  step.modulus = modulus;
  step.digit = digit;
  step.window = target.window;
  step.lhs = lhs_residues(target, modulus);
  step.repunit = repunit_cycle(target.base, modulus);
  step.result = refine(state, step.lhs, step.repunit, digit, lattice_cap);
  ConstraintState next = step.result;
  return {std::move(next), std::move(step)};
}

StepResult apply_divisibility_cascade(const ConstraintState& state, const TargetForm& target,
                                      std::uint64_t d, std::uint64_t p, std::uint64_t lattice_cap) {
  const std::uint32_t digit = single_digit(target);
  if (!target.spec.same_sequence(balancing())) {
    throw std::invalid_argument("divisibility cascade relies on strong divisibility of balancing numbers");
  }
  if (target.window != Window::fixed(0)) {
    throw std::invalid_argument("divisibility cascade needs the single-term window k = 0");
  }
  if (d < 1 || state.n_modulus % d != 0) {
    throw std::invalid_argument("cascade divisor d must divide the n lattice modulus");
  }
  for (const auto& pair : state.feasible) {
    if (pair.n % d != 0) {
      throw std::invalid_argument("cascade needs every feasible n class to be a multiple of d = " +
                                  std::to_string(d));
    }
  }
  if (!is_prime(p) || p >= kMaxModulus) throw std::invalid_argument("cascade needs a prime p");
  if (digit % p == 0) throw std::invalid_argument("cascade prime p divides the digit; no information");
  if (reduce(term(target.spec, d).value, p) != 0) {
    throw std::invalid_argument("cascade prime p does not divide term(d)");
  }

  DivisibilityCascade step;
  step.d = d;
  step.p = p;
  step.digit = digit;
  const std::uint64_t g = target.base;
  ConstraintState out;
  out.n_modulus = state.n_modulus;
  out.m_tail_checked = state.m_tail_checked;
  out.feasible.clear();

  // Which m mod `period` (beyond the tail) make p divide the repunit.
  std::uint64_t period = 0;
  std::vector<char> zero;
  if (gcd_u64(p, g % p) == 1 && (g - 1) % p != 0) {
    step.route = DivisibilityCascade::Route::order;
    step.order = multiplicative_order(g, p);
    period = step.order;
    zero.assign(period, 0);
    zero[0] = 1;
  } else {
    step.route = DivisibilityCascade::Route::repunit_cycle;
    step.repunit = repunit_cycle(g, p);
    period = step.repunit.period();
    zero.assign(period, 0);
    for (std::uint64_t s = 0; s < period; ++s) {
      zero[s] = step.repunit.cycle[step.repunit.cycle_index(s)] == 0;
    }
    out.m_tail_checked = std::max<std::uint64_t>(out.m_tail_checked, step.repunit.tail.size());
  }
  out.m_modulus = lcm_u64(state.m_modulus, period);
  check_cap(out.n_modulus, out.m_modulus, lattice_cap);
  for (const auto& pair : state.feasible) {
    for (std::uint64_t m = pair.m; m < out.m_modulus; m += state.m_modulus) {
      if (zero[m % period]) out.feasible.push_back({pair.n, m});
    }
  }
  std::sort(out.feasible.begin(), out.feasible.end());
  step.result = out;
  return {std::move(out), std::move(step)};
}

StepResult apply_window_extension(const ConstraintState& state, const TargetForm& target,
                                  std::uint64_t base_window, Residue modulus) {
  const std::uint32_t digit = single_digit(target);
  if (target.window.kind != Window::Kind::all_from || target.window.k < base_window) {
    throw std::invalid_argument("window extension needs an open window k >= base_window");
  }
  WindowExtension step;
  step.base_window = base_window;
  step.modulus = modulus;
  step.digit = digit;
  step.product_cycle = product_residue_cycle(target.spec, base_window, modulus);
  if (!all_zero(step.product_cycle.values)) {
    throw std::invalid_argument("window extension inapplicable: product cycle mod " +
                                std::to_string(modulus) + " has nonzero entries");
  }
  step.repunit = repunit_cycle(target.base, modulus);
  if (!repdigit_never_zero(step.repunit, digit, target.min_m)) {
    throw std::invalid_argument("window extension inapplicable: repdigit can vanish mod " +
                                std::to_string(modulus));
  }
  ConstraintState out{state.n_modulus, state.m_modulus, state.m_tail_checked, {}};
  step.result = out;
  return {std::move(out), std::move(step)};
}

std::vector<Residue> modulus_range(const TargetForm& target, Residue max_modulus) {
  const std::uint64_t q = static_cast<std::uint64_t>(std::abs(target.spec.coeff_q));
  std::vector<Residue> out;
  for (Residue m = 2; m <= max_modulus; ++m) {
    if (gcd_u64(q, m) == 1) out.push_back(m);
  }
  return out;
}

std::vector<Residue> filter_pool_by_lattice(const TargetForm& target,
                                            const std::vector<Residue>& pool,
                                            std::uint64_t n_lattice, std::uint64_t m_lattice) {
  std::vector<Residue> out;
  for (Residue q : pool) {
    if (n_lattice != 0) {
      const std::size_t period = target.window.kind == Window::Kind::fixed
                                     ? product_residue_cycle(target.spec, target.window.k, q).period()
                                     : residue_cycle(target.spec, q).period();
      if (n_lattice % period != 0) continue;
    }
    if (m_lattice != 0 && m_lattice % repunit_cycle(target.base, q).period() != 0) continue;
    out.push_back(q);
  }
  return out;
}

namespace {

struct Candidate {
  Residue modulus = 0;
  LhsResidues lhs;
  EventualCycle repunit;
  std::vector<char> ok;  // compatibility table, P x C
};

/// Number of surviving lifted pairs if `cand` were applied, or nullopt when
/// the lifted lattice would exceed the cap.
struct Score {
  std::uint64_t count = 0;
  std::uint64_t cells = 0;
};

std::optional<Score> score_candidate(const ConstraintState& state, const Candidate& cand,
                                     std::uint64_t cap) {
  const std::uint64_t period = lhs_period(cand.lhs);
  const std::uint64_t c = cand.repunit.period();
  const std::uint64_t n2 = lcm_u64(state.n_modulus, period);
  const std::uint64_t m2 = lcm_u64(state.m_modulus, c);
  if (static_cast<u128>(n2) * m2 > cap) return std::nullopt;
  // Lifts of (n, m) correspond one-to-one with (r, s) in [0, P) x [0, C)
  // where r = n mod gcd(L, P) and s = m mod gcd(M, C).
  const std::uint64_t gl = gcd_u64(state.n_modulus, period);
  const std::uint64_t gm = gcd_u64(state.m_modulus, c);
  std::vector<std::uint64_t> agg(gl * gm, 0);
  for (std::uint64_t r = 0; r < period; ++r) {
    for (std::uint64_t s = 0; s < c; ++s) {
      if (cand.ok[r * c + s]) ++agg[(r % gl) * gm + s % gm];
    }
  }
  std::uint64_t count = 0;
  for (const auto& p : state.feasible) count += agg[(p.n % gl) * gm + p.m % gm];
  return Score{count, n2 * m2};
}

// Open-window closure tables cost about period * modulus per candidate.
constexpr std::uint64_t kClosureBudget = 4'000'000;

class BranchRunner {
 public:
  BranchRunner(const TargetForm& target, const ProveOptions& options, unsigned threads)
      : target_(target), options_(options), threads_(threads) {}

  Branch run_extension(std::uint64_t base_window, Residue modulus) const {
    Branch branch{single_digit(target_), target_.window, {}, {}};
    auto [state, step] = apply_window_extension(ConstraintState{}, target_, base_window, modulus);
    branch.steps.push_back(std::move(step));
    branch.final_state = std::move(state);
    return branch;
  }

  Branch run() const {
    Branch branch{single_digit(target_), target_.window, {}, ConstraintState{}};
    if (options_.strategy == Strategy::paper_order) {
      for (Residue q : options_.pool) {
        if (branch.final_state.empty()) break;
        push(branch, apply_residue_intersection(branch.final_state, target_, q, options_.lattice_cap));
        try_cascades(branch);
      }
    } else {
      run_greedy(branch);
    }
    return branch;
  }

 private:
  static void push(Branch& branch, StepResult&& r) {
    branch.final_state = std::move(r.state);
    branch.steps.push_back(std::move(r.step));
  }

  void try_cascades(Branch& branch) const {
    if (!options_.cascades || branch.final_state.empty()) return;
    if (!target_.spec.same_sequence(balancing()) || target_.window != Window::fixed(0)) return;
    const auto& st = branch.final_state;
    std::uint64_t d = st.n_modulus;
    for (const auto& p : st.feasible) d = gcd_u64(d, p.n);
    if (d <= 1 || d > 200) return;
    const mpz_class td = term(target_.spec, d).value;
    const std::uint32_t digit = single_digit(target_);
    for (std::uint64_t p = 2; p < 100'000; ++p) {
      if (branch.final_state.empty()) return;
      if (!mpz_divisible_ui_p(td.get_mpz_t(), p) || !is_prime(p) || digit % p == 0) continue;
      auto r = apply_divisibility_cascade(branch.final_state, target_, d, p, options_.lattice_cap);
      const auto& before = branch.final_state;
      // Keep only cascades that cut the density of the feasible set.
      if (static_cast<u128>(r.state.feasible.size()) * before.m_modulus <
          static_cast<u128>(before.feasible.size()) * r.state.m_modulus) {
        push(branch, std::move(r));
      }
    }
  }

  void run_greedy(Branch& branch) const {
    std::vector<Residue> pool = options_.pool;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    const std::uint32_t digit = single_digit(target_);
    auto prepared = parallel_map<std::optional<Candidate>>(pool.size(), threads_, [&](std::size_t i) {
      const Residue q = pool[i];
      std::optional<Candidate> out;
      try {
        if (target_.window.kind == Window::Kind::all_from &&
            residue_cycle(target_.spec, q).period() * q > kClosureBudget) {
          return out;
        }
        Candidate c{q, lhs_residues(target_, q), repunit_cycle(target_.base, q), {}};
        c.ok = compatibility_table(c.lhs, c.repunit, digit);
        out = std::move(c);
      } catch (const std::invalid_argument&) {
        // modulus unusable for this recurrence
      }
      return out;
    });

    while (!branch.final_state.empty()) {
      const auto& st = branch.final_state;
      auto scores = parallel_map<std::optional<Score>>(prepared.size(), threads_, [&](std::size_t i) {
        if (!prepared[i]) return std::optional<Score>{};
        return score_candidate(st, *prepared[i], options_.lattice_cap);
      });
      // Lowest density of survivors wins; ties keep the smaller modulus.
      std::optional<std::size_t> best;
      Score best_score{st.feasible.size(), st.n_modulus * st.m_modulus};
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!scores[i]) continue;
        if (static_cast<u128>(scores[i]->count) * best_score.cells <
            static_cast<u128>(best_score.count) * scores[i]->cells) {
          best = i;
          best_score = *scores[i];
        }
      }
      if (!best) break;
      push(branch, apply_residue_intersection(st, target_, prepared[*best]->modulus,
                                              options_.lattice_cap));
      try_cascades(branch);
    }
  }

  const TargetForm& target_;
  const ProveOptions& options_;
  unsigned threads_;
};

struct PlannedBranch {
  std::uint32_t digit;
  Window window;
  std::optional<std::pair<std::uint64_t, Residue>> extension;
};

std::optional<std::pair<std::uint64_t, Residue>> find_extension(const TargetForm& target,
                                                                 const ProveOptions& options) {
  for (std::uint64_t w = target.window.k; w <= target.window.k + options.max_extension_window; ++w) {
    for (Residue q : options.pool) {
      try {
        if (!all_zero(product_residue_cycle(target.spec, w, q).values)) continue;
        const auto rep = repunit_cycle(target.base, q);
        const bool every_digit = std::all_of(target.digits.begin(), target.digits.end(),
                                             [&](std::uint32_t a) {
                                               return repdigit_never_zero(rep, a, target.min_m);
                                             });
        if (every_digit) return std::make_pair(w, q);
      } catch (const std::invalid_argument&) {
      }
    }
  }
  return std::nullopt;
}

std::vector<PlannedBranch> plan_branches(const TargetForm& target, const ProveOptions& options) {
  std::vector<PlannedBranch> plan;
  std::optional<std::pair<std::uint64_t, Residue>> ext;
  if (target.window.kind == Window::Kind::all_from) ext = find_extension(target, options);
  for (std::uint32_t a : target.digits) {
    if (!ext) {
      plan.push_back({a, target.window, std::nullopt});
      continue;
    }
    for (std::uint64_t k = target.window.k; k < ext->first; ++k) {
      plan.push_back({a, Window::fixed(k), std::nullopt});
    }
    plan.push_back({a, Window::all_from(ext->first), ext});
  }
  return plan;
}

TargetForm branch_target(const TargetForm& target, std::uint32_t digit, Window window) {
  return target.with_digit(digit).with_window(window);
}

bool contains_record(const std::vector<SolutionRecord>& records, const Hit& h) {
  return std::binary_search(records.begin(), records.end(), SolutionRecord{h.n, h.k, h.m, h.a});
}

/// Do the branch windows for `digit` cover the whole target window?
bool windows_cover(const TargetForm& target, const std::vector<Branch>& branches,
                   std::uint32_t digit) {
  std::set<std::uint64_t> fixed;
  std::optional<std::uint64_t> open_from;
  for (const auto& b : branches) {
    if (b.digit != digit) continue;
    if (b.window.kind == Window::Kind::fixed) {
      fixed.insert(b.window.k);
    } else {
      open_from = std::min(open_from.value_or(b.window.k), b.window.k);
    }
  }
  if (target.window.kind == Window::Kind::fixed) {
    return fixed.contains(target.window.k) || (open_from && *open_from <= target.window.k);
  }
  if (!open_from) return false;
  for (std::uint64_t k = target.window.k; k < *open_from; ++k) {
    if (!fixed.contains(k)) return false;
  }
  return true;
}

std::string describe_state_diff(const ConstraintState& want, const ConstraintState& got) {
  std::ostringstream os;
  if (want.n_modulus != got.n_modulus || want.m_modulus != got.m_modulus) {
    os << "lattice (" << got.n_modulus << ", " << got.m_modulus << ") recomputes as ("
       << want.n_modulus << ", " << want.m_modulus << ")";
  } else if (want.m_tail_checked != got.m_tail_checked) {
    os << "m_tail_checked " << got.m_tail_checked << " recomputes as " << want.m_tail_checked;
  } else {
    os << "feasible set of " << got.feasible.size() << " pairs recomputes to "
       << want.feasible.size() << " pairs";
  }
  return os.str();
}

std::string step_divergence(const Step& recorded, const Step& recomputed) {
  if (recorded.index() != recomputed.index()) return "step kind differs";
  return std::visit(
      [&](const auto& rec) -> std::string {
        using T = std::decay_t<decltype(rec)>;
        const auto& re = std::get<T>(recomputed);
        if constexpr (std::is_same_v<T, ResidueIntersection>) {
          if (rec.lhs != re.lhs) return "left-hand residues mod " + std::to_string(rec.modulus) + " do not recompute";
          if (rec.repunit != re.repunit) return "repunit cycle mod " + std::to_string(rec.modulus) + " does not recompute";
          if (rec.window != re.window || rec.digit != re.digit) return "step window or digit mismatch";
          return describe_state_diff(re.result, rec.result);
        } else if constexpr (std::is_same_v<T, DivisibilityCascade>) {
          if (rec.route != re.route || rec.order != re.order) return "cascade order route does not recompute";
          if (rec.repunit != re.repunit) return "cascade repunit cycle does not recompute";
          if (rec.digit != re.digit) return "step digit mismatch";
          return describe_state_diff(re.result, rec.result);
        } else {
          if (rec.product_cycle != re.product_cycle) return "window product cycle does not recompute";
          if (rec.repunit != re.repunit) return "repunit cycle does not recompute";
          if (rec.digit != re.digit) return "step digit mismatch";
          return describe_state_diff(re.result, rec.result);
        }
      },
      recorded);
}

}  // namespace

Certificate prove(const TargetForm& target, const ProveOptions& options) {
  target.validate();
  if (options.pool.empty()) throw std::invalid_argument("prove: modulus pool is empty");
  if (options.small_case_bound.max_n < 1 || options.small_case_bound.max_m < 1) {
    throw std::invalid_argument("prove: small-case bounds must be positive");
  }
  if (options.lattice_cap < 1) throw std::invalid_argument("prove: lattice cap must be positive");

  const auto plan = plan_branches(target, options);
  const unsigned threads = std::max(1u, options.threads);
  // Parallelize across branches; a lone branch parallelizes its candidate scoring instead.
  const unsigned outer = plan.size() > 1 ? threads : 1;
  const unsigned inner = plan.size() > 1 ? 1 : threads;

  Certificate cert;
  cert.target = target;
  cert.strategy = options.strategy;
  cert.pool = options.pool;
  cert.lattice_cap = options.lattice_cap;
  cert.small_case_bound = options.small_case_bound;
  cert.cascades = options.cascades;
  cert.branches = parallel_map<Branch>(plan.size(), outer, [&](std::size_t i) {
    const auto& pb = plan[i];
    const TargetForm bt = branch_target(target, pb.digit, pb.window);
    BranchRunner runner(bt, options, inner);
    return pb.extension ? runner.run_extension(pb.extension->first, pb.extension->second)
                        : runner.run();
  });

  const auto& bound = options.small_case_bound;
  if (has_growth_lemma(target.spec, target.min_n)) {
    for (const auto& h : bounded_solutions(target, bound.max_m)) {
      if (h.n <= bound.max_n) cert.exceptions.push_back({h.n, h.k, h.m, h.a});
    }
  } else {
    for (const auto& h : scan(target, bound.max_n, bound.max_m, threads).hits) {
      cert.exceptions.push_back({h.n, h.k, h.m, h.a});
    }
  }
  std::sort(cert.exceptions.begin(), cert.exceptions.end());

  // Solutions with m at or below a branch's repunit tail are outside the
  // lattice argument; the scan must have caught all of them.
  for (const auto& b : cert.branches) {
    if (b.final_state.m_tail_checked < target.min_m) continue;
    for (const auto& h : bounded_solutions(branch_target(target, b.digit, b.window),
                                           b.final_state.m_tail_checked)) {
      if (!contains_record(cert.exceptions, h)) {
        throw std::runtime_error("small-case bound too small: solution n=" + std::to_string(h.n) +
                                 " m=" + std::to_string(h.m) + " lies outside the scan");
      }
    }
  }

  const bool all_empty = std::all_of(cert.branches.begin(), cert.branches.end(),
                                     [](const Branch& b) { return b.final_state.empty(); });
  cert.conclusion = all_empty ? Conclusion::empty : Conclusion::residual;
  return cert;
}

VerifyReport verify_certificate(const Certificate& cert) {
  auto fail = [](std::string msg, std::optional<std::size_t> branch = std::nullopt,
                 std::optional<std::size_t> step = std::nullopt) {
    return VerifyReport{false, branch, step, std::move(msg)};
  };
  if (cert.schema != 1) return fail("unsupported schema " + std::to_string(cert.schema));
  try {
    cert.target.validate();
  } catch (const std::exception& e) {
    return fail(std::string("invalid target: ") + e.what());
  }
  const TargetForm& target = cert.target;

  for (std::size_t bi = 0; bi < cert.branches.size(); ++bi) {
    const Branch& b = cert.branches[bi];
    if (!target.has_digit(b.digit)) return fail("branch digit not in target", bi);
    const bool inside = target.window.kind == Window::Kind::all_from
                            ? b.window.k >= target.window.k
                            : b.window == target.window;
    if (!inside) return fail("branch window outside the target window", bi);
  }
  for (std::uint32_t a : target.digits) {
    if (!windows_cover(target, cert.branches, a)) {
      return fail("branches do not cover every window for digit " + std::to_string(a));
    }
  }

  for (std::size_t bi = 0; bi < cert.branches.size(); ++bi) {
    const Branch& b = cert.branches[bi];
    const TargetForm bt = branch_target(target, b.digit, b.window);
    ConstraintState state;
    for (std::size_t si = 0; si < b.steps.size(); ++si) {
      const Step& recorded = b.steps[si];
      StepResult redo;
      try {
        redo = std::visit(
            [&](const auto& s) -> StepResult {
              using T = std::decay_t<decltype(s)>;
              if constexpr (std::is_same_v<T, ResidueIntersection>) {
                if (s.window != b.window) throw std::invalid_argument("step window differs from branch window");
                return apply_residue_intersection(state, bt, s.modulus, cert.lattice_cap);
              } else if constexpr (std::is_same_v<T, DivisibilityCascade>) {
                return apply_divisibility_cascade(state, bt, s.d, s.p, cert.lattice_cap);
              } else {
                return apply_window_extension(state, bt, s.base_window, s.modulus);
              }
            },
            recorded);
      } catch (const std::exception& e) {
        return fail(std::string("step does not apply: ") + e.what(), bi, si);
      }
      if (redo.step != recorded) return fail(step_divergence(recorded, redo.step), bi, si);
      state = std::move(redo.state);
    }
    if (state != b.final_state) return fail("final state does not match replay: " +
                                                describe_state_diff(state, b.final_state), bi);
  }

  const bool all_empty = std::all_of(cert.branches.begin(), cert.branches.end(),
                                     [](const Branch& b) { return b.final_state.empty(); });
  if ((cert.conclusion == Conclusion::empty) != all_empty) {
    return fail("conclusion does not match the replayed branches");
  }

  if (!std::is_sorted(cert.exceptions.begin(), cert.exceptions.end()) ||
      std::adjacent_find(cert.exceptions.begin(), cert.exceptions.end()) != cert.exceptions.end()) {
    return fail("exceptions must be sorted and unique");
  }
  for (const auto& e : cert.exceptions) {
    if (!satisfies(target, e.n, e.k, e.m, e.a)) {
      return fail("exception (n=" + std::to_string(e.n) + ", m=" + std::to_string(e.m) +
                  ", a=" + std::to_string(e.a) + ", k=" + std::to_string(e.k) +
                  ") does not satisfy the equation");
    }
  }
  for (std::size_t bi = 0; bi < cert.branches.size(); ++bi) {
    const Branch& b = cert.branches[bi];
    if (b.final_state.m_tail_checked < target.min_m) continue;
    try {
      for (const auto& h : bounded_solutions(branch_target(target, b.digit, b.window),
                                             b.final_state.m_tail_checked)) {
        if (!contains_record(cert.exceptions, h)) {
          return fail("small-m solution n=" + std::to_string(h.n) + " m=" + std::to_string(h.m) +
                          " missing from exceptions", bi);
        }
      }
    } catch (const std::exception& e) {
      return fail(std::string("small-m region not checkable: ") + e.what(), bi);
    }
  }
  return {};
}

std::vector<std::uint32_t> surviving_digits_after(const Certificate& cert, Residue modulus) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a : cert.target.digits) {
    bool survives = false;
    for (const auto& b : cert.branches) {
      if (b.digit != a) continue;
      for (const auto& s : b.steps) {
        const auto* ri = std::get_if<ResidueIntersection>(&s);
        if (ri && ri->modulus == modulus) {
          survives = survives || !ri->result.empty();
          break;
        }
      }
    }
    if (survives) out.push_back(a);
  }
  return out;
}

std::vector<Residue> used_moduli(const Certificate& cert) {
  std::vector<Residue> out;
  for (const auto& b : cert.branches) {
    for (const auto& s : b.steps) {
      Residue q = 0;
      if (const auto* ri = std::get_if<ResidueIntersection>(&s)) q = ri->modulus;
      if (const auto* we = std::get_if<WindowExtension>(&s)) q = we->modulus;
      if (q != 0 && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
    }
  }
  return out;
}

}  // namespace repsieve
