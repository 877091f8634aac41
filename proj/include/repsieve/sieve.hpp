#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "repsieve/modular.hpp"
#include "repsieve/oracle.hpp"
#include "repsieve/target.hpp"

namespace repsieve {

inline constexpr std::uint64_t kDefaultLatticeCap = 10'000'000;

/// Raised when a refinement would need a lattice with more than the
/// configured number of (n, m) cells.
class LatticeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A residue class n mod L paired with a class m mod M.
struct ResiduePair {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  friend bool operator==(const ResiduePair&, const ResiduePair&) = default;
  friend auto operator<=>(const ResiduePair&, const ResiduePair&) = default;
};

/// Joint feasible set for (n, m). Any solution with m > m_tail_checked has
/// (n mod n_modulus, m mod m_modulus) in `feasible`; smaller m are left to a
/// direct check. `feasible` is kept sorted and unique.
struct ConstraintState {
  std::uint64_t n_modulus = 1;  // L
  std::uint64_t m_modulus = 1;  // M
  std::uint64_t m_tail_checked = 0;
  std::vector<ResiduePair> feasible{{0, 0}};

  bool empty() const { return feasible.empty(); }
  /// Sorted distinct n classes modulo `modulus`, which must divide L.
  std::vector<std::uint64_t> n_classes(std::uint64_t modulus) const;
  /// Sorted distinct m classes modulo `modulus`, which must divide M.
  std::vector<std::uint64_t> m_classes(std::uint64_t modulus) const;
  friend bool operator==(const ConstraintState&, const ConstraintState&) = default;
};

/// Left-hand residues of one intersection step: a sequence or product
/// cycle for fixed windows, a closure table for open windows.
using LhsResidues = std::variant<ResidueCycle, WindowClosure>;

/// Residues of both sides modulo `modulus` are compared and only
/// compatible (n, m) classes survive.
struct ResidueIntersection {
  Residue modulus = 0;
  std::uint32_t digit = 0;
  Window window;
  LhsResidues lhs;
  EventualCycle repunit;
  ConstraintState result;
  friend bool operator==(const ResidueIntersection&, const ResidueIntersection&) = default;
};

/// All n classes are multiples of d, so term(d) | term(n); a prime p
/// dividing term(d) must then divide the repunit, which pins m.
struct DivisibilityCascade {
  enum class Route { order, repunit_cycle };
  std::uint64_t d = 0;
  std::uint64_t p = 0;
  std::uint32_t digit = 0;
  Route route = Route::order;
  std::uint64_t order = 0;  // order of the base mod p; Route::order only
  EventualCycle repunit;    // repunit residues mod p; Route::repunit_cycle only
  ConstraintState result;
  friend bool operator==(const DivisibilityCascade&, const DivisibilityCascade&) = default;
};

/// Every window of base_window + 1 consecutive terms is divisible by
/// `modulus` while the repdigit never is, so no window of size
/// >= base_window can be a repdigit.
struct WindowExtension {
  std::uint64_t base_window = 0;
  Residue modulus = 0;
  std::uint32_t digit = 0;
  ResidueCycle product_cycle;
  EventualCycle repunit;
  ConstraintState result;
  friend bool operator==(const WindowExtension&, const WindowExtension&) = default;
};

using Step = std::variant<ResidueIntersection, DivisibilityCascade, WindowExtension>;

struct StepResult {
  ConstraintState state;
  Step step;
};

/// A target restricted to one digit; `target.digits` has exactly one entry.
/// Fixed windows refine with sequence/product cycles, open windows with
/// closure tables.
StepResult apply_residue_intersection(const ConstraintState& state, const TargetForm& target,
                                      Residue modulus,
                                      std::uint64_t lattice_cap = kDefaultLatticeCap);

StepResult apply_divisibility_cascade(const ConstraintState& state, const TargetForm& target,
                                      std::uint64_t d, std::uint64_t p,
                                      std::uint64_t lattice_cap = kDefaultLatticeCap);

/// Applies to targets whose window is all_from(k) with k >= base_window.
StepResult apply_window_extension(const ConstraintState& state, const TargetForm& target,
                                  std::uint64_t base_window, Residue modulus);

enum class Strategy { paper_order, greedy_smallest_survivor };
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct SmallCaseBound {
  std::uint64_t max_n = 300;
  std::uint64_t max_m = 150;
  friend bool operator==(const SmallCaseBound&, const SmallCaseBound&) = default;
};

struct ProveOptions {
  std::vector<Residue> pool;
  Strategy strategy = Strategy::paper_order;
  std::uint64_t lattice_cap = kDefaultLatticeCap;
  SmallCaseBound small_case_bound;
  /// Try divisibility cascades after each intersection (balancing, k = 0).
  bool cascades = false;
  /// Largest window size searched for a window-extension step.
  std::uint64_t max_extension_window = 8;
  unsigned threads = 1;
};

/// Sub-proof for one digit and one window range.
struct Branch {
  std::uint32_t digit = 0;
  Window window;
  std::vector<Step> steps;
  ConstraintState final_state;
  friend bool operator==(const Branch&, const Branch&) = default;
};

struct SolutionRecord {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t m = 0;
  std::uint32_t a = 0;
  friend bool operator==(const SolutionRecord&, const SolutionRecord&) = default;
  friend auto operator<=>(const SolutionRecord&, const SolutionRecord&) = default;
};

enum class Conclusion { empty, residual };

struct Certificate {
  int schema = 1;
  TargetForm target;
  Strategy strategy = Strategy::paper_order;
  std::vector<Residue> pool;
  std::uint64_t lattice_cap = kDefaultLatticeCap;
  SmallCaseBound small_case_bound;
  bool cascades = false;
  std::vector<Branch> branches;
  std::vector<SolutionRecord> exceptions;
  Conclusion conclusion = Conclusion::empty;
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

Certificate prove(const TargetForm& target, const ProveOptions& options);

struct VerifyReport {
  bool ok = true;
  std::optional<std::size_t> branch;  // first diverging branch
  std::optional<std::size_t> step;    // first diverging step within it
  std::string message;
};

VerifyReport verify_certificate(const Certificate& cert);

/// Moduli in `pool` whose left-hand period divides n_lattice and whose
/// repunit cycle length divides m_lattice (0 disables either filter).
std::vector<Residue> filter_pool_by_lattice(const TargetForm& target,
                                            const std::vector<Residue>& pool,
                                            std::uint64_t n_lattice, std::uint64_t m_lattice);

/// Moduli in [2, max_modulus] usable for this target's recurrence.
std::vector<Residue> modulus_range(const TargetForm& target, Residue max_modulus);

/// Digits whose branch is still nonempty right after the step with this
/// modulus (branches that died earlier count as eliminated).
std::vector<std::uint32_t> surviving_digits_after(const Certificate& cert, Residue modulus);

/// Moduli actually used by a certificate's steps, in first-use order.
std::vector<Residue> used_moduli(const Certificate& cert);

}  // namespace repsieve
