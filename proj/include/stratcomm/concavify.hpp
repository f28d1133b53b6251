#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stratcomm/game.hpp"

namespace stratcomm {

/// Discretization of the belief simplex.
struct GridSpec {
  std::size_t resolution = 2000;  ///< lattice steps per simplex edge
  /// Shifts applied around every detected discontinuity of the average utility.
  std::vector<double> breakpoint_offsets{-1e-9, 1e-9};

  /// 2000 for binary sources, 200 otherwise.
  static GridSpec default_for(std::size_t source_size);
  /// Throws Error(kValidation) on resolution < 2 or an offset that is zero or
  /// not smaller than one lattice step.
  void validate() const;
};

/// One candidate posterior with its precomputed average utility and entropy.
struct GridAtom {
  Belief belief;
  double utility = 0.0;   ///< Ψ_e(belief)
  double entropy = 0.0;   ///< h(belief)
  bool breakpoint = false;  ///< offset-shifted discontinuity point
};

/// Lattice points of the simplex plus offset pairs around every point where
/// the decoder's best reply switches.
std::vector<GridAtom> belief_grid(const Scenario& s, const GridSpec& g);

enum class SolveMethod { kLp, kLagrangian, kDirectBruteForce };
const char* to_string(SolveMethod m) noexcept;

struct SolveResult {
  double value = 0.0;
  Splitting splitting;
  std::vector<ActionProfile> action_profiles;  ///< one per splitting atom
  std::vector<bool> at_breakpoint;             ///< atom sits at a shifted breakpoint
  double avg_entropy = 0.0;                    ///< Σ λ h(p)
  double information = 0.0;                    ///< h(prior) - Σ λ h(p) = I(U;W|Z)
  double constraint_slack = 0.0;               ///< capacity - information; +inf when unconstrained
  std::optional<double> dual_t;
  SolveMethod method = SolveMethod::kLp;
  std::optional<DisclosureKernel> kernel;      ///< set by the brute-force scan
  std::size_t iterations = 0;
};

/// cav Ψ_e at the prior over the belief grid.
SolveResult concavify_unconstrained(const Scenario& s, const Belief& prior, const GridSpec& g);

/// Grid LP: max Σ λ Ψ_e(p) s.t. Σ λ = 1, Σ λ p = prior, Σ λ h(p) >= h(prior) - capacity.
/// The returned splitting is a basic solution (at most |U| + 1 atoms).
SolveResult concavify_constrained(const Scenario& s, const Belief& prior, double capacity, const GridSpec& g);

/// cav[Ψ_e + t h](prior) - t (h(prior) - capacity); an upper bound on the
/// constrained value for every t >= 0.
double lagrangian_value(const Scenario& s, const Belief& prior, double capacity, double t, const GridSpec& g);

/// Minimizes lagrangian_value over t by golden-section search.
SolveResult lagrangian_solve(const Scenario& s, const Belief& prior, double capacity, const GridSpec& g,
                             double t_tol = 1e-6);

/// Exhaustive scan of disclosure kernels Q(w|u) whose rows lie on a grid of
/// the given step, each scored by direct_value. Returns the best kernel
/// feasible for each capacity, in the order given.
std::vector<SolveResult> brute_force_direct(const Scenario& s, const std::vector<double>& capacities,
                                            std::size_t w_size, double kernel_grid_step);

SolveResult brute_force_direct(const Scenario& s, double capacity, std::size_t w_size, double kernel_grid_step);

}  // namespace stratcomm
