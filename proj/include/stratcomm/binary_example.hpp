#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratcomm/game.hpp"
#include "stratcomm/table.hpp"

namespace stratcomm {

/// Binary source/state instance: P(u2) = p0, P(z2|u1) = delta1, P(z1|u2) = delta2.
struct BinaryParams {
  double p0 = 0.5;
  double delta1 = 0.7;
  double delta2 = 0.9;

  void validate() const;
};

/// Built-in instance: binary source and state with the persuasion utilities
/// (encoder wants v2 regardless of u; decoder wants to match u), noiseless
/// binary channel.
Scenario binary_scenario(const BinaryParams& bp);

/// binary_scenario at p0 = 0.5, delta1 = 0.7, delta2 = 0.9.
Scenario paper_iv_scenario();

/// Recovers (p0, delta1, delta2) from a scenario with |U| = |Z| = 2.
BinaryParams binary_params(const Scenario& s);

/// Belief on u2 at which the decoder is indifferent between its two actions.
/// Requires |U| = |V| = 2 and state-independent decoder utilities.
double decoder_threshold(const Scenario& s);

/// Posterior beliefs on u2 after observing w1 and w2.
struct PosteriorPair {
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Q(w1|u1) = 1 - alpha, Q(w1|u2) = beta.
struct Crossover {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Inverts the posterior map. Throws Error(kSingularPair) when q1 == q2 and
/// Error(kOutOfRange) when p0 is not weakly between q1 and q2.
Crossover kernel_from_posteriors(const BinaryParams& bp, PosteriorPair pp);

/// Forward map (alpha, beta) -> (q1, q2).
PosteriorPair posteriors_from_kernel(const BinaryParams& bp, Crossover c);

/// The disclosure kernel Q(w|u) for a crossover pair.
DisclosureKernel crossover_kernel(Crossover c);

struct StatePosteriors {
  double given_z1 = 0.0;  ///< P(u2 | q, z1)
  double given_z2 = 0.0;  ///< P(u2 | q, z2)
};

/// Belief on u2 after also observing the state, from a belief q on u2.
StatePosteriors conditional_posteriors(const BinaryParams& bp, double q);

struct Thresholds {
  double nu1 = 0.0;  ///< belief q at which the z1-posterior reaches gamma
  double nu2 = 0.0;  ///< belief q at which the z2-posterior reaches gamma
};

Thresholds thresholds(const BinaryParams& bp, double gamma);

/// Average encoder utility for the indicator utility 1(p > gamma).
double binary_average_utility(const BinaryParams& bp, double gamma, double q);

/// Average entropy H(U|Z) with U ~ (1 - q, q).
double binary_average_entropy(const BinaryParams& bp, double q);

/// Σ λ_w h(q_w) for a two-atom splitting of p0 (with_side_info) or
/// Σ λ_w H_b(q_w) (without). Requires q1 != q2.
double split_entropy(const BinaryParams& bp, PosteriorPair pp, bool with_side_info);

/// The constrained breakpoint: the q1 paired with nu2 at which the two-atom
/// splitting of p0 meets the information constraint with equality.
/// Empty when (nu1, nu2) already satisfies the constraint.
std::optional<double> constrained_breakpoint(const BinaryParams& bp, double gamma, double capacity);

enum class RegionCell : std::uint8_t { kImplausible = 0, kInfeasible = 1, kFeasible = 2 };

/// (q1, q2) on a grid x grid lattice of [0,1]^2; cell (i, j) holds
/// q1 = i / (grid - 1), q2 = j / (grid - 1).
struct Region {
  std::size_t grid = 0;
  std::vector<RegionCell> cells;

  RegionCell at(std::size_t i, std::size_t j) const { return cells[i * grid + j]; }
  std::size_t count(RegionCell c) const;
};

/// Pairs satisfying the Bayes-plausibility ordering, flagged by whether the
/// two-atom splitting fits the capacity, with or without side information.
Region feasibility_region(const BinaryParams& bp, double capacity, bool with_side_info, std::size_t grid = 400);

struct FigureOptions {
  std::size_t samples = 1001;     ///< points on [0,1] for curve datasets
  std::size_t region_grid = 400;
};

/// Named datasets for the posterior, utility, entropy and region figures.
std::vector<std::pair<std::string, Table>> figure_data(const Scenario& s, double capacity,
                                                       const FigureOptions& options = {});

}  // namespace stratcomm
