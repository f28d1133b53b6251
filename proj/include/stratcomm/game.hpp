#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stratcomm/prob.hpp"

namespace stratcomm {

/// Actions whose expected decoder utility is within this of the best are tied.
inline constexpr double kDecoderTieTol = 1e-9;
/// Slack allowed on the information constraint I(U;W|Z) <= C, in bits.
inline constexpr double kFeasibilityTol = 1e-9;
/// Allowed distance between a splitting's barycenter and the prior.
inline constexpr double kBarycenterTol = 1e-9;
/// Splitting weights must sum to one within this.
inline constexpr double kWeightTol = 1e-10;

/// Utility table indexed [u][z][v].
class UtilityTable {
 public:
  UtilityTable() = default;
  UtilityTable(std::size_t nu, std::size_t nz, std::size_t nv, std::vector<double> values);
  /// Table that ignores the state: values[u][v] replicated over every z.
  static UtilityTable state_independent(std::size_t nz, const std::vector<std::vector<double>>& uv);

  double operator()(std::size_t u, std::size_t z, std::size_t v) const {
    return values_[(u * nz_ + z) * nv_ + v];
  }
  std::size_t nu() const noexcept { return nu_; }
  std::size_t nz() const noexcept { return nz_; }
  std::size_t nv() const noexcept { return nv_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double min() const;
  double max() const;

  bool operator==(const UtilityTable&) const = default;

 private:
  std::size_t nu_ = 0, nz_ = 0, nv_ = 0;
  std::vector<double> values_;
};

struct ScenarioAlphabets {
  Alphabet u, z, x, y, v;
};

/// A complete problem instance: source P(u,z), channel T(y|x) and the two
/// utility tables. Immutable once built.
class Scenario {
 public:
  Scenario(ScenarioAlphabets alphabets, Joint source, Kernel channel,
           UtilityTable utility_encoder, UtilityTable utility_decoder);

  const ScenarioAlphabets& alphabets() const noexcept { return alphabets_; }
  std::size_t nu() const noexcept { return alphabets_.u.size(); }
  std::size_t nz() const noexcept { return alphabets_.z.size(); }
  std::size_t nv() const noexcept { return alphabets_.v.size(); }

  const Joint& source() const noexcept { return source_; }
  const Kernel& channel() const noexcept { return channel_; }
  const UtilityTable& utility_encoder() const noexcept { return utility_encoder_; }
  const UtilityTable& utility_decoder() const noexcept { return utility_decoder_; }

  /// P(u).
  const Dist& prior() const noexcept { return prior_; }
  /// P(z|u). Rows of zero-probability source symbols are uniform.
  const Kernel& state_kernel() const noexcept { return state_kernel_; }
  /// H(U|Z) under the source.
  double conditional_entropy() const noexcept { return conditional_entropy_; }

  bool operator==(const Scenario& other) const;

 private:
  ScenarioAlphabets alphabets_;
  Joint source_;
  Kernel channel_;
  UtilityTable utility_encoder_;
  UtilityTable utility_decoder_;
  Dist prior_;
  Kernel state_kernel_;
  double conditional_entropy_ = 0.0;
};

/// Belief over the source alphabet U.
using Belief = Dist;

struct SplittingAtom {
  double weight = 0.0;
  Belief belief;
};

/// Weighted family of beliefs; weights sum to one.
class Splitting {
 public:
  Splitting() = default;
  explicit Splitting(std::vector<SplittingAtom> atoms);

  const std::vector<SplittingAtom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  Belief barycenter() const;

 private:
  std::vector<SplittingAtom> atoms_;
};

/// Q(w|u) over an auxiliary alphabet W.
struct DisclosureKernel {
  Kernel kernel;
  std::size_t w_size() const noexcept { return kernel.to_size(); }
};

/// Decoder action per state symbol for one belief: profile[z] = v.
using ActionProfile = std::vector<std::size_t>;

/// Largest auxiliary alphabet a solver needs: min(|U| + 1, |V|^|Z|).
std::size_t auxiliary_cardinality_bound(const Scenario& s);

/// P(z) under belief p and the source's state kernel.
double state_probability(const Scenario& s, std::size_t z, std::span<const double> p);

/// Bayes update of p after observing state z. Throws
/// Error(kZeroProbabilityObservation) when P(z) = 0 under p.
Belief state_posterior(const Scenario& s, std::size_t z, std::span<const double> p);

struct BestReply {
  std::size_t chosen = 0;
  std::vector<std::size_t> decoder_optimal;
};

/// Decoder-optimal actions at (z, p) and, among them, the one worst for the
/// encoder (ties in encoder payoff broken by alphabet order).
BestReply best_reply_actions(const Scenario& s, std::size_t z, std::span<const double> p);
inline BestReply best_reply_actions(const Scenario& s, std::size_t z, const Belief& p) {
  return best_reply_actions(s, z, p.mass());
}

/// Encoder's expected utility at (z, p) under the worst-case best reply.
double robust_utility(const Scenario& s, std::size_t z, std::span<const double> p);
inline double robust_utility(const Scenario& s, std::size_t z, const Belief& p) {
  return robust_utility(s, z, p.mass());
}

/// Expectation over z of robust_utility at the z-posterior of p.
double average_utility(const Scenario& s, std::span<const double> p);
inline double average_utility(const Scenario& s, const Belief& p) { return average_utility(s, p.mass()); }

/// H(U|Z) when U ~ p and Z|U follows the source.
double average_entropy(const Scenario& s, std::span<const double> p);
inline double average_entropy(const Scenario& s, const Belief& p) { return average_entropy(s, p.mass()); }

/// Action played in each state at belief p. States with zero probability
/// under p use the best reply at p itself.
ActionProfile action_profile(const Scenario& s, std::span<const double> p);
inline ActionProfile action_profile(const Scenario& s, const Belief& p) { return action_profile(s, p.mass()); }

struct DirectValue {
  double value = 0.0;
  bool feasible = false;
  double constraint_slack = 0.0;  ///< capacity - I(U;W|Z)
  double information = 0.0;       ///< I(U;W|Z)
};

/// Value of a disclosure kernel: decoder best-replies to Q(u|z,w) for every
/// (z, w) with worst-case tie-breaking; feasible when I(U;W|Z) fits the
/// capacity. Infeasible kernels still report their value.
DirectValue direct_value(const Scenario& s, const DisclosureKernel& q, double channel_capacity);

/// Encoder utility when nothing crosses the channel: the decoder acts on
/// P(u|z) alone.
double zero_capacity_value(const Scenario& s);

struct SplittingEvaluation {
  double value = 0.0;
  Belief barycenter;
  double avg_entropy = 0.0;
  bool feasible = false;
  std::string reason;  ///< empty when feasible
};

SplittingEvaluation splitting_evaluate(const Scenario& s, const Splitting& sp, double channel_capacity);

/// Merges atoms that induce the same action profile into their weighted
/// average. Preserves the value; average entropy does not decrease.
Splitting merge_equivalent_posteriors(const Scenario& s, const Splitting& sp);

/// Splitting induced by a disclosure kernel: λ_w = Q(w), p_w = Q(u|w).
/// Zero-probability outputs are dropped.
Splitting splitting_from_kernel(const Dist& prior, const DisclosureKernel& q);

/// Inverse map: Q(w|u) = λ_w p_w(u) / P(u). Source symbols with zero prior
/// get a uniform row.
DisclosureKernel kernel_from_splitting(const Dist& prior, const Splitting& sp);

}  // namespace stratcomm
