#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stratcomm/game.hpp"

namespace stratcomm {

using Symbol = std::uint16_t;

/// Parameters of the random Wyner-Ziv code.
struct CodebookConfig {
  std::size_t n = 8;        ///< blocklength
  double rate_r = 0.0;      ///< bits/symbol carried by the channel index m
  double rate_rl = 0.0;     ///< bits/symbol of the binning index l
  double eta = 0.05;        ///< rate slack
  double delta = 0.1;       ///< L1 typicality tolerance
  DisclosureKernel disclosure;
  Dist input_dist;          ///< channel input distribution for the x-codewords

  /// R_L = max(0, I(Z;W) - eta) and R = I(U;W) + eta - R_L.
  static CodebookConfig with_default_rates(const Scenario& s, DisclosureKernel disclosure, Dist input_dist,
                                           std::size_t n, double eta = 0.05, double delta = 0.1);

  /// Throws Error(kValidation) on malformed parameters; returns warnings for
  /// rate conditions that do not hold (sum rate, binning rate, channel rate).
  std::vector<std::string> check(const Scenario& s, double channel_capacity) const;
};

/// Target distributions the typicality tests compare against.
struct TypicalityTargets {
  std::vector<double> uw;   ///< P(u) Q(w|u), |U| x |W|
  std::vector<double> zw;   ///< Q(z,w), |Z| x |W|
  std::vector<double> uzw;  ///< P(u,z) Q(w|u), |U| x |Z| x |W|
  std::vector<double> xy;   ///< P*(x) T(y|x), |X| x |Y|
  std::vector<double> y;    ///< output marginal
};

/// Realized random codebook: w-words indexed (m, l), x-words indexed m.
class Codebook {
 public:
  std::size_t n = 0;
  std::size_t num_m = 0;
  std::size_t num_l = 0;
  std::size_t nu = 0, nz = 0, nw = 0, nx = 0, ny = 0;
  std::uint64_t seed = 0;
  std::vector<Symbol> w_words;  ///< (m * num_l + l) * n + i
  std::vector<Symbol> x_words;  ///< m * n + i
  TypicalityTargets targets;

  std::span<const Symbol> w_word(std::size_t m, std::size_t l) const {
    return std::span<const Symbol>(w_words).subspan((m * num_l + l) * n, n);
  }
  std::span<const Symbol> x_word(std::size_t m) const {
    return std::span<const Symbol>(x_words).subspan(m * n, n);
  }
};

/// ceil(2^{n R}) with a small guard against rounding up exact powers.
std::size_t codeword_count(std::size_t n, double rate);

/// Draws w-words i.i.d. from Q(w) and x-words i.i.d. from the input
/// distribution; deterministic in (config, seed).
Codebook build_codebook(const Scenario& s, const CodebookConfig& config, std::uint64_t seed);

/// L1 distance between the joint type of (a, b) and `target`
/// (row-major na x nb) is at most delta.
bool jointly_typical(std::span<const Symbol> a, std::span<const Symbol> b, std::size_t na, std::size_t nb,
                     std::span<const double> target, double delta);

struct Encoding {
  std::size_t m = 0;
  std::size_t l = 0;
  bool covered = false;  ///< false: no typical pair, fallback (0, 0) sent
};

/// First (m, l) in lexicographic order whose w-word is jointly typical with u.
Encoding encode(std::span<const Symbol> u_seq, const Codebook& cb, double delta);

struct WzDecoding {
  std::size_t m = 0;
  std::size_t l = 0;
  bool found = false;  ///< false when either stage has zero or several candidates
};

/// Two-stage lookup: the unique m with (y, x(m)) typical, then the unique l
/// with (z, w(m, l)) typical.
WzDecoding wz_decode(std::span<const Symbol> y_seq, std::span<const Symbol> z_seq, const Codebook& cb,
                     double delta);

/// The encoder's choice for every source sequence, indexed by the sequence
/// read as a base-|U| number (first symbol most significant).
struct EncoderTable {
  std::size_t n = 0;
  std::size_t nu = 0;
  std::vector<std::uint32_t> m;
  std::vector<std::uint32_t> l;
  std::vector<char> covered;
};

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

/// Throws Error(kEnumerationTooLarge) when |U|^n exceeds `cap`.
EncoderTable encoder_table(const Codebook& cb, double delta, std::size_t cap = kDefaultEnumerationCap);

/// P(U_i | y^n, z^n) for every position, by exact inversion of the
/// deterministic encoder over all |U|^n source sequences.
std::vector<Dist> exact_posterior(std::span<const Symbol> y_seq, std::span<const Symbol> z_seq,
                                  const Codebook& cb, const Scenario& s, const EncoderTable& table);
std::vector<Dist> exact_posterior(std::span<const Symbol> y_seq, std::span<const Symbol> z_seq,
                                  const Codebook& cb, const Scenario& s, double delta,
                                  std::size_t cap = kDefaultEnumerationCap);

struct SimulationOptions {
  double alpha = 0.5;   ///< KL closeness parameter: positions with D <= alpha^2 / (2 ln 2)
  double gamma = 0.25;  ///< allowed fraction of positions outside T_alpha
  std::size_t threads = 0;  ///< 0: hardware concurrency
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  bool fresh_codebook_per_trial = true;
};

/// Everything one trial produced.
struct TrialOutcome {
  std::vector<Symbol> u, z, w, x, y;
  Encoding encoding;
  WzDecoding decoding;
  bool error = false;                ///< index mismatch, or (u,z,w) / (x,y) not typical
  std::vector<Dist> posteriors;
  std::vector<std::size_t> actions;  ///< decoder's exact best reply per position
  double utility_encoder = 0.0;      ///< per-position average
  double utility_decoder = 0.0;
  std::vector<double> kl;            ///< D(P(U_i|y,z) || Q(U_i|w_i,z_i)), +inf if undefined
  std::size_t typical_positions = 0; ///< |T_alpha|
  bool in_b_set = false;
  double wz_agreement = -1.0;        ///< fraction of positions where the estimate's action matches; -1 if not decoded
};

TrialOutcome simulate_trial(const Scenario& s, const CodebookConfig& config, const SimulationOptions& options,
                            std::uint64_t trial_seed, const Codebook* shared_codebook = nullptr,
                            const EncoderTable* shared_table = nullptr);

struct KlSummary {
  double mean = 0.0;  ///< over finite values
  double max = 0.0;
  std::size_t positions = 0;
  std::size_t infinite = 0;
};

struct SimReport {
  std::size_t trials = 0;
  std::size_t n = 0;
  std::size_t codewords_m = 0;
  std::size_t codewords_l = 0;
  double rate_r = 0.0;
  double rate_rl = 0.0;
  double error_rate = 0.0;
  double coverage_rate = 0.0;
  double decode_rate = 0.0;
  double mean_utility_encoder = 0.0;
  double stderr_utility_encoder = 0.0;
  double mean_utility_decoder = 0.0;
  KlSummary kl_all;
  KlSummary kl_non_error;
  double b_set_frequency = 0.0;
  double wz_action_agreement = 0.0;  ///< over decoded trials; NaN when none decoded
  double alpha = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
  /// How the typicality conditions of the error event and the B set were
  /// evaluated on the coordinates a trial exposes.
  std::string typicality_interpretation;
};

/// Seed of trial `index` under a master seed.
std::uint64_t trial_seed(std::uint64_t master, std::size_t index);

/// Runs `trials` independent trials and reduces them in index order, so the
/// report does not depend on thread count.
SimReport simulate(const Scenario& s, const CodebookConfig& config, std::size_t trials, std::uint64_t seed,
                   const SimulationOptions& options = {});

}  // namespace stratcomm
