#include "stratcomm/coding_sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "stratcomm/error.hpp"

namespace stratcomm {

namespace {

constexpr double kTypicalSlack = 1e-12;
constexpr std::size_t kMaxCodewords = std::size_t{1} << 24;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample(std::span<const double> weights, std::mt19937_64& rng) {
  const double r = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (r < acc) return i;
  }
  return last;
}

double l1_to_type(std::span<const std::size_t> counts, std::span<const double> target, std::size_t n) {
  double d = 0.0;
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < counts.size(); ++k) d += std::abs(static_cast<double>(counts[k]) * inv - target[k]);
  return d;
}

bool marginal_typical(std::span<const Symbol> a, std::size_t na, std::span<const double> target, double delta) {
  std::vector<std::size_t> counts(na, 0);
  for (Symbol s : a) ++counts[s];
  return l1_to_type(counts, target, a.size()) <= delta + kTypicalSlack;
}

// Joint type of three sequences against a row-major na x nb x nc target.
bool triple_typical(std::span<const Symbol> a, std::span<const Symbol> b, std::span<const Symbol> c,
                    std::size_t na, std::size_t nb, std::size_t nc, std::span<const double> target,
                    double delta) {
  std::vector<std::size_t> counts(na * nb * nc, 0);
  for (std::size_t i = 0; i < a.size(); ++i) ++counts[(a[i] * nb + b[i]) * nc + c[i]];
  return l1_to_type(counts, target, a.size()) <= delta + kTypicalSlack;
}

Joint uw_joint(const Scenario& s, const Kernel& q) {
  return Joint::from_prior_and_kernel(s.prior(), q);
}

Joint zw_joint(const Scenario& s, const Kernel& q) {
  const std::size_t nu = s.nu(), nz = s.nz(), nw = q.to_size();
  std::vector<double> zw(nz * nw, 0.0);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t z = 0; z < nz; ++z)
      for (std::size_t w = 0; w < nw; ++w) zw[z * nw + w] += s.source().at(u, z) * q(u, w);
  return Joint({nz, nw}, std::move(zw));
}

}  // namespace

CodebookConfig CodebookConfig::with_default_rates(const Scenario& s, DisclosureKernel disclosure, Dist input_dist,
                                                  std::size_t n, double eta, double delta) {
  if (disclosure.kernel.from_size() != s.nu())
    throw Error(ErrorKind::kDimensionMismatch, "disclosure kernel rows must match |U|");
  const double i_uw = mutual_information(uw_joint(s, disclosure.kernel));
  const double i_zw = mutual_information(zw_joint(s, disclosure.kernel));
  CodebookConfig c;
  c.n = n;
  c.eta = eta;
  c.delta = delta;
  c.rate_rl = std::max(0.0, i_zw - eta);
  c.rate_r = std::max(0.0, i_uw + eta - c.rate_rl);
  c.disclosure = std::move(disclosure);
  c.input_dist = std::move(input_dist);
  return c;
}

std::vector<std::string> CodebookConfig::check(const Scenario& s, double channel_capacity) const {
  if (n < 1 || n > 64) throw Error(ErrorKind::kValidation, "blocklength must be in [1, 64]");
  if (!(rate_r >= 0.0) || !(rate_rl >= 0.0) || !std::isfinite(rate_r) || !std::isfinite(rate_rl))
    throw Error(ErrorKind::kValidation, "rates must be finite and nonnegative");
  if (!(eta >= 0.0)) throw Error(ErrorKind::kValidation, "eta must be nonnegative");
  if (!(delta > 0.0)) throw Error(ErrorKind::kValidation, "delta must be positive");
  if (disclosure.kernel.from_size() != s.nu())
    throw Error(ErrorKind::kDimensionMismatch, "disclosure kernel rows must match |U|");
  if (disclosure.w_size() > std::numeric_limits<Symbol>::max() ||
      s.channel().from_size() > std::numeric_limits<Symbol>::max())
    throw Error(ErrorKind::kValidation, "alphabet too large for the simulator");
  if (input_dist.size() != s.channel().from_size())
    throw Error(ErrorKind::kDimensionMismatch, "input distribution size must match |X|");
  const std::size_t words = codeword_count(n, rate_r) * codeword_count(n, rate_rl);
  if (words > kMaxCodewords) throw Error(ErrorKind::kValidation, "codebook too large");

  std::vector<std::string> warnings;
  const double i_uw = mutual_information(uw_joint(s, disclosure.kernel));
  const double i_zw = mutual_information(zw_joint(s, disclosure.kernel));
  std::ostringstream msg;
  msg.precision(6);
  if (std::abs(rate_r + rate_rl - (i_uw + eta)) > 1e-9) {
    msg << "R + R_L = " << rate_r + rate_rl << " differs from I(U;W) + eta = " << i_uw + eta;
    warnings.push_back(msg.str());
    msg.str("");
  }
  if (rate_rl > i_zw - eta + 1e-12 && rate_rl > 0.0) {
    msg << "R_L = " << rate_rl << " exceeds I(Z;W) - eta = " << i_zw - eta;
    warnings.push_back(msg.str());
    msg.str("");
  }
  if (rate_r > channel_capacity - eta + 1e-12) {
    msg << "R = " << rate_r << " exceeds capacity - eta = " << channel_capacity - eta;
    warnings.push_back(msg.str());
  }
  return warnings;
}

std::size_t codeword_count(std::size_t n, double rate) {
  const double e = static_cast<double>(n) * rate;
  if (e > 40.0) throw Error(ErrorKind::kValidation, "codebook too large");
  return static_cast<std::size_t>(std::ceil(std::exp2(e) - 1e-9));
}

Codebook build_codebook(const Scenario& s, const CodebookConfig& config, std::uint64_t seed) {
  config.check(s, 0.0);
  const Kernel& q = config.disclosure.kernel;
  Codebook cb;
  cb.n = config.n;
  cb.num_m = codeword_count(config.n, config.rate_r);
  cb.num_l = codeword_count(config.n, config.rate_rl);
  cb.nu = s.nu();
  cb.nz = s.nz();
  cb.nw = q.to_size();
  cb.nx = s.channel().from_size();
  cb.ny = s.channel().to_size();
  cb.seed = seed;

  const Joint uw = uw_joint(s, q);
  cb.targets.uw = uw.values();
  cb.targets.zw = zw_joint(s, q).values();
  cb.targets.uzw.assign(cb.nu * cb.nz * cb.nw, 0.0);
  for (std::size_t u = 0; u < cb.nu; ++u)
    for (std::size_t z = 0; z < cb.nz; ++z)
      for (std::size_t w = 0; w < cb.nw; ++w)
        cb.targets.uzw[(u * cb.nz + z) * cb.nw + w] = s.source().at(u, z) * q(u, w);
  const Joint xy = Joint::from_prior_and_kernel(config.input_dist, s.channel());
  cb.targets.xy = xy.values();
  cb.targets.y = xy.marginal_dist(1).values();

  const Dist qw = uw.marginal_dist(1);
  std::mt19937_64 rng(seed);
  cb.w_words.resize(cb.num_m * cb.num_l * cb.n);
  for (auto& w : cb.w_words) w = static_cast<Symbol>(sample(qw.mass(), rng));
  cb.x_words.resize(cb.num_m * cb.n);
  for (auto& x : cb.x_words) x = static_cast<Symbol>(sample(config.input_dist.mass(), rng));
  return cb;
}

bool jointly_typical(std::span<const Symbol> a, std::span<const Symbol> b, std::size_t na, std::size_t nb,
                     std::span<const double> target, double delta) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorKind::kDimensionMismatch, "sequence lengths differ");
  std::vector<std::size_t> counts(na * nb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) ++counts[a[i] * nb + b[i]];
  return l1_to_type(counts, target, a.size()) <= delta + kTypicalSlack;
}

Encoding encode(std::span<const Symbol> u_seq, const Codebook& cb, double delta) {
  if (u_seq.size() != cb.n) throw Error(ErrorKind::kDimensionMismatch, "source sequence length must be n");
  for (std::size_t m = 0; m < cb.num_m; ++m)
    for (std::size_t l = 0; l < cb.num_l; ++l)
      if (jointly_typical(u_seq, cb.w_word(m, l), cb.nu, cb.nw, cb.targets.uw, delta)) return {m, l, true};
  return {0, 0, false};
}

WzDecoding wz_decode(std::span<const Symbol> y_seq, std::span<const Symbol> z_seq, const Codebook& cb,
                     double delta) {
  if (y_seq.size() != cb.n || z_seq.size() != cb.n)
    throw Error(ErrorKind::kDimensionMismatch, "sequence lengths must be n");
  WzDecoding out;
  std::size_t hits = 0;
  for (std::size_t m = 0; m < cb.num_m; ++m) {
    if (jointly_typical(cb.x_word(m), y_seq, cb.nx, cb.ny, cb.targets.xy, delta)) {
      if (hits++ == 0) out.m = m;
    }
  }
  if (hits != 1) return out;
  hits = 0;
  for (std::size_t l = 0; l < cb.num_l; ++l) {
    if (jointly_typical(z_seq, cb.w_word(out.m, l), cb.nz, cb.nw, cb.targets.zw, delta)) {
      if (hits++ == 0) out.l = l;
    }
  }
  out.found = hits == 1;
  return out;
}

EncoderTable encoder_table(const Codebook& cb, double delta, std::size_t cap) {
  if (cb.n > 64) throw Error(ErrorKind::kEnumerationTooLarge, "blocklength above 64");
  std::size_t total = 1;
  for (std::size_t i = 0; i < cb.n; ++i) {
    if (total > cap / cb.nu) throw Error(ErrorKind::kEnumerationTooLarge, "|U|^n exceeds the enumeration cap");
    total *= cb.nu;
  }
  const std::size_t n = cb.n, nu = cb.nu, nw = cb.nw;
  const double inv = 1.0 / static_cast<double>(n);
  const double limit = delta + kTypicalSlack;

  // Per-codeword symbol masks; words whose own type is already too far from
  // Q(w) can never be typical with anything and are skipped.
  std::vector<double> qw(nw, 0.0), pu(nu, 0.0);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t w = 0; w < nw; ++w) {
      qw[w] += cb.targets.uw[u * nw + w];
      pu[u] += cb.targets.uw[u * nw + w];
    }
  struct Word {
    std::uint32_t m, l;
    std::vector<std::uint64_t> masks;
  };
  std::vector<Word> words;
  for (std::size_t m = 0; m < cb.num_m; ++m)
    for (std::size_t l = 0; l < cb.num_l; ++l) {
      Word wd{static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(l), std::vector<std::uint64_t>(nw, 0)};
      const auto word = cb.w_word(m, l);
      for (std::size_t i = 0; i < n; ++i) wd.masks[word[i]] |= std::uint64_t{1} << i;
      double d = 0.0;
      for (std::size_t w = 0; w < nw; ++w) d += std::abs(std::popcount(wd.masks[w]) * inv - qw[w]);
      if (d <= limit) words.push_back(std::move(wd));
    }

  EncoderTable t;
  t.n = n;
  t.nu = nu;
  t.m.assign(total, 0);
  t.l.assign(total, 0);
  t.covered.assign(total, 0);
  std::vector<std::uint64_t> umask(nu);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (idx > 0) {
      for (std::size_t i = n; i-- > 0;) {
        if (++digits[i] < nu) break;
        digits[i] = 0;
      }
    }
    std::fill(umask.begin(), umask.end(), 0);
    for (std::size_t i = 0; i < n; ++i) umask[digits[i]] |= std::uint64_t{1} << i;
    double du = 0.0;
    for (std::size_t u = 0; u < nu; ++u) du += std::abs(std::popcount(umask[u]) * inv - pu[u]);
    if (du > limit) continue;
    for (const Word& wd : words) {
      double d = 0.0;
      for (std::size_t u = 0; u < nu && d <= limit; ++u)
        for (std::size_t w = 0; w < nw; ++w)
          d += std::abs(std::popcount(umask[u] & wd.masks[w]) * inv - cb.targets.uw[u * nw + w]);
      if (d <= limit) {
        t.m[idx] = wd.m;
        t.l[idx] = wd.l;
        t.covered[idx] = 1;
        break;
      }
    }
  }
  return t;
}

std::vector<Dist> exact_posterior(std::span<const Symbol> y_seq, std::span<const Symbol> z_seq,
                                  const Codebook& cb, const Scenario& s, const EncoderTable& table) {
  const std::size_t n = cb.n, nu = cb.nu;
  if (y_seq.size() != n || z_seq.size() != n || table.n != n || table.nu != nu)
    throw Error(ErrorKind::kDimensionMismatch, "sequence or table does not match the codebook");

  std::vector<double> likelihood(cb.num_m, 1.0);
  for (std::size_t m = 0; m < cb.num_m; ++m) {
    const auto x = cb.x_word(m);
    for (std::size_t i = 0; i < n && likelihood[m] > 0.0; ++i) likelihood[m] *= s.channel()(x[i], y_seq[i]);
  }

  // Depth-first over source sequences: each node adds its subtree mass to
  // the posterior of its position, so the work is linear in the tree size.
  std::vector<double> acc(n * nu, 0.0);
  auto dfs = [&](auto&& self, std::size_t depth, double prefix, std::size_t index) -> double {
    if (depth == n) return prefix * likelihood[table.m[index]];
    double total = 0.0;
    for (std::size_t a = 0; a < nu; ++a) {
      const double p = prefix * s.source().at(a, z_seq[depth]);
      if (p <= 0.0) continue;
      const double sub = self(self, depth + 1, p, index * nu + a);
      acc[depth * nu + a] += sub;
      total += sub;
    }
    return total;
  };
  const double total = dfs(dfs, 0, 1.0, 0);
  if (!(total > 0.0)) throw Error(ErrorKind::kZeroProbabilityObservation, "observed (y, z) has zero probability");

  std::vector<Dist> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(Dist::normalized(std::vector<double>(acc.begin() + i * nu, acc.begin() + (i + 1) * nu)));
  return out;
}

std::vector<Dist> exact_posterior(std::span<const Symbol> y_seq, std::span<const Symbol> z_seq,
                                  const Codebook& cb, const Scenario& s, double delta, std::size_t cap) {
  return exact_posterior(y_seq, z_seq, cb, s, encoder_table(cb, delta, cap));
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t index) {
  return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

TrialOutcome simulate_trial(const Scenario& s, const CodebookConfig& config, const SimulationOptions& options,
                            std::uint64_t seed, const Codebook* shared_codebook, const EncoderTable* shared_table) {
  Codebook own_cb;
  const Codebook* cb = shared_codebook;
  if (cb == nullptr) {
    own_cb = build_codebook(s, config, splitmix64(seed ^ 0x636f6465626f6f6bULL));
    cb = &own_cb;
  }
  EncoderTable own_table;
  const EncoderTable* table = shared_table;
  if (table == nullptr) {
    own_table = encoder_table(*cb, config.delta, options.enumeration_cap);
    table = &own_table;
  }
  const std::size_t n = cb->n, nu = cb->nu, nz = cb->nz, nw = cb->nw;
  const Kernel& q = config.disclosure.kernel;
  std::mt19937_64 rng(seed);

  TrialOutcome t;
  t.u.resize(n);
  t.z.resize(n);
  const auto& source = s.source().values();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = sample(source, rng);
    t.u[i] = static_cast<Symbol>(k / nz);
    t.z[i] = static_cast<Symbol>(k % nz);
  }
  std::size_t index = 0;
  for (Symbol a : t.u) index = index * nu + a;
  t.encoding = {table->m[index], table->l[index], table->covered[index] != 0};
  const auto w = cb->w_word(t.encoding.m, t.encoding.l);
  const auto x = cb->x_word(t.encoding.m);
  t.w.assign(w.begin(), w.end());
  t.x.assign(x.begin(), x.end());
  t.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.y[i] = static_cast<Symbol>(sample(s.channel().row(t.x[i]), rng));

  t.decoding = wz_decode(t.y, t.z, *cb, config.delta);
  const bool indices_agree = t.decoding.found && t.decoding.m == t.encoding.m && t.decoding.l == t.encoding.l;
  const bool source_typical =
      triple_typical(t.u, t.z, t.w, nu, nz, nw, cb->targets.uzw, config.delta);
  const bool channel_typical = jointly_typical(t.x, t.y, cb->nx, cb->ny, cb->targets.xy, config.delta);
  t.error = !(t.encoding.covered && indices_agree && source_typical && channel_typical);

  t.posteriors = exact_posterior(t.y, t.z, *cb, s, *table);
  t.actions.resize(n);
  t.kl.resize(n);
  const double kl_limit = options.alpha * options.alpha / (2.0 * std::log(2.0));
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Dist& post = t.posteriors[i];
    const std::size_t z = t.z[i];
    const std::size_t v = best_reply_actions(s, z, post).chosen;
    t.actions[i] = v;
    t.utility_encoder += s.utility_encoder()(t.u[i], z, v);
    t.utility_decoder += s.utility_decoder()(t.u[i], z, v);

    std::vector<double> target(nu);
    double mass = 0.0;
    for (std::size_t a = 0; a < nu; ++a) {
      target[a] = s.source().at(a, z) * q(a, t.w[i]);
      mass += target[a];
    }
    if (mass > 0.0) {
      for (double& v2 : target) v2 /= mass;
      const KlDivergence d = kl_divergence(post.mass(), target);
      t.kl[i] = d.absolutely_continuous ? d.bits : std::numeric_limits<double>::infinity();
    } else {
      t.kl[i] = std::numeric_limits<double>::infinity();
    }
    if (t.kl[i] <= kl_limit) ++t.typical_positions;

    if (t.decoding.found) {
      // Action the decoder would take on the Wyner-Ziv estimate's target belief.
      const auto w_hat = cb->w_word(t.decoding.m, t.decoding.l);
      std::vector<double> est(nu);
      double est_mass = 0.0;
      for (std::size_t a = 0; a < nu; ++a) {
        est[a] = s.source().at(a, z) * q(a, w_hat[i]);
        est_mass += est[a];
      }
      if (est_mass > 0.0) {
        for (double& e : est) e /= est_mass;
        if (best_reply_actions(s, z, std::span<const double>(est)).chosen == v) ++agree;
      }
    }
  }
  t.utility_encoder /= static_cast<double>(n);
  t.utility_decoder /= static_cast<double>(n);
  if (t.decoding.found) t.wz_agreement = static_cast<double>(agree) / static_cast<double>(n);

  const bool zw_typical = jointly_typical(t.z, t.w, nz, nw, cb->targets.zw, config.delta);
  const bool y_typical = marginal_typical(t.y, cb->ny, cb->targets.y, config.delta);
  t.in_b_set = zw_typical && y_typical &&
               static_cast<double>(t.typical_positions) >= (1.0 - options.gamma) * static_cast<double>(n) - 1e-12;
  return t;
}

SimReport simulate(const Scenario& s, const CodebookConfig& config, std::size_t trials, std::uint64_t seed,
                   const SimulationOptions& options) {
  if (trials < 1) throw Error(ErrorKind::kValidation, "trials must be at least 1");
  if (!(options.alpha > 0.0) || !(options.gamma > 0.0) || options.gamma > 1.0)
    throw Error(ErrorKind::kValidation, "alpha must be positive and gamma in (0, 1]");

  SimReport r;
  r.trials = trials;
  r.n = config.n;
  r.rate_r = config.rate_r;
  r.rate_rl = config.rate_rl;
  r.alpha = options.alpha;
  r.gamma = options.gamma;
  r.delta = config.delta;
  r.seed = seed;
  r.codewords_m = codeword_count(config.n, config.rate_r);
  r.codewords_l = codeword_count(config.n, config.rate_rl);
  r.typicality_interpretation =
      "error: index mismatch, uncovered source, or (u,z,w) / (x,y) joint type outside delta; "
      "B set: (z,w) joint type and y type within delta";

  Codebook shared_cb;
  EncoderTable shared_table;
  if (!options.fresh_codebook_per_trial) {
    shared_cb = build_codebook(s, config, splitmix64(seed ^ 0x636f6465626f6f6bULL));
    shared_table = encoder_table(shared_cb, config.delta, options.enumeration_cap);
  }
  const Codebook* cb_ptr = options.fresh_codebook_per_trial ? nullptr : &shared_cb;
  const EncoderTable* table_ptr = options.fresh_codebook_per_trial ? nullptr : &shared_table;

  std::vector<TrialOutcome> outcomes(trials);
  std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min(threads, trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < trials; k = next++) {
      try {
        outcomes[k] = simulate_trial(s, config, options, trial_seed(seed, k), cb_ptr, table_ptr);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  double sum_u = 0.0, sum_u2 = 0.0, sum_d = 0.0;
  double kl_sum_all = 0.0, kl_sum_ok = 0.0, agree_sum = 0.0;
  std::size_t errors = 0, covered = 0, decoded = 0, in_b = 0;
  for (const TrialOutcome& t : outcomes) {
    sum_u += t.utility_encoder;
    sum_u2 += t.utility_encoder * t.utility_encoder;
    sum_d += t.utility_decoder;
    errors += t.error ? 1 : 0;
    covered += t.encoding.covered ? 1 : 0;
    in_b += t.in_b_set ? 1 : 0;
    if (t.decoding.found) {
      ++decoded;
      agree_sum += t.wz_agreement;
    }
    for (double d : t.kl) {
      const bool finite = std::isfinite(d);
      if (finite) {
        kl_sum_all += d;
        r.kl_all.max = std::max(r.kl_all.max, d);
        ++r.kl_all.positions;
      } else {
        ++r.kl_all.infinite;
      }
      if (t.error) continue;
      if (finite) {
        kl_sum_ok += d;
        r.kl_non_error.max = std::max(r.kl_non_error.max, d);
        ++r.kl_non_error.positions;
      } else {
        ++r.kl_non_error.infinite;
      }
    }
  }
  const double nt = static_cast<double>(trials);
  r.mean_utility_encoder = sum_u / nt;
  const double var = trials > 1 ? std::max(0.0, (sum_u2 - nt * r.mean_utility_encoder * r.mean_utility_encoder) / (nt - 1.0)) : 0.0;
  r.stderr_utility_encoder = std::sqrt(var / nt);
  r.mean_utility_decoder = sum_d / nt;
  r.error_rate = static_cast<double>(errors) / nt;
  r.coverage_rate = static_cast<double>(covered) / nt;
  r.decode_rate = static_cast<double>(decoded) / nt;
  r.b_set_frequency = static_cast<double>(in_b) / nt;
  r.kl_all.mean = r.kl_all.positions ? kl_sum_all / static_cast<double>(r.kl_all.positions) : 0.0;
  r.kl_non_error.mean =
      r.kl_non_error.positions ? kl_sum_ok / static_cast<double>(r.kl_non_error.positions)
                               : std::numeric_limits<double>::quiet_NaN();
  r.wz_action_agreement = decoded ? agree_sum / static_cast<double>(decoded) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace stratcomm
