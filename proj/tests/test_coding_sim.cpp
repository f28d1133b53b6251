#include "doctest.h"
#include "stratcomm/binary_example.hpp"
#include "stratcomm/coding_sim.hpp"
#include "stratcomm/error.hpp"
#include "support.hpp"

using namespace stratcomm;

namespace {

Scenario with_channel(const Scenario& s, Kernel channel) {
  return Scenario(s.alphabets(), s.source(), std::move(channel), s.utility_encoder(), s.utility_decoder());
}

CodebookConfig manual_config(std::size_t n, double r, double rl, DisclosureKernel q, Dist input, double delta) {
  CodebookConfig c;
  c.n = n;
  c.rate_r = r;
  c.rate_rl = rl;
  c.delta = delta;
  c.disclosure = std::move(q);
  c.input_dist = std::move(input);
  return c;
}

// Probability that n i.i.d. fair bits have an empirical distribution within
// L1 distance delta of (1/2, 1/2).
double balanced_type_probability(std::size_t n, double delta) {
  double p = 0.0, binom = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
    const double l1 = 2.0 * std::abs(static_cast<double>(k) / static_cast<double>(n) - 0.5);
    if (l1 <= delta + 1e-12) p += binom;
  }
  return p / std::pow(2.0, static_cast<double>(n));
}

}  // namespace

TEST_CASE("codeword counts") {
  CHECK(codeword_count(8, 0.5) == 16);
  CHECK(codeword_count(8, 0.0) == 1);
  CHECK(codeword_count(10, 0.1) == 2);
  CHECK(codeword_count(16, 0.273) == 21);
}

TEST_CASE("default rates") {
  const Scenario s = paper_iv_scenario();
  const DisclosureKernel q = crossover_kernel({0.05, 0.475});
  const CodebookConfig c = CodebookConfig::with_default_rates(s, q, Dist::uniform(2), 16);
  const Joint uw = Joint::from_prior_and_kernel(s.prior(), q.kernel);
  CHECK(std::abs(c.rate_r + c.rate_rl - (mutual_information(uw) + 0.05)) < 1e-9);
  CHECK(c.check(s, 1.0).empty());
  CHECK_FALSE(c.check(s, 0.1).empty());

  CodebookConfig bad = c;
  bad.delta = 0.0;
  CHECK_THROWS_AS(bad.check(s, 1.0), Error);
  bad = c;
  bad.input_dist = Dist::uniform(3);
  CHECK_THROWS_AS(bad.check(s, 1.0), Error);
}

TEST_CASE("codebooks are reproducible and follow Q(w)") {
  const Scenario s = paper_iv_scenario();
  const DisclosureKernel q = crossover_kernel({0.05, 0.475});
  const CodebookConfig c = manual_config(8, 0.875, 0.0, q, Dist::uniform(2), 0.1);
  const Codebook a = build_codebook(s, c, 99);
  const Codebook b = build_codebook(s, c, 99);
  CHECK(a.w_words == b.w_words);
  CHECK(a.x_words == b.x_words);
  CHECK(a.num_m == 128);
  CHECK(a.num_l == 1);
  CHECK(build_codebook(s, c, 100).w_words != a.w_words);

  const double qw1 = 0.5 * 0.95 + 0.5 * 0.475;
  const double count = static_cast<double>(a.w_words.size());
  double freq = 0.0;
  for (Symbol w : a.w_words) freq += w == 0 ? 1.0 : 0.0;
  freq /= count;
  CHECK(std::abs(freq - qw1) <= 3.0 * std::sqrt(qw1 * (1.0 - qw1) / count));
}

TEST_CASE("encoding") {
  const Scenario s = paper_iv_scenario();
  CodebookConfig c = manual_config(4, 0.5, 0.0, DisclosureKernel{Kernel::identity(2)}, Dist::uniform(2), 0.1);
  Codebook cb = build_codebook(s, c, 1);
  const std::vector<Symbol> u{0, 1, 1, 0};
  cb.w_words = {1, 1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1, 0};
  const Encoding e = encode(u, cb, c.delta);
  CHECK(e.covered);
  CHECK(e.m == 2);
  const auto w = cb.w_word(e.m, e.l);
  CHECK(std::vector<Symbol>(w.begin(), w.end()) == u);

  CodebookConfig single = manual_config(4, 0.0, 0.0, DisclosureKernel{Kernel::identity(2)}, Dist::uniform(2), 0.1);
  Codebook one = build_codebook(s, single, 1);
  one.w_words = {1, 1, 1, 1};
  const Encoding f = encode(u, one, single.delta);
  CHECK_FALSE(f.covered);
  CHECK(f.m == 0);
  CHECK(f.l == 0);
}

TEST_CASE("mask-based encoder table matches the direct encoder") {
  oracle::Rng rng(53);
  for (int k = 0; k < 20; ++k) {
    const std::size_t nu = 2 + k % 2;
    const Scenario s = oracle::random_scenario(rng, nu, 2, 2);
    std::vector<std::vector<double>> rows;
    for (std::size_t u = 0; u < nu; ++u) rows.push_back(oracle::random_dist(rng, 2));
    const double delta = 0.2 + 0.1 * (k % 4);
    const CodebookConfig c =
        manual_config(nu == 2 ? 8 : 6, 0.4, 0.2, DisclosureKernel{Kernel::from_rows(rows)}, Dist::uniform(2), delta);
    const Codebook cb = build_codebook(s, c, 1000 + k);
    const EncoderTable t = encoder_table(cb, delta);
    std::vector<Symbol> seq(cb.n, 0);
    for (std::size_t idx = 0; idx < t.m.size(); ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = cb.n; i-- > 0;) {
        seq[i] = static_cast<Symbol>(rest % nu);
        rest /= nu;
      }
      const Encoding e = encode(seq, cb, delta);
      CHECK(e.covered == (t.covered[idx] != 0));
      CHECK(e.m == t.m[idx]);
      CHECK(e.l == t.l[idx]);
    }
  }
}

TEST_CASE("two-stage decoding") {
  const Scenario s = paper_iv_scenario();
  const DisclosureKernel silent{Kernel::from_rows({{1.0}, {1.0}})};
  const CodebookConfig c = manual_config(4, 0.5, 0.0, silent, Dist::uniform(2), 0.3);
  Codebook cb = build_codebook(s, c, 5);
  cb.x_words = {0, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1};
  const std::vector<Symbol> z{0, 0, 1, 1};
  for (std::size_t m = 0; m < 4; ++m) {
    const auto x = cb.x_word(m);
    const WzDecoding d = wz_decode(std::vector<Symbol>(x.begin(), x.end()), z, cb, c.delta);
    CHECK(d.found);
    CHECK(d.m == m);
  }

  const Scenario deaf = with_channel(s, Kernel::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
  Codebook cb2 = build_codebook(deaf, c, 5);
  cb2.x_words = cb.x_words;
  CHECK_FALSE(wz_decode(std::vector<Symbol>{0, 0, 1, 1}, z, cb2, c.delta).found);
}

TEST_CASE("exact posterior special cases") {
  const Scenario s = paper_iv_scenario();
  const DisclosureKernel q = crossover_kernel({0.05, 0.475});

  // Output independent of input: the posterior is P(u | z_i).
  const Scenario deaf = with_channel(s, Kernel::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
  const CodebookConfig c = manual_config(8, 0.5, 0.1, q, Dist::uniform(2), 0.3);
  const Codebook cb = build_codebook(deaf, c, 17);
  const std::vector<Symbol> z{0, 1, 1, 0, 0, 0, 1, 0}, y{1, 0, 1, 1, 0, 0, 1, 0};
  const auto post = exact_posterior(y, z, cb, deaf, c.delta);
  for (std::size_t i = 0; i < 8; ++i) {
    const double expect = bayes_posterior(deaf.prior(), deaf.state_kernel(), z[i])[1];
    CHECK(std::abs(post[i][1] - expect) < 1e-12);
  }

  // Noiseless channel, injective encoder: point masses on the true sequence.
  const CodebookConfig c2 = manual_config(2, 1.0, 0.0, DisclosureKernel{Kernel::identity(2)}, Dist::uniform(2), 0.1);
  Codebook cb2 = build_codebook(s, c2, 3);
  cb2.x_words = {0, 0, 0, 1, 1, 0, 1, 1};
  EncoderTable t;
  t.n = 2;
  t.nu = 2;
  t.m = {0, 1, 2, 3};
  t.l = {0, 0, 0, 0};
  t.covered = {1, 1, 1, 1};
  const auto exact = exact_posterior(std::vector<Symbol>{1, 0}, std::vector<Symbol>{1, 0}, cb2, s, t);
  CHECK(exact[0][1] == 1.0);
  CHECK(exact[1][0] == 1.0);
}

TEST_CASE("enumeration cap") {
  const Scenario s = paper_iv_scenario();
  const CodebookConfig c = manual_config(21, 0.1, 0.0, crossover_kernel({0.05, 0.475}), Dist::uniform(2), 0.1);
  const Codebook cb = build_codebook(s, c, 1);
  try {
    encoder_table(cb, 0.1);
    FAIL("expected EnumerationTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEnumerationTooLarge);
  }
}

TEST_CASE("trial invariants") {
  const Scenario s = paper_iv_scenario();
  const CodebookConfig c =
      CodebookConfig::with_default_rates(s, crossover_kernel({0.05, 0.475}), Dist::uniform(2), 10, 0.05, 0.3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const TrialOutcome t = simulate_trial(s, c, {}, seed);
    for (std::size_t i = 0; i < c.n; ++i) {
      double total = 0.0;
      for (std::size_t u = 0; u < 2; ++u) total += t.posteriors[i][u];
      CHECK(std::abs(total - 1.0) < 1e-9);
      double chosen = 0.0;
      for (std::size_t u = 0; u < 2; ++u) chosen += t.posteriors[i][u] * s.utility_decoder()(u, t.z[i], t.actions[i]);
      for (std::size_t v = 0; v < 2; ++v) {
        double alt = 0.0;
        for (std::size_t u = 0; u < 2; ++u) alt += t.posteriors[i][u] * s.utility_decoder()(u, t.z[i], v);
        CHECK(alt <= chosen + 1e-9);
      }
    }
    CHECK(t.utility_encoder >= 0.0);
    CHECK(t.utility_encoder <= 1.0);
  }
}

TEST_CASE("coverage is bounded by the source typicality probability") {
  const Scenario s = paper_iv_scenario();
  for (std::size_t n : {8, 16}) {
    const CodebookConfig c =
        CodebookConfig::with_default_rates(s, crossover_kernel({0.05, 0.475}), Dist::uniform(2), n, 0.05, 0.1);
    const SimReport r = simulate(s, c, 500, 2024);
    const double bound = balanced_type_probability(n, 0.1);
    CHECK(r.coverage_rate <= bound + 3.0 * std::sqrt(bound * (1.0 - bound) / 500.0));
  }
  CHECK(balanced_type_probability(8, 0.1) == doctest::Approx(70.0 / 256.0));
}

TEST_CASE("zero-capacity control") {
  const Scenario s = with_channel(paper_iv_scenario(), Kernel::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
  const CodebookConfig c =
      CodebookConfig::with_default_rates(s, crossover_kernel({0.05, 0.475}), Dist::uniform(2), 8, 0.05, 0.1);
  const SimReport r = simulate(s, c, 2000, 77);
  CHECK(std::abs(r.mean_utility_encoder - 0.6) <= 3.0 * r.stderr_utility_encoder);
}

TEST_CASE("deterministic source") {
  const Scenario base = paper_iv_scenario();
  const Scenario s(base.alphabets(), Joint({2, 2}, {1.0, 0.0, 0.0, 0.0}), base.channel(), base.utility_encoder(),
                   base.utility_decoder());
  const CodebookConfig c =
      CodebookConfig::with_default_rates(s, DisclosureKernel{Kernel::identity(2)}, Dist::point_mass(2, 0), 8, 0.0, 0.1);
  const SimReport r = simulate(s, c, 50, 5);
  CHECK(r.error_rate == 0.0);
  CHECK(r.kl_all.mean == 0.0);
  CHECK(r.kl_all.max == 0.0);
  CHECK(r.kl_all.infinite == 0);
}

TEST_CASE("reports do not depend on thread count") {
  const Scenario s = paper_iv_scenario();
  const CodebookConfig c =
      CodebookConfig::with_default_rates(s, crossover_kernel({0.05, 0.475}), Dist::uniform(2), 10, 0.05, 0.2);
  SimulationOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const SimReport a = simulate(s, c, 60, 8, one);
  const SimReport b = simulate(s, c, 60, 8, many);
  CHECK(a.mean_utility_encoder == b.mean_utility_encoder);
  CHECK(a.error_rate == b.error_rate);
  CHECK(a.kl_all.mean == b.kl_all.mean);
  CHECK(a.b_set_frequency == b.b_set_frequency);
  CHECK(a.coverage_rate == b.coverage_rate);
}
