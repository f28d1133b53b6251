#include "doctest.h"
#include "stratcomm/error.hpp"
#include "stratcomm/prob.hpp"
#include "support.hpp"

using namespace stratcomm;

TEST_CASE("entropy") {
  CHECK(entropy(Dist::uniform(2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(entropy(Dist::point_mass(3, 1)) == 0.0);
  const Dist d{0.11, 0.89};
  CHECK(std::abs(entropy(d) - oracle::hb(0.11)) < 1e-12);
  CHECK(std::abs(entropy(d) - 0.49998) < 1e-4);
  CHECK(std::abs(binary_entropy(0.11) - entropy(d)) < 1e-15);
}

TEST_CASE("kl divergence") {
  const Dist half{0.5, 0.5};
  CHECK(kl_divergence(half, half).bits == 0.0);
  CHECK(kl_divergence(Dist{1.0, 0.0}, half).bits == doctest::Approx(1.0).epsilon(1e-15));
  const double d = kl_divergence(Dist{0.75, 0.25}, half).bits;
  CHECK(std::abs(d - oracle::kl({0.75, 0.25}, {0.5, 0.5})) < 1e-12);
  CHECK(std::abs(d - 0.18872) < 1e-4);

  const KlDivergence inf = kl_divergence(half, Dist{1.0, 0.0});
  CHECK_FALSE(inf.absolutely_continuous);
  CHECK(std::isinf(inf.bits));
}

TEST_CASE("kl nonnegative and zero only at equality") {
  oracle::Rng rng(7);
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = 2 + k % 4;
    const Dist p(oracle::random_dist(rng, n));
    const Dist q(oracle::random_dist(rng, n));
    const double d = kl_divergence(p, q).bits;
    CHECK(d >= 0.0);
    if (!(p == q)) CHECK(d > 0.0);
    CHECK(kl_divergence(p, p).bits == 0.0);
  }
}

TEST_CASE("mutual information") {
  const Joint product = Joint::from_prior_and_kernel(Dist{0.3, 0.7}, Kernel::from_rows({{0.2, 0.8}, {0.2, 0.8}}));
  CHECK(std::abs(mutual_information(product)) < 1e-15);
  CHECK(mutual_information(Joint({2, 2}, {0.5, 0.0, 0.0, 0.5})) == doctest::Approx(1.0).epsilon(1e-15));

  // Binary source with P(u2) = 0.5, P(z2|u1) = 0.7, P(z1|u2) = 0.9.
  const Joint uz({2, 2}, {0.15, 0.35, 0.45, 0.05});
  const double expected = 1.0 - (0.6 * oracle::hb(0.75) + 0.4 * oracle::hb(0.125));
  CHECK(std::abs(mutual_information(uz) - expected) < 1e-12);
  CHECK(std::abs(mutual_information(uz) - 0.2958) < 1e-3);
}

TEST_CASE("conditional mutual information") {
  // Axes (u, z, w) with W = U = Z.
  std::vector<double> same(8, 0.0);
  same[0] = 0.4;
  same[7] = 0.6;
  CHECK(std::abs(conditional_mutual_information(Joint({2, 2, 2}, same), 1)) < 1e-15);

  // W = U, Z independent of U: I(U;W|Z) = H(U).
  std::vector<double> indep(8, 0.0);
  const double pu[2] = {0.3, 0.7}, pz[2] = {0.6, 0.4};
  for (int u = 0; u < 2; ++u)
    for (int z = 0; z < 2; ++z) indep[(u * 2 + z) * 2 + u] = pu[u] * pz[z];
  CHECK(std::abs(conditional_mutual_information(Joint({2, 2, 2}, indep), 1) - oracle::hb(0.3)) < 1e-12);

  // Binary source with crossover kernel alpha = 0.16, beta = 0.36; Z - U - W
  // makes I(U;W|Z) = I(U;W) - I(W;Z).
  const double puz[4] = {0.15, 0.35, 0.45, 0.05};
  const double q[2][2] = {{0.84, 0.16}, {0.36, 0.64}};
  std::vector<double> uzw(8), uw(4, 0.0), zw(4, 0.0);
  for (int u = 0; u < 2; ++u)
    for (int z = 0; z < 2; ++z)
      for (int w = 0; w < 2; ++w) {
        const double p = puz[u * 2 + z] * q[u][w];
        uzw[(u * 2 + z) * 2 + w] = p;
        uw[u * 2 + w] += p;
        zw[z * 2 + w] += p;
      }
  const double lhs = conditional_mutual_information(Joint({2, 2, 2}, uzw), 1);
  CHECK(std::abs(lhs - (oracle::mi(uw, 2, 2) - oracle::mi(zw, 2, 2))) < 1e-9);
}

TEST_CASE("chain rule on random joints") {
  oracle::Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    const std::size_t nu = 2 + k % 3, nz = 2 + (k / 3) % 2, nw = 2 + (k / 6) % 3;
    const auto mass = oracle::random_dist(rng, nu * nz * nw, true);
    const Joint j({nu, nz, nw}, mass);
    const double cmi = conditional_mutual_information(j, 1);
    const double i_wz = mutual_information(j.marginal({2, 1}));
    const double i_w_uz = oracle::mi(mass, nu * nz, nw);
    CHECK(std::abs(cmi + i_wz - i_w_uz) < 1e-10);
  }
}

TEST_CASE("bayes posterior") {
  const Dist prior{0.5, 0.5};
  const Kernel state = Kernel::from_rows({{0.3, 0.7}, {0.9, 0.1}});
  CHECK(std::abs(bayes_posterior(prior, state, 0)[1] - 0.75) < 1e-15);
  CHECK(std::abs(bayes_posterior(prior, state, 1)[1] - 0.125) < 1e-15);

  const Kernel flat = Kernel::from_rows({{0.4, 0.6}, {0.4, 0.6}});
  const Dist p{0.2, 0.8};
  CHECK(std::abs(bayes_posterior(p, flat, 1)[1] - 0.8) < 1e-15);

  const Kernel blocked = Kernel::from_rows({{1.0, 0.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(bayes_posterior(p, blocked, 1), Error);
}

TEST_CASE("law of total probability") {
  oracle::Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t na = 2 + k % 3, nb = 2 + (k / 3) % 3;
    const Dist prior(oracle::random_dist(rng, na));
    std::vector<std::vector<double>> rows;
    for (std::size_t a = 0; a < na; ++a) rows.push_back(oracle::random_dist(rng, nb, true));
    const Kernel kern = Kernel::from_rows(rows);
    std::vector<double> back(na, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
      double pb = 0.0;
      for (std::size_t a = 0; a < na; ++a) pb += prior[a] * kern(a, b);
      if (pb == 0.0) continue;
      const Dist post = bayes_posterior(prior, kern, b);
      for (std::size_t a = 0; a < na; ++a) back[a] += pb * post[a];
    }
    for (std::size_t a = 0; a < na; ++a) CHECK(std::abs(back[a] - prior[a]) < 1e-12);
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(Dist({0.5, 0.4}), Error);
  CHECK_THROWS_AS(Dist({1.2, -0.2}), Error);
  CHECK_THROWS_AS(Dist(std::vector<double>{}), Error);
  CHECK_THROWS_AS(Alphabet("u", {"a", "a"}), Error);
  CHECK_THROWS_AS(Kernel(2, 2, {0.5, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(Kernel::from_rows({{0.5, 0.5}, {0.9, 0.2}}), Error);
  try {
    Joint({2, 2}, {0.1, 0.2, 0.3});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDimensionMismatch);
  }
  const Alphabet a("v", {"left", "right"});
  CHECK(a.index_of("right") == 1);
  CHECK_THROWS_AS(a.index_of("up"), Error);
}

TEST_CASE("joint marginals") {
  const Joint j({2, 3}, {0.1, 0.2, 0.1, 0.3, 0.2, 0.1});
  const Dist a = j.marginal_dist(0);
  const Dist b = j.marginal_dist(1);
  CHECK(std::abs(a[0] - 0.4) < 1e-15);
  CHECK(std::abs(b[1] - 0.4) < 1e-15);
  const Joint t = j.marginal({1, 0});
  CHECK(t.shape() == std::vector<std::size_t>{3, 2});
  CHECK(std::abs(t.at(2, 1) - 0.1) < 1e-15);
}
