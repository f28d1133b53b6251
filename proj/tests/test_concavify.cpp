#include "doctest.h"
#include "stratcomm/binary_example.hpp"
#include "stratcomm/concavify.hpp"
#include "stratcomm/error.hpp"
#include "support.hpp"

using namespace stratcomm;

namespace {

// Chord of Ψ_e between its jump points q = 1/3 (value 0.5 just above) and
// q = 21/23 (value 1 just above), evaluated at the prior 1/2.
double chord_value() {
  const double a = 1.0 / 3.0, b = 21.0 / 23.0;
  return 0.5 + (0.5 - a) / (b - a) * (1.0 - 0.5);
}

Scenario without_state(const Scenario& s) {
  ScenarioAlphabets a = s.alphabets();
  a.z = Alphabet("z", {"none"});
  const Dist p = s.prior();
  return Scenario(a, Joint({2, 1}, {p[0], p[1]}), s.channel(), UtilityTable::state_independent(1, {{0, 1}, {0, 1}}),
                  UtilityTable::state_independent(1, {{9, 0}, {4, 10}}));
}

}  // namespace

TEST_CASE("unconstrained value at the binary instance") {
  const Scenario s = paper_iv_scenario();
  const SolveResult r = concavify_unconstrained(s, s.prior(), GridSpec::default_for(2));
  CHECK(std::abs(r.value - chord_value()) < 1e-6);
  CHECK(std::abs(r.value - 0.6437) < 2e-3);
  CHECK(r.splitting.size() <= 3);
  CHECK(std::isinf(r.constraint_slack));
}

TEST_CASE("degenerate priors and utilities") {
  const Scenario s = paper_iv_scenario();
  const Scenario flat(s.alphabets(), s.source(), s.channel(), UtilityTable::state_independent(2, {{2.5, 2.5}, {2.5, 2.5}}),
                      s.utility_decoder());
  CHECK(std::abs(concavify_unconstrained(flat, flat.prior(), GridSpec{}).value - 2.5) < 1e-12);
  for (std::size_t u = 0; u < 2; ++u) {
    const Dist vertex = Dist::point_mass(2, u);
    CHECK(std::abs(concavify_unconstrained(s, vertex, GridSpec{}).value - average_utility(s, vertex)) < 1e-12);
  }
}

TEST_CASE("constrained value") {
  const Scenario s = paper_iv_scenario();
  const GridSpec g = GridSpec::default_for(2);
  const SolveResult c01 = concavify_constrained(s, s.prior(), 0.1, g);
  CHECK(std::abs(c01.value - 0.63) < 0.01);
  CHECK(std::abs(c01.information - 0.1) < 1e-6);
  CHECK(c01.splitting.size() <= 3);

  CHECK(std::abs(concavify_constrained(s, s.prior(), 1.0, g).value - 0.6437) < 2e-3);
  CHECK(std::abs(concavify_constrained(s, s.prior(), 0.0, g).value - 0.6) < 1e-9);
}

TEST_CASE("lagrangian") {
  const Scenario s = paper_iv_scenario();
  const GridSpec g = GridSpec::default_for(2);
  const double uncon = concavify_unconstrained(s, s.prior(), g).value;
  CHECK(lagrangian_value(s, s.prior(), 0.1, 0.0, g) == uncon);

  const double lp = concavify_constrained(s, s.prior(), 0.1, g).value;
  for (int k = 0; k <= 40; ++k) CHECK(lagrangian_value(s, s.prior(), 0.1, k * 0.05, g) >= lp - 1e-9);
  for (int k = 0; k <= 40; ++k) CHECK(lagrangian_value(s, s.prior(), 1.0, k * 0.05, g) >= uncon - 1e-9);

  const SolveResult l01 = lagrangian_solve(s, s.prior(), 0.1, g);
  CHECK(std::abs(l01.value - lp) < 1e-3);
  CHECK(std::abs(l01.value - 0.63) < 0.01);

  const SolveResult inactive = lagrangian_solve(s, s.prior(), 1.0, g);
  REQUIRE(inactive.dual_t);
  CHECK(*inactive.dual_t == 0.0);
  CHECK(std::abs(inactive.value - uncon) < 1e-12);

  CHECK(std::abs(lagrangian_solve(s, s.prior(), 0.0, g).value - 0.6) < 1e-3);
}

TEST_CASE("brute-force scan") {
  const Scenario s = paper_iv_scenario();
  CHECK(std::abs(brute_force_direct(s, 1.0, 2, 0.01).value - 0.6437) < 5e-3);
  const SolveResult b01 = brute_force_direct(s, 0.1, 2, 0.01);
  CHECK(std::abs(b01.value - 0.63) < 0.01);
  CHECK(b01.information <= 0.1 + 1e-9);
  REQUIRE(b01.kernel);
  CHECK(brute_force_direct(s, 0.3, 1, 0.1).value == zero_capacity_value(s));
}

TEST_CASE("sandwich and monotonicity on random scenarios") {
  oracle::Rng rng(43);
  for (int k = 0; k < 12; ++k) {
    const std::size_t nu = 2 + k % 2;
    const Scenario s = oracle::random_scenario(rng, nu, 2, 2 + k % 2);
    GridSpec g = GridSpec::default_for(nu);
    if (nu > 2) g.resolution = 60;
    const double range = s.utility_encoder().max() - s.utility_encoder().min();
    double prev = -1e300;
    for (double c : {0.0, 0.05, 0.2, 0.5, 2.0}) {
      const SolveResult lp = concavify_constrained(s, s.prior(), c, g);
      CHECK(lp.value >= prev - 1e-9);
      prev = lp.value;
      CHECK(lp.value >= zero_capacity_value(s) - 1e-9);
      CHECK(lp.splitting.size() <= nu + 1);
      CHECK(lp.information <= c + 1e-6);
      const double lag = lagrangian_value(s, s.prior(), c, 0.7, g);
      CHECK(lag >= lp.value - 1e-9);
      if (nu == 2) {
        const SolveResult bf = brute_force_direct(s, c, 2, 0.02);
        CHECK(bf.value <= lp.value + 0.02 * range);
      }
    }
  }
}

TEST_CASE("removing the state raises the value") {
  const Scenario s = paper_iv_scenario();
  const Scenario bare = without_state(s);
  const double v = concavify_unconstrained(bare, bare.prior(), GridSpec::default_for(2)).value;
  CHECK(std::abs(v - 0.5 / 0.6) < 2e-3);
  CHECK(v > concavify_unconstrained(s, s.prior(), GridSpec::default_for(2)).value);
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.resolution = 1;
  CHECK_THROWS_AS(g.validate(), Error);
  g.resolution = 10;
  g.breakpoint_offsets = {0.0};
  CHECK_THROWS_AS(g.validate(), Error);
  g.breakpoint_offsets = {0.5};
  CHECK_THROWS_AS(g.validate(), Error);
  CHECK(GridSpec::default_for(2).resolution == 2000);
  CHECK(GridSpec::default_for(3).resolution == 200);
}

TEST_CASE("belief grid includes shifted breakpoints") {
  const Scenario s = paper_iv_scenario();
  const auto atoms = belief_grid(s, GridSpec::default_for(2));
  bool near_nu1 = false, near_nu2 = false;
  for (const auto& a : atoms) {
    if (!a.breakpoint) continue;
    if (std::abs(a.belief[1] - 1.0 / 3.0) < 1e-8) near_nu1 = true;
    if (std::abs(a.belief[1] - 21.0 / 23.0) < 1e-8) near_nu2 = true;
  }
  CHECK(near_nu1);
  CHECK(near_nu2);
}
