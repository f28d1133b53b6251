#include "stratcomm/binary_example.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stratcomm/concavify.hpp"
#include "stratcomm/error.hpp"

namespace stratcomm {

void BinaryParams::validate() const {
  for (double x : {p0, delta1, delta2}) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::kValidation, "binary parameters must lie in [0,1]");
  }
}

Scenario binary_scenario(const BinaryParams& bp) {
  bp.validate();
  ScenarioAlphabets ab{Alphabet("u", {"u1", "u2"}), Alphabet("z", {"z1", "z2"}), Alphabet("x", {"x1", "x2"}),
                       Alphabet("y", {"y1", "y2"}), Alphabet("v", {"v1", "v2"})};
  const double q = bp.p0;
  // rows u1, u2; columns z1, z2
  Joint source({2, 2}, {(1.0 - q) * (1.0 - bp.delta1), (1.0 - q) * bp.delta1, q * bp.delta2, q * (1.0 - bp.delta2)});
  auto enc = UtilityTable::state_independent(2, {{0.0, 1.0}, {0.0, 1.0}});
  auto dec = UtilityTable::state_independent(2, {{9.0, 0.0}, {4.0, 10.0}});
  return Scenario(std::move(ab), std::move(source), Kernel::identity(2), std::move(enc), std::move(dec));
}

Scenario paper_iv_scenario() { return binary_scenario(BinaryParams{0.5, 0.7, 0.9}); }

BinaryParams binary_params(const Scenario& s) {
  if (s.nu() != 2 || s.nz() != 2) throw Error(ErrorKind::kValidation, "binary example needs |U| = |Z| = 2");
  BinaryParams bp;
  bp.p0 = s.prior()[1];
  bp.delta1 = s.state_kernel()(0, 1);
  bp.delta2 = s.state_kernel()(1, 0);
  return bp;
}

double decoder_threshold(const Scenario& s) {
  if (s.nu() != 2 || s.nv() != 2) throw Error(ErrorKind::kValidation, "threshold needs |U| = |V| = 2");
  const auto& phi = s.utility_decoder();
  for (std::size_t z = 1; z < s.nz(); ++z)
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t v = 0; v < 2; ++v)
        if (phi(u, z, v) != phi(u, 0, v)) {
          throw Error(ErrorKind::kValidation, "threshold needs state-independent decoder utilities");
        }
  // (1 - r) d1 + r d2 = 0 with d_u = φ_d(u, v1) - φ_d(u, v2)
  const double d1 = phi(0, 0, 0) - phi(0, 0, 1);
  const double d2 = phi(1, 0, 0) - phi(1, 0, 1);
  if (d1 == d2) throw Error(ErrorKind::kValidation, "decoder never switches action");
  const double r = d1 / (d1 - d2);
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::kValidation, "decoder never switches action");
  return r;
}

Crossover kernel_from_posteriors(const BinaryParams& bp, PosteriorPair pp) {
  const double p0 = bp.p0, q1 = pp.q1, q2 = pp.q2;
  if (q1 == q2) throw Error(ErrorKind::kSingularPair, "q1 == q2: the posterior map is singular");
  if (!((q1 <= p0 && p0 <= q2) || (q2 <= p0 && p0 <= q1))) {
    throw Error(ErrorKind::kOutOfRange, "p0 does not lie between q1 and q2");
  }
  Crossover c;
  c.alpha = (1.0 - q2) * (q1 - p0) / ((1.0 - p0) * (q1 - q2));
  c.beta = q1 * (p0 - q2) / (p0 * (q1 - q2));
  return c;
}

PosteriorPair posteriors_from_kernel(const BinaryParams& bp, Crossover c) {
  const double p0 = bp.p0;
  PosteriorPair pp;
  pp.q1 = p0 * c.beta / (p0 * c.beta + (1.0 - p0) * (1.0 - c.alpha));
  pp.q2 = p0 * (1.0 - c.beta) / (p0 * (1.0 - c.beta) + (1.0 - p0) * c.alpha);
  return pp;
}

DisclosureKernel crossover_kernel(Crossover c) {
  return DisclosureKernel{Kernel(2, 2, {1.0 - c.alpha, c.alpha, c.beta, 1.0 - c.beta})};
}

StatePosteriors conditional_posteriors(const BinaryParams& bp, double q) {
  StatePosteriors out;
  out.given_z1 = q * bp.delta2 / ((1.0 - q) * (1.0 - bp.delta1) + q * bp.delta2);
  out.given_z2 = q * (1.0 - bp.delta2) / ((1.0 - q) * bp.delta1 + q * (1.0 - bp.delta2));
  return out;
}

Thresholds thresholds(const BinaryParams& bp, double gamma) {
  Thresholds t;
  t.nu1 = gamma * (1.0 - bp.delta1) / (bp.delta2 * (1.0 - gamma) + gamma * (1.0 - bp.delta1));
  t.nu2 = gamma * bp.delta1 / (gamma * bp.delta1 + (1.0 - bp.delta2) * (1.0 - gamma));
  return t;
}

namespace {

double weight_z1(const BinaryParams& bp, double q) { return (1.0 - q) * (1.0 - bp.delta1) + q * bp.delta2; }
double weight_z2(const BinaryParams& bp, double q) { return (1.0 - q) * bp.delta1 + q * (1.0 - bp.delta2); }

}  // namespace

double binary_average_utility(const BinaryParams& bp, double gamma, double q) {
  const auto p = conditional_posteriors(bp, q);
  const double a = weight_z1(bp, q) > 0.0 && p.given_z1 > gamma ? 1.0 : 0.0;
  const double b = weight_z2(bp, q) > 0.0 && p.given_z2 > gamma ? 1.0 : 0.0;
  return weight_z1(bp, q) * a + weight_z2(bp, q) * b;
}

double binary_average_entropy(const BinaryParams& bp, double q) {
  const auto p = conditional_posteriors(bp, q);
  double h = 0.0;
  if (weight_z1(bp, q) > 0.0) h += weight_z1(bp, q) * binary_entropy(p.given_z1);
  if (weight_z2(bp, q) > 0.0) h += weight_z2(bp, q) * binary_entropy(p.given_z2);
  return h;
}

double split_entropy(const BinaryParams& bp, PosteriorPair pp, bool with_side_info) {
  if (pp.q1 == pp.q2) throw Error(ErrorKind::kSingularPair, "q1 == q2");
  const double lambda = (bp.p0 - pp.q2) / (pp.q1 - pp.q2);
  const double mu = (pp.q1 - bp.p0) / (pp.q1 - pp.q2);
  if (with_side_info) return lambda * binary_average_entropy(bp, pp.q1) + mu * binary_average_entropy(bp, pp.q2);
  return lambda * binary_entropy(pp.q1) + mu * binary_entropy(pp.q2);
}

std::optional<double> constrained_breakpoint(const BinaryParams& bp, double gamma, double capacity) {
  const auto nu = thresholds(bp, gamma);
  const double required = binary_average_entropy(bp, bp.p0) - capacity;
  auto slack = [&](double q1) { return split_entropy(bp, {q1, nu.nu2}, true) - required; };
  if (!(nu.nu1 < bp.p0 && bp.p0 < nu.nu2)) return std::nullopt;
  if (slack(nu.nu1) >= 0.0) return std::nullopt;
  // Σ λ h increases to h(p0) as q1 -> p0, so the root is bracketed.
  double lo = nu.nu1, hi = bp.p0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (slack(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

std::size_t Region::count(RegionCell c) const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), c));
}

Region feasibility_region(const BinaryParams& bp, double capacity, bool with_side_info, std::size_t grid) {
  if (grid < 2) throw Error(ErrorKind::kValidation, "region grid must be at least 2");
  bp.validate();
  Region r;
  r.grid = grid;
  r.cells.resize(grid * grid);
  const double required =
      (with_side_info ? binary_average_entropy(bp, bp.p0) : binary_entropy(bp.p0)) - capacity;
  const double step = 1.0 / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    const double q1 = static_cast<double>(i) * step;
    for (std::size_t j = 0; j < grid; ++j) {
      const double q2 = static_cast<double>(j) * step;
      auto& cell = r.cells[i * grid + j];
      const bool plausible = (q1 <= bp.p0 && bp.p0 <= q2) || (q2 <= bp.p0 && bp.p0 <= q1);
      if (!plausible) {
        cell = RegionCell::kImplausible;
      } else if (q1 == q2) {
        cell = RegionCell::kFeasible;
      } else {
        cell = split_entropy(bp, {q1, q2}, with_side_info) >= required - kFeasibilityTol ? RegionCell::kFeasible
                                                                                          : RegionCell::kInfeasible;
      }
    }
  }
  return r;
}

namespace {

// Upper concave envelope of (xs, ys) (xs sorted ascending), evaluated at xs.
std::vector<double> upper_envelope(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> out(xs.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (k + 1 < hull.size() && xs[hull[k + 1]] < xs[i]) ++k;
    if (k + 1 >= hull.size() || xs[hull[k]] == xs[i]) {
      out[i] = std::max(ys[i], ys[hull[k]]);
      continue;
    }
    const std::size_t a = hull[k], b = hull[k + 1];
    const double t = (xs[i] - xs[a]) / (xs[b] - xs[a]);
    out[i] = std::max(ys[i], ys[a] + t * (ys[b] - ys[a]));
  }
  return out;
}

std::vector<double> sample_axis(std::size_t samples, const std::vector<double>& extra) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < samples; ++i) xs.push_back(static_cast<double>(i) / static_cast<double>(samples - 1));
  for (double x : extra)
    if (x >= 0.0 && x <= 1.0) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

std::vector<std::pair<std::string, Table>> figure_data(const Scenario& s, double capacity,
                                                       const FigureOptions& options) {
  if (options.samples < 2) throw Error(ErrorKind::kValidation, "figure sampling needs at least 2 points");
  const auto bp = binary_params(s);
  const double gamma = decoder_threshold(s);
  const auto nu = thresholds(bp, gamma);
  const auto nu3 = constrained_breakpoint(bp, gamma, capacity);
  constexpr double kOff = 1e-9;

  std::vector<std::pair<std::string, Table>> out;

  // Posteriors after (w, z) as functions of the belief after w.
  {
    Table t{{"q", "posterior_z1", "posterior_z2"}, {}};
    for (double q : sample_axis(options.samples, {})) {
      const auto p = conditional_posteriors(bp, q);
      t.add_row({q, p.given_z1, p.given_z2});
    }
    out.emplace_back("fig6_posteriors", std::move(t));
  }

  std::vector<double> q_extra{nu.nu1 - kOff, nu.nu1 + kOff, nu.nu2 - kOff, nu.nu2 + kOff, bp.p0};
  if (nu3) q_extra.push_back(*nu3);
  const auto qs = sample_axis(options.samples, q_extra);
  std::vector<double> psi(qs.size()), h(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    psi[i] = average_utility(s, Dist::binary(qs[i]));
    h[i] = average_entropy(s, Dist::binary(qs[i]));
  }

  // Average utility and its concave envelope over q.
  {
    const auto cav = upper_envelope(qs, psi);
    Table t{{"q", "utility", "concavified"}, {}};
    for (std::size_t i = 0; i < qs.size(); ++i) t.add_row({qs[i], psi[i], cav[i]});
    out.emplace_back("fig7_utility", std::move(t));
  }

  // Robust utility over the belief after (w, z), with and without concavification
  // (the latter is the no-side-information benchmark), and the binary entropy.
  {
    const auto ps = sample_axis(options.samples, {gamma - kOff, gamma + kOff});
    std::vector<double> r(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) r[i] = robust_utility(s, 0, Dist::binary(ps[i]));
    const auto cav = upper_envelope(ps, r);
    Table t{{"p", "robust_utility", "concavified", "binary_entropy"}, {}};
    for (std::size_t i = 0; i < ps.size(); ++i) t.add_row({ps[i], r[i], cav[i], binary_entropy(ps[i])});
    out.emplace_back("fig8_robust_utility", std::move(t));
  }

  {
    const auto with_z = feasibility_region(bp, capacity, true, options.region_grid);
    const auto without_z = feasibility_region(bp, capacity, false, options.region_grid);
    Table t{{"q1", "q2", "with_side_info", "without_side_info"}, {}};
    const double step = 1.0 / static_cast<double>(options.region_grid - 1);
    for (std::size_t i = 0; i < options.region_grid; ++i)
      for (std::size_t j = 0; j < options.region_grid; ++j)
        t.add_row({static_cast<double>(i) * step, static_cast<double>(j) * step,
                   static_cast<double>(with_z.at(i, j)), static_cast<double>(without_z.at(i, j))});
    out.emplace_back("fig9_region", std::move(t));
  }

  {
    Table t{{"q", "utility", "average_entropy"}, {}};
    for (std::size_t i = 0; i < qs.size(); ++i) t.add_row({qs[i], psi[i], h[i]});
    out.emplace_back("fig10_entropy", std::move(t));
  }

  {
    const auto ps = sample_axis(options.samples, {gamma - kOff, gamma + kOff});
    Table t{{"p", "robust_utility", "binary_entropy"}, {}};
    for (double p : ps) t.add_row({p, robust_utility(s, 0, Dist::binary(p)), binary_entropy(p)});
    out.emplace_back("fig11_entropy", std::move(t));
  }

  // Optimal splittings: kind 0 unconstrained, 1 constrained.
  const auto g = GridSpec::default_for(2);
  const auto unconstrained = concavify_unconstrained(s, s.prior(), g);
  const auto constrained = concavify_constrained(s, s.prior(), capacity, g);
  {
    Table t{{"kind", "weight", "q", "posterior_z1", "posterior_z2", "utility", "average_entropy"}, {}};
    double kind = 0.0;
    for (const auto* r : {&unconstrained, &constrained}) {
      for (const auto& a : r->splitting.atoms()) {
        const auto p = conditional_posteriors(bp, a.belief[1]);
        t.add_row({kind, a.weight, a.belief[1], p.given_z1, p.given_z2, average_utility(s, a.belief),
                   average_entropy(s, a.belief)});
      }
      kind += 1.0;
    }
    out.emplace_back("splittings", std::move(t));
  }

  {
    const auto p0 = conditional_posteriors(bp, bp.p0);
    Table t{{"p0", "delta1", "delta2", "gamma", "p01", "p02", "nu1", "nu2", "nu3", "capacity",
             "conditional_entropy", "value_unconstrained", "value_constrained"},
            {}};
    t.add_row({bp.p0, bp.delta1, bp.delta2, gamma, p0.given_z1, p0.given_z2, nu.nu1, nu.nu2,
               nu3.value_or(std::numeric_limits<double>::quiet_NaN()), capacity, s.conditional_entropy(),
               unconstrained.value, constrained.value});
    out.emplace_back("markers", std::move(t));
  }
  return out;
}

}  // namespace stratcomm
