#include "stratcomm/concavify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "stratcomm/error.hpp"
#include "stratcomm/lp.hpp"

namespace stratcomm {

GridSpec GridSpec::default_for(std::size_t source_size) {
  GridSpec g;
  g.resolution = source_size <= 2 ? 2000 : 200;
  return g;
}

void GridSpec::validate() const {
  if (resolution < 2) throw Error(ErrorKind::kValidation, "grid resolution must be at least 2");
  const double step = 1.0 / static_cast<double>(resolution);
  for (double off : breakpoint_offsets) {
    if (off == 0.0 || !(std::abs(off) < step)) {
      throw Error(ErrorKind::kValidation, "breakpoint offsets must be nonzero and smaller than the grid step");
    }
  }
}

const char* to_string(SolveMethod m) noexcept {
  switch (m) {
    case SolveMethod::kLp: return "lp";
    case SolveMethod::kLagrangian: return "lagrangian";
    case SolveMethod::kDirectBruteForce: return "direct-bruteforce";
  }
  return "unknown";
}

namespace {

void for_each_composition(std::size_t parts, std::size_t total,
                          const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> c(parts, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t left) {
    if (k + 1 == parts) {
      c[k] = left;
      fn(c);
      return;
    }
    for (std::size_t i = 0; i <= left; ++i) {
      c[k] = i;
      rec(k + 1, left - i);
    }
  };
  rec(0, total);
}

GridAtom make_atom(const Scenario& s, std::vector<double> p, bool breakpoint) {
  GridAtom a;
  a.belief = Dist::normalized(std::move(p));
  a.utility = average_utility(s, a.belief);
  a.entropy = average_entropy(s, a.belief);
  a.breakpoint = breakpoint;
  return a;
}

bool inside_simplex(const std::vector<double>& p) {
  return std::all_of(p.begin(), p.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

// Binary sources: every pairwise decoder indifference point, in closed form.
void add_binary_breakpoints(const Scenario& s, const GridSpec& g, std::vector<GridAtom>& grid) {
  const auto& phi = s.utility_decoder();
  const auto& k = s.state_kernel();
  std::vector<double> roots;
  for (std::size_t z = 0; z < s.nz(); ++z) {
    for (std::size_t v = 0; v < s.nv(); ++v) {
      for (std::size_t w = v + 1; w < s.nv(); ++w) {
        const double c1 = k(0, z) * (phi(0, z, v) - phi(0, z, w));
        const double c2 = k(1, z) * (phi(1, z, v) - phi(1, z, w));
        if (c1 == c2) continue;
        const double q = c1 / (c1 - c2);
        if (q > 0.0 && q < 1.0) roots.push_back(q);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  for (double q : roots) {
    for (double off : g.breakpoint_offsets) {
      const double x = q + off;
      if (x >= 0.0 && x <= 1.0) grid.push_back(make_atom(s, {1.0 - x, x}, true));
    }
  }
}

// Larger sources: walk lattice edges; where a state's best reply changes
// along an edge, the switching hyperplane is linear in the belief, so its
// crossing is located exactly and offset along the edge.
void add_edge_breakpoints(const Scenario& s, const GridSpec& g, std::vector<GridAtom>& grid) {
  const std::size_t nu = s.nu();
  const double res = static_cast<double>(g.resolution);
  const auto& phi = s.utility_decoder();
  const auto& k = s.state_kernel();
  for_each_composition(nu, g.resolution, [&](const std::vector<std::size_t>& c) {
    std::vector<double> p(nu);
    for (std::size_t u = 0; u < nu; ++u) p[u] = static_cast<double>(c[u]) / res;
    const auto prof_p = action_profile(s, p);
    for (std::size_t i = 0; i < nu; ++i) {
      if (c[i] == 0) continue;
      for (std::size_t j = i + 1; j < nu; ++j) {
        std::vector<double> q = p;
        q[i] = static_cast<double>(c[i] - 1) / res;
        q[j] = static_cast<double>(c[j] + 1) / res;
        const auto prof_q = action_profile(s, q);
        for (std::size_t z = 0; z < s.nz(); ++z) {
          const std::size_t a = prof_p[z], b = prof_q[z];
          if (a == b) continue;
          double gp = 0.0, gq = 0.0;
          for (std::size_t u = 0; u < nu; ++u) {
            const double d = k(u, z) * (phi(u, z, a) - phi(u, z, b));
            gp += p[u] * d;
            gq += q[u] * d;
          }
          if (!(gp - gq > 0.0)) continue;
          const double t = std::clamp(gp / (gp - gq), 0.0, 1.0);
          for (double off : g.breakpoint_offsets) {
            std::vector<double> r(nu);
            for (std::size_t u = 0; u < nu; ++u) r[u] = p[u] + t * (q[u] - p[u]);
            r[i] -= off;
            r[j] += off;
            if (inside_simplex(r)) grid.push_back(make_atom(s, std::move(r), true));
          }
        }
      }
    }
  });
}

struct GridLp {
  std::vector<GridAtom> atoms;
  Belief prior;
  double prior_entropy = 0.0;
};

GridLp prepare(const Scenario& s, const Belief& prior, const GridSpec& g) {
  if (prior.size() != s.nu()) throw Error(ErrorKind::kDimensionMismatch, "prior size differs from |U|");
  GridLp lp{belief_grid(s, g), prior, average_entropy(s, prior)};
  // The prior itself keeps the program feasible at every capacity.
  lp.atoms.push_back(make_atom(s, prior.values(), false));
  return lp;
}

// Solves max Σ λ (Ψ + t h) over the grid with barycenter = prior, optionally
// with Σ λ h >= required.
SolveResult solve_grid(const Scenario& s, const GridLp& grid, double t, std::optional<double> required,
                       double capacity) {
  const std::size_t nu = s.nu();
  const bool with_entropy_row = required.has_value();
  LpProblem problem;
  problem.rows = nu + (with_entropy_row ? 1 : 0);
  problem.b.assign(problem.rows, 0.0);
  problem.b[0] = 1.0;
  for (std::size_t u = 0; u + 1 < nu; ++u) problem.b[1 + u] = grid.prior[u];
  if (with_entropy_row) problem.b[nu] = *required - kFeasibilityTol;

  std::vector<double> col(problem.rows);
  for (const auto& a : grid.atoms) {
    col[0] = 1.0;
    for (std::size_t u = 0; u + 1 < nu; ++u) col[1 + u] = a.belief[u];
    if (with_entropy_row) col[nu] = a.entropy;
    problem.add_column(col, a.utility + t * a.entropy);
  }
  if (with_entropy_row) {
    std::fill(col.begin(), col.end(), 0.0);
    col[nu] = -1.0;
    problem.add_column(col, 0.0);
  }

  const auto sol = solve_lp(problem);
  if (sol.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kNoConvergence, std::string("grid LP ended ") + to_string(sol.status));
  }

  SolveResult out;
  out.iterations = sol.iterations;
  std::vector<SplittingAtom> atoms;
  double total = 0.0;
  for (std::size_t j = 0; j < grid.atoms.size(); ++j) {
    if (sol.x[j] > 1e-13) total += sol.x[j];
  }
  for (std::size_t j = 0; j < grid.atoms.size(); ++j) {
    if (!(sol.x[j] > 1e-13)) continue;
    const auto& a = grid.atoms[j];
    const double w = sol.x[j] / total;
    atoms.push_back({w, a.belief});
    out.value += w * a.utility;
    out.avg_entropy += w * a.entropy;
    out.action_profiles.push_back(action_profile(s, a.belief));
    out.at_breakpoint.push_back(a.breakpoint);
  }
  out.splitting = Splitting(std::move(atoms));
  out.information = std::max(0.0, grid.prior_entropy - out.avg_entropy);
  out.constraint_slack = capacity - out.information;
  return out;
}

double penalty_offset(const GridLp& grid, double capacity) { return grid.prior_entropy - capacity; }

}  // namespace

std::vector<GridAtom> belief_grid(const Scenario& s, const GridSpec& g) {
  g.validate();
  const std::size_t nu = s.nu();
  std::vector<GridAtom> grid;
  if (nu == 1) {
    grid.push_back(make_atom(s, {1.0}, false));
    return grid;
  }
  const double res = static_cast<double>(g.resolution);
  for_each_composition(nu, g.resolution, [&](const std::vector<std::size_t>& c) {
    std::vector<double> p(nu);
    for (std::size_t u = 0; u < nu; ++u) p[u] = static_cast<double>(c[u]) / res;
    grid.push_back(make_atom(s, std::move(p), false));
  });
  if (nu == 2) {
    add_binary_breakpoints(s, g, grid);
  } else {
    add_edge_breakpoints(s, g, grid);
  }
  return grid;
}

SolveResult concavify_unconstrained(const Scenario& s, const Belief& prior, const GridSpec& g) {
  const auto grid = prepare(s, prior, g);
  return solve_grid(s, grid, 0.0, std::nullopt, std::numeric_limits<double>::infinity());
}

SolveResult concavify_constrained(const Scenario& s, const Belief& prior, double capacity, const GridSpec& g) {
  if (!(capacity >= 0.0)) throw Error(ErrorKind::kValidation, "capacity must be nonnegative");
  const auto grid = prepare(s, prior, g);
  const double required = penalty_offset(grid, capacity);
  if (required <= 0.0) return solve_grid(s, grid, 0.0, std::nullopt, capacity);
  return solve_grid(s, grid, 0.0, required, capacity);
}

namespace {

double dual_at(const Scenario& s, const GridLp& grid, double capacity, double t, SolveResult* keep) {
  auto r = solve_grid(s, grid, t, std::nullopt, capacity);
  const double v = r.value + t * r.avg_entropy - t * penalty_offset(grid, capacity);
  if (keep) *keep = std::move(r);
  return v;
}

}  // namespace

double lagrangian_value(const Scenario& s, const Belief& prior, double capacity, double t, const GridSpec& g) {
  if (!(t >= 0.0)) throw Error(ErrorKind::kValidation, "multiplier must be nonnegative");
  const auto grid = prepare(s, prior, g);
  return dual_at(s, grid, capacity, t, nullptr);
}

SolveResult lagrangian_solve(const Scenario& s, const Belief& prior, double capacity, const GridSpec& g,
                             double t_tol) {
  if (!(t_tol > 0.0)) throw Error(ErrorKind::kValidation, "t tolerance must be positive");
  if (!(capacity >= 0.0)) throw Error(ErrorKind::kValidation, "capacity must be nonnegative");
  constexpr double kTCap = 1e4;
  const auto grid = prepare(s, prior, g);

  auto finish = [&](double t) {
    SolveResult r;
    const double v = dual_at(s, grid, capacity, t, &r);
    r.value = v;
    r.dual_t = t;
    r.method = SolveMethod::kLagrangian;
    return r;
  };

  const double range = s.utility_encoder().max() - s.utility_encoder().min();
  if (penalty_offset(grid, capacity) <= 0.0 || range == 0.0) return finish(0.0);

  // t* <= (max φ_e - Ψ_e(prior)) / capacity: the single atom at the prior has
  // entropy slack equal to the capacity.
  double t_max = capacity > 0.0 ? std::min(kTCap, range / capacity) : kTCap;
  auto f = [&](double t) { return dual_at(s, grid, capacity, t, nullptr); };

  const double f0 = f(0.0);
  double lo = 0.0, hi = t_max;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::size_t rounds = 0;
  for (;;) {
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    std::size_t iter = 0;
    while (b - a > t_tol) {
      if (++iter > 400) throw Error(ErrorKind::kNoConvergence, "golden-section bracket failed to shrink");
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = f(d);
      }
    }
    const double t_star = 0.5 * (a + b);
    // Expand when the minimum is pinned against the upper end.
    if (hi - t_star <= 2.0 * t_tol && hi < kTCap && ++rounds < 8) {
      lo = t_star;
      hi = std::min(kTCap, 2.0 * hi);
      continue;
    }
    const double f_star = f(t_star);
    return f0 <= f_star ? finish(0.0) : finish(t_star);
  }
}

std::vector<SolveResult> brute_force_direct(const Scenario& s, const std::vector<double>& capacities,
                                            std::size_t w_size, double kernel_grid_step) {
  const std::size_t nu = s.nu();
  if (w_size == 0 || w_size > auxiliary_cardinality_bound(s)) {
    throw Error(ErrorKind::kValidation, "w_size must lie in [1, min(|U|+1, |V|^|Z|)]");
  }
  if (!(kernel_grid_step > 0.0 && kernel_grid_step <= 0.5)) {
    throw Error(ErrorKind::kValidation, "kernel grid step must lie in (0, 0.5]");
  }
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / kernel_grid_step));

  std::vector<std::vector<std::size_t>> rows;
  for_each_composition(w_size, steps, [&](const std::vector<std::size_t>& c) { rows.push_back(c); });

  std::vector<double> best(capacities.size(), -std::numeric_limits<double>::infinity());
  std::vector<std::vector<std::size_t>> best_pick(capacities.size());
  std::vector<DirectValue> best_eval(capacities.size());

  // Relabeling W leaves the value unchanged, so only kernels whose columns
  // are in nonincreasing lexicographic order are scored.
  auto canonical = [&](const std::vector<std::size_t>& pick) {
    for (std::size_t w = 0; w + 1 < w_size; ++w) {
      for (std::size_t u = 0; u < nu; ++u) {
        const auto x = rows[pick[u]][w], y = rows[pick[u]][w + 1];
        if (x > y) break;
        if (x < y) return false;
      }
    }
    return true;
  };

  std::vector<std::size_t> pick(nu, 0);
  std::vector<double> flat(nu * w_size);
  const double denom = static_cast<double>(steps);
  for (;;) {
    if (canonical(pick)) {
      for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t w = 0; w < w_size; ++w) flat[u * w_size + w] = static_cast<double>(rows[pick[u]][w]) / denom;
      const DisclosureKernel q{Kernel(nu, w_size, flat)};
      const auto eval = direct_value(s, q, 0.0);
      for (std::size_t k = 0; k < capacities.size(); ++k) {
        if (eval.information <= capacities[k] + kFeasibilityTol && eval.value > best[k]) {
          best[k] = eval.value;
          best_pick[k] = pick;
          best_eval[k] = eval;
        }
      }
    }
    std::size_t u = nu;
    while (u-- > 0) {
      if (++pick[u] < rows.size()) break;
      pick[u] = 0;
    }
    if (u == static_cast<std::size_t>(-1)) break;
  }

  std::vector<SolveResult> out;
  for (std::size_t k = 0; k < capacities.size(); ++k) {
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t w = 0; w < w_size; ++w)
        flat[u * w_size + w] = static_cast<double>(rows[best_pick[k][u]][w]) / denom;
    DisclosureKernel q{Kernel(nu, w_size, flat)};
    SolveResult r;
    r.method = SolveMethod::kDirectBruteForce;
    r.value = best_eval[k].value;
    r.information = best_eval[k].information;
    r.constraint_slack = capacities[k] - best_eval[k].information;
    r.splitting = splitting_from_kernel(s.prior(), q);
    for (const auto& a : r.splitting.atoms()) {
      r.avg_entropy += a.weight * average_entropy(s, a.belief);
      r.action_profiles.push_back(action_profile(s, a.belief));
      r.at_breakpoint.push_back(false);
    }
    r.kernel = std::move(q);
    out.push_back(std::move(r));
  }
  return out;
}

SolveResult brute_force_direct(const Scenario& s, double capacity, std::size_t w_size, double kernel_grid_step) {
  return std::move(brute_force_direct(s, std::vector<double>{capacity}, w_size, kernel_grid_step).front());
}

}  // namespace stratcomm
