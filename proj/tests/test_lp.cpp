#include <algorithm>
#include <numeric>
#include <optional>

#include "doctest.h"
#include "stratcomm/lp.hpp"
#include "support.hpp"

using namespace stratcomm;

namespace {

// Solves the square system M x = r by Gaussian elimination; empty when singular.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> m, std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    if (std::abs(m[piv][c]) < 1e-12) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(r[piv], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = m[i][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
      r[i] -= f * r[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) r[i] /= m[i][i];
  return r;
}

// Best objective over all basic feasible solutions (bounded problems only).
std::optional<double> vertex_optimum(const LpProblem& p) {
  std::vector<std::size_t> pick(p.rows);
  std::optional<double> best;
  auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == p.rows) {
      std::vector<std::vector<double>> m(p.rows, std::vector<double>(p.rows));
      for (std::size_t i = 0; i < p.rows; ++i)
        for (std::size_t k = 0; k < p.rows; ++k) m[i][k] = p.a[pick[k] * p.rows + i];
      const auto x = solve_square(m, p.b);
      if (!x) return;
      double obj = 0.0;
      for (std::size_t k = 0; k < p.rows; ++k) {
        if ((*x)[k] < -1e-9) return;
        obj += p.c[pick[k]] * (*x)[k];
      }
      if (!best || obj > *best) best = obj;
      return;
    }
    for (std::size_t j = start; j < p.cols; ++j) {
      pick[depth] = j;
      self(self, depth + 1, j + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("small textbook problem") {
  // max 3x + 2y  s.t. x + y + s1 = 4, x + 3y + s2 = 6.
  LpProblem p;
  p.rows = 2;
  p.b = {4, 6};
  p.add_column({1, 1}, 3);
  p.add_column({1, 3}, 2);
  p.add_column({1, 0}, 0);
  p.add_column({0, 1}, 0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(std::abs(s.objective - 12.0) < 1e-12);
  CHECK(std::abs(s.x[0] - 4.0) < 1e-12);
}

TEST_CASE("infeasible and unbounded") {
  LpProblem inf;
  inf.rows = 1;
  inf.b = {-1};
  inf.add_column({1}, 1);
  CHECK(solve_lp(inf).status == LpStatus::kInfeasible);

  LpProblem unb;
  unb.rows = 1;
  unb.b = {1};
  unb.add_column({1}, 0);
  unb.add_column({-1}, 1);
  unb.add_column({1}, 0);
  CHECK(solve_lp(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("degenerate problem terminates") {
  // Klee-Minty style redundancy: many columns hitting the same vertex.
  LpProblem p;
  p.rows = 2;
  p.b = {1, 0};
  for (int k = 0; k < 20; ++k) p.add_column({1, 0}, 1.0);
  p.add_column({0, 1}, 0.0);
  p.add_column({1, 1}, 1.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(std::abs(s.objective - 1.0) < 1e-12);
}

TEST_CASE("random problems against vertex enumeration") {
  oracle::Rng rng(41);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.05, 1.0);
  int solved = 0;
  for (int k = 0; k < 300; ++k) {
    LpProblem p;
    p.rows = 2 + k % 2;
    const std::size_t cols = 4 + k % 3;
    // A nonnegative first row with positive b keeps the feasible set bounded.
    p.b.assign(p.rows, 0.0);
    std::vector<double> x0(cols);
    for (auto& v : x0) v = pos(rng);
    std::vector<std::vector<double>> colv(cols, std::vector<double>(p.rows));
    for (std::size_t j = 0; j < cols; ++j) {
      colv[j][0] = pos(rng);
      for (std::size_t i = 1; i < p.rows; ++i) colv[j][i] = coef(rng);
      for (std::size_t i = 0; i < p.rows; ++i) p.b[i] += colv[j][i] * x0[j];
    }
    for (std::size_t j = 0; j < cols; ++j) p.add_column(colv[j], coef(rng));
    const LpSolution s = solve_lp(p);
    const auto ref = vertex_optimum(p);
    REQUIRE(ref);
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(std::abs(s.objective - *ref) < 1e-9);
    // Primal feasibility and dual optimality.
    for (std::size_t i = 0; i < p.rows; ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < cols; ++j) ax += p.a[j * p.rows + i] * s.x[j];
      CHECK(std::abs(ax - p.b[i]) < 1e-9);
    }
    double by = 0.0;
    for (std::size_t i = 0; i < p.rows; ++i) by += p.b[i] * s.duals[i];
    CHECK(std::abs(by - s.objective) < 1e-9);
    for (std::size_t j = 0; j < cols; ++j) {
      double ay = 0.0;
      for (std::size_t i = 0; i < p.rows; ++i) ay += p.a[j * p.rows + i] * s.duals[i];
      CHECK(p.c[j] - ay <= 1e-9);
    }
    ++solved;
  }
  CHECK(solved == 300);
}
