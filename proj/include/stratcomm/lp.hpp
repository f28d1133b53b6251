#pragma once

#include <cstddef>
#include <vector>

namespace stratcomm {

/// maximize c'x  subject to  A x = b,  x >= 0.
/// A is stored column-major: column j occupies a[j * rows .. j * rows + rows).
struct LpProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  void add_column(const std::vector<double>& column, double cost);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status) noexcept;

struct LpOptions {
  double pivot_tol = 1e-10;
  double cost_tol = 1e-11;
  std::size_t max_iter = 1000000;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;        ///< y with B'y = c_B at the final basis
  std::vector<std::size_t> basis;   ///< basic column per row (may name artificials >= cols)
  std::size_t iterations = 0;
};

/// Two-phase revised primal simplex with Bland's rule. The basis matrix is
/// refactored from scratch every pivot, which is cheap for the handful of
/// rows this is meant for.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace stratcomm
