#pragma once

#include <cstddef>
#include <vector>

#include "stratcomm/prob.hpp"

namespace stratcomm {

struct CapacityOptions {
  double tol = 1e-9;             ///< bits; stop once upper - lower <= tol
  std::size_t max_iter = 100000;
  bool record_history = false;   ///< keep I(X;Y) of every iterate
};

struct CapacityResult {
  double capacity = 0.0;   ///< I(X;Y) at optimal_input (a certified lower bound)
  Dist optimal_input;
  std::size_t iterations = 0;
  double residual = 0.0;   ///< max_x D(T(.|x) || PT) - I(X;Y), an upper bound on the gap
  bool converged = false;  ///< false: max_iter hit with residual > tol
  std::vector<double> history;
};

/// max over P(x) of I(X;Y) for the channel T(y|x), by alternating
/// maximization from the uniform input. Non-convergence is reported through
/// `converged`, never thrown.
CapacityResult channel_capacity(const Kernel& channel, const CapacityOptions& options = {});

}  // namespace stratcomm
