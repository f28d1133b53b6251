#include "stratcomm/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "stratcomm/error.hpp"

namespace stratcomm {

CapacityResult channel_capacity(const Kernel& channel, const CapacityOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::kValidation, "capacity tolerance must be positive");

  const std::size_t nx = channel.from_size();
  // Outputs no input can produce are dropped up front so q(y) > 0 below.
  std::vector<std::size_t> live;
  for (std::size_t y = 0; y < channel.to_size(); ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      if (channel(x, y) > 0.0) {
        live.push_back(y);
        break;
      }
    }
  }

  std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> q(live.size());
  std::vector<double> div(nx);

  CapacityResult result;
  // Output independent of input: capacity is exactly zero.
  bool identical = true;
  for (std::size_t x = 1; x < nx && identical; ++x)
    for (std::size_t y = 0; y < channel.to_size(); ++y)
      if (std::abs(channel(x, y) - channel(0, y)) > kProbTol) {
        identical = false;
        break;
      }
  if (identical) {
    result.optimal_input = Dist::uniform(nx);
    result.converged = true;
    if (options.record_history) result.history.push_back(0.0);
    return result;
  }
  const double ceiling = std::log2(static_cast<double>(std::min(nx, live.size())));
  for (std::size_t iter = 0;; ++iter) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t k = 0; k < live.size(); ++k) q[k] += p[x] * channel(x, live[k]);

    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double d = 0.0;
      for (std::size_t k = 0; k < live.size(); ++k) {
        const double t = channel(x, live[k]);
        if (t > 0.0) d += t * std::log2(t / q[k]);
      }
      div[x] = std::max(0.0, d);
      lower += p[x] * div[x];
      upper = std::max(upper, div[x]);
    }
    lower = std::clamp(lower, 0.0, ceiling);
    if (options.record_history) result.history.push_back(lower);

    result.capacity = lower;
    result.residual = std::max(0.0, upper - lower);
    result.iterations = iter;
    if (result.residual <= options.tol) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    // p(x) <- p(x) 2^{D(T_x || q)} / normalizer
    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      p[x] *= std::exp2(div[x] - upper);
      z += p[x];
    }
    for (double& v : p) v /= z;
  }
  result.optimal_input = Dist::normalized(p);
  return result;
}

}  // namespace stratcomm
