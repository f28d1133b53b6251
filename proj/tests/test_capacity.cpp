#include <algorithm>

#include "doctest.h"
#include "stratcomm/capacity.hpp"
#include "support.hpp"

using namespace stratcomm;

TEST_CASE("closed-form channels") {
  const CapacityResult id = channel_capacity(Kernel::identity(2));
  CHECK(id.capacity == 1.0);
  CHECK(id.converged);
  CHECK(id.optimal_input[0] == 0.5);

  const CapacityResult flat = channel_capacity(Kernel::from_rows({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}}));
  CHECK(flat.capacity == 0.0);

  const CapacityResult bsc = channel_capacity(Kernel::from_rows({{0.9, 0.1}, {0.1, 0.9}}));
  CHECK(std::abs(bsc.capacity - (1.0 - oracle::hb(0.1))) < 1e-6);
  CHECK(std::abs(bsc.capacity - 0.531004) < 1e-6);

  // Binary erasure channel: 1 - erasure probability.
  const CapacityResult bec = channel_capacity(Kernel::from_rows({{0.75, 0.25, 0.0}, {0.0, 0.25, 0.75}}));
  CHECK(std::abs(bec.capacity - 0.75) < 1e-8);

  // Z channel with crossover 1/2: log2(5/4).
  const CapacityResult zc = channel_capacity(Kernel::from_rows({{1.0, 0.0}, {0.5, 0.5}}));
  CHECK(std::abs(zc.capacity - oracle::log2_of(1.25)) < 1e-8);
}

TEST_CASE("iterates are nondecreasing and bracket the capacity") {
  oracle::Rng rng(5);
  CapacityOptions opt;
  opt.record_history = true;
  for (int k = 0; k < 200; ++k) {
    const std::size_t nx = 2 + k % 4, ny = 2 + (k / 4) % 4;
    std::vector<std::vector<double>> rows;
    for (std::size_t x = 0; x < nx; ++x) rows.push_back(oracle::random_dist(rng, ny, true));
    const CapacityResult r = channel_capacity(Kernel::from_rows(rows), opt);
    CHECK(r.converged);
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1] - 1e-13);
    CHECK(r.capacity <= oracle::log2_of(static_cast<double>(std::min(nx, ny))) + 1e-12);
    CHECK(r.residual <= opt.tol);
  }
}

TEST_CASE("input permutation permutes the optimal input") {
  oracle::Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    std::vector<std::vector<double>> rows;
    for (int x = 0; x < 3; ++x) rows.push_back(oracle::random_dist(rng, 3));
    std::vector<std::vector<double>> swapped{rows[2], rows[0], rows[1]};
    const CapacityResult a = channel_capacity(Kernel::from_rows(rows));
    const CapacityResult b = channel_capacity(Kernel::from_rows(swapped));
    CHECK(std::abs(a.capacity - b.capacity) < 1e-12);
    CHECK(std::abs(a.optimal_input[2] - b.optimal_input[0]) < 1e-6);
    CHECK(std::abs(a.optimal_input[0] - b.optimal_input[1]) < 1e-6);
  }
}

TEST_CASE("zero capacity exactly when rows coincide") {
  oracle::Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    const auto row = oracle::random_dist(rng, 3);
    CHECK(channel_capacity(Kernel::from_rows({row, row, row})).capacity == 0.0);
    auto other = oracle::random_dist(rng, 3);
    CHECK(channel_capacity(Kernel::from_rows({row, other})).capacity > 0.0);
  }
}

TEST_CASE("iteration limit is reported, not thrown") {
  CapacityOptions opt;
  opt.max_iter = 1;
  opt.tol = 1e-15;
  const CapacityResult r = channel_capacity(Kernel::from_rows({{0.6, 0.3, 0.1}, {0.1, 0.3, 0.6}, {0.3, 0.4, 0.3}}), opt);
  CHECK_FALSE(r.converged);
}
