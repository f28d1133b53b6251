#pragma once

// Reference formulas and random instances shared by the tests. Everything
// here is written from the textbook definitions with plain loops so it does
// not share code paths with the library.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "stratcomm/game.hpp"

namespace oracle {

inline double log2_of(double x) { return std::log(x) / std::log(2.0); }

inline double hb(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * log2_of(p) + (1.0 - p) * log2_of(1.0 - p));
}

inline double shannon(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * log2_of(x);
  return h;
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) d += p[i] * log2_of(p[i] / q[i]);
  return d;
}

/// I(A;B) from a row-major na x nb table via sum p log p / (pa pb).
inline double mi(const std::vector<double>& joint, std::size_t na, std::size_t nb) {
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      pa[a] += joint[a * nb + b];
      pb[b] += joint[a * nb + b];
    }
  double i = 0.0;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      const double p = joint[a * nb + b];
      if (p > 0.0) i += p * log2_of(p / (pa[a] * pb[b]));
    }
  return i;
}

using Rng = std::mt19937_64;

inline std::vector<double> random_dist(Rng& rng, std::size_t n, bool allow_zeros = false) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(0.2);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = allow_zeros && zero(rng) ? 0.0 : e(rng);
    total += x;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : p) x /= total;
  return p;
}

/// Random scenario with the given sizes; binary channel input/output.
inline stratcomm::Scenario random_scenario(Rng& rng, std::size_t nu, std::size_t nz, std::size_t nv) {
  using namespace stratcomm;
  ScenarioAlphabets a{Alphabet::numbered("u", "u", nu), Alphabet::numbered("z", "z", nz),
                      Alphabet::numbered("x", "x", 2), Alphabet::numbered("y", "y", 2),
                      Alphabet::numbered("v", "v", nv)};
  std::vector<double> src = random_dist(rng, nu * nz);
  std::vector<double> ch;
  for (int x = 0; x < 2; ++x) {
    auto row = random_dist(rng, 2);
    ch.insert(ch.end(), row.begin(), row.end());
  }
  std::uniform_int_distribution<int> util(0, 9);
  std::vector<double> enc(nu * nz * nv), dec(nu * nz * nv);
  for (auto& x : enc) x = util(rng);
  for (auto& x : dec) x = util(rng);
  return Scenario(a, Joint({nu, nz}, src), Kernel(2, 2, ch), UtilityTable(nu, nz, nv, enc),
                  UtilityTable(nu, nz, nv, dec));
}

}  // namespace oracle
