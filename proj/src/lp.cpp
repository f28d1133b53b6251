#include "stratcomm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stratcomm/error.hpp"

namespace stratcomm {

void LpProblem::add_column(const std::vector<double>& column, double cost) {
  if (column.size() != rows) throw Error(ErrorKind::kDimensionMismatch, "LP column has wrong length");
  a.insert(a.end(), column.begin(), column.end());
  c.push_back(cost);
  ++cols;
}

const char* to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

// LU factorization with partial pivoting of a small dense square matrix
// (row-major).
class DenseLu {
 public:
  explicit DenseLu(std::size_t n) : n_(n), lu_(n * n), perm_(n) {}

  bool factor(const std::vector<double>& m) {
    lu_ = m;
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n_; ++i)
        if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
      if (at(p, k) == 0.0) return false;
      if (p != k) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(at(p, j), at(k, j));
        std::swap(perm_[p], perm_[k]);
      }
      for (std::size_t i = k + 1; i < n_; ++i) {
        at(i, k) /= at(k, k);
        for (std::size_t j = k + 1; j < n_; ++j) at(i, j) -= at(i, k) * at(k, j);
      }
    }
    return true;
  }

  // Solves M x = b.
  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) s -= at(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      for (std::size_t j = i + 1; j < n_; ++j) s -= at(i, j) * x[j];
      x[i] = s / at(i, i);
    }
    return x;
  }

  // Solves M' y = c.
  std::vector<double> solve_transpose(const std::vector<double>& c) const {
    std::vector<double> w(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = c[i];
      for (std::size_t j = 0; j < i; ++j) s -= at(j, i) * w[j];
      w[i] = s / at(i, i);
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = w[i];
      for (std::size_t j = i + 1; j < n_; ++j) s -= at(j, i) * w[j];
      w[i] = s;
    }
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[perm_[i]] = w[i];
    return y;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return lu_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return lu_[i * n_ + j]; }

  std::size_t n_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
};

class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& o)
      : p_(p), o_(o), m_(p.rows), n_(p.cols), sign_(m_, 1.0), b_(p.b), lu_(m_),
        basic_(n_ + m_, 0) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        sign_[i] = -1.0;
        b_[i] = -b_[i];
      }
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      basic_[n_ + i] = 1;
    }
  }

  LpSolution run() {
    LpSolution sol;
    std::vector<double> phase1(n_ + m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) phase1[n_ + i] = -1.0;
    LpStatus st = iterate(phase1, n_ + m_, sol.iterations);
    if (st == LpStatus::kIterationLimit) return finish(sol, st);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeas += x_b_[i];
    const double scale = 1.0 + *std::max_element(b_.begin(), b_.end());
    if (infeas > 1e-9 * scale) return finish(sol, LpStatus::kInfeasible);
    drive_out_artificials();

    std::vector<double> phase2(n_ + m_, 0.0);
    std::copy(p_.c.begin(), p_.c.end(), phase2.begin());
    st = iterate(phase2, n_, sol.iterations);
    sol.duals = y_;
    for (std::size_t i = 0; i < m_; ++i) sol.duals[i] *= sign_[i];
    return finish(sol, st);
  }

 private:
  double entry(std::size_t col, std::size_t row) const {
    if (col < n_) return sign_[row] * p_.a[col * m_ + row];
    return col - n_ == row ? 1.0 : 0.0;
  }

  bool refactor() {
    std::vector<double> bm(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k) bm[i * m_ + k] = entry(basis_[k], i);
    if (!lu_.factor(bm)) return false;
    x_b_ = lu_.solve(b_);
    return true;
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> col(m_);
    for (std::size_t i = 0; i < m_; ++i) col[i] = entry(j, i);
    return col;
  }

  // Columns [0, enter_limit) may enter the basis.
  LpStatus iterate(const std::vector<double>& cost, std::size_t enter_limit, std::size_t& iterations) {
    for (;;) {
      if (!refactor()) throw Error(ErrorKind::kNoConvergence, "simplex basis became singular");
      std::vector<double> cb(m_);
      for (std::size_t i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
      y_ = lu_.solve_transpose(cb);

      std::size_t entering = enter_limit;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (basic_[j]) continue;
        double d = cost[j];
        if (j < n_) {
          const double* a = &p_.a[j * m_];
          for (std::size_t i = 0; i < m_; ++i) d -= y_[i] * sign_[i] * a[i];
        } else {
          d -= y_[j - n_];
        }
        if (d > o_.cost_tol) {
          entering = j;
          break;
        }
      }
      if (entering == enter_limit) return LpStatus::kOptimal;
      if (iterations >= o_.max_iter) return LpStatus::kIterationLimit;

      const auto u = lu_.solve(column(entering));
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (u[i] <= o_.pivot_tol) continue;
        const double ratio = std::max(x_b_[i], 0.0) / u[i];
        if (leave == m_ || ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && basis_[i] < basis_[leave])) {
          if (leave == m_ || ratio < best - 1e-14) best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return LpStatus::kUnbounded;
      basic_[basis_[leave]] = 0;
      basis_[leave] = entering;
      basic_[entering] = 1;
      ++iterations;
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      if (!refactor()) return;
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_[j]) continue;
        const auto u = lu_.solve(column(j));
        if (std::abs(u[r]) > o_.pivot_tol) {
          basic_[basis_[r]] = 0;
          basis_[r] = j;
          basic_[j] = 1;
          break;
        }
      }
    }
    refactor();
  }

  LpSolution& finish(LpSolution& sol, LpStatus st) {
    sol.status = st;
    sol.basis = basis_;
    sol.x.assign(n_, 0.0);
    sol.objective = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) sol.x[basis_[i]] = std::max(0.0, x_b_[i]);
    }
    for (std::size_t j = 0; j < n_; ++j) sol.objective += p_.c[j] * sol.x[j];
    return sol;
  }

  const LpProblem& p_;
  const LpOptions& o_;
  std::size_t m_, n_;
  std::vector<double> sign_;
  std::vector<double> b_;
  DenseLu lu_;
  std::vector<std::size_t> basis_;
  std::vector<char> basic_;
  std::vector<double> x_b_;
  std::vector<double> y_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  if (problem.rows == 0 || problem.a.size() != problem.rows * problem.cols ||
      problem.b.size() != problem.rows || problem.c.size() != problem.cols) {
    throw Error(ErrorKind::kDimensionMismatch, "LP dimensions are inconsistent");
  }
  Simplex simplex(problem, options);
  return simplex.run();
}

}  // namespace stratcomm
