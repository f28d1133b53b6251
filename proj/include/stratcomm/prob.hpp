#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stratcomm {

/// Tolerance used by every validity check on probability tables.
inline constexpr double kProbTol = 1e-12;

/// A finite, ordered set of distinct labels. The order fixes the index of
/// each symbol in every table built over the alphabet.
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::string name, std::vector<std::string> symbols);

  /// Alphabet with labels prefix1..prefixN.
  static Alphabet numbered(std::string name, std::string_view prefix, std::size_t size);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& operator[](std::size_t i) const { return symbols_.at(i); }

  /// Index of a label; throws Error(kValidation) when absent.
  std::size_t index_of(std::string_view symbol) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::string name_;
  std::vector<std::string> symbols_;
};

/// Probability vector over an alphabet (identified by position only).
class Dist {
 public:
  Dist() = default;
  /// Validates: nonempty, entries >= 0, total within kProbTol of 1.
  explicit Dist(std::vector<double> mass);
  Dist(std::initializer_list<double> mass) : Dist(std::vector<double>(mass)) {}

  static Dist uniform(std::size_t size);
  static Dist point_mass(std::size_t size, std::size_t index);
  /// Divides by the total. Throws when the total is not positive.
  static Dist normalized(std::vector<double> weights);
  /// (1 - q, q): binary belief parameterized by the mass on the second symbol.
  static Dist binary(double q);

  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  std::span<const double> mass() const noexcept { return mass_; }
  const std::vector<double>& values() const noexcept { return mass_; }

  bool operator==(const Dist&) const = default;

 private:
  std::vector<double> mass_;
};

/// Conditional distribution: one row (a Dist over `to`) per `from` symbol.
class Kernel {
 public:
  Kernel() = default;
  Kernel(std::size_t from_size, std::size_t to_size, std::vector<double> row_major);
  static Kernel from_rows(const std::vector<std::vector<double>>& rows);
  static Kernel identity(std::size_t size);

  std::size_t from_size() const noexcept { return from_; }
  std::size_t to_size() const noexcept { return to_; }
  double operator()(std::size_t from, std::size_t to) const { return data_[from * to_ + to]; }
  std::span<const double> row(std::size_t from) const {
    return std::span<const double>(data_).subspan(from * to_, to_);
  }
  const std::vector<double>& values() const noexcept { return data_; }

  bool operator==(const Kernel&) const = default;

 private:
  std::size_t from_ = 0;
  std::size_t to_ = 0;
  std::vector<double> data_;
};

/// Joint distribution over an ordered list of axes, stored row-major
/// (last axis fastest).
class Joint {
 public:
  Joint() = default;
  Joint(std::vector<std::size_t> shape, std::vector<double> mass);

  /// P(a) * K(b|a) as a two-axis table.
  static Joint from_prior_and_kernel(const Dist& prior, const Kernel& kernel);

  std::size_t rank() const noexcept { return shape_.size(); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const std::vector<double>& values() const noexcept { return mass_; }
  double at(std::span<const std::size_t> index) const;
  double at(std::size_t i, std::size_t j) const { return mass_[i * shape_[1] + j]; }

  /// Sums out every axis not listed in `keep`; result axes follow `keep` order.
  Joint marginal(std::span<const std::size_t> keep) const;
  Joint marginal(std::initializer_list<std::size_t> keep) const {
    return marginal(std::span<const std::size_t>(keep.begin(), keep.size()));
  }
  /// Single-axis marginal as a Dist.
  Dist marginal_dist(std::size_t axis) const;

  bool operator==(const Joint&) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> mass_;
};

/// Shannon entropy in bits, 0 log 0 := 0.
double entropy(std::span<const double> p) noexcept;
inline double entropy(const Dist& d) noexcept { return entropy(d.mass()); }
double binary_entropy(double p) noexcept;

struct KlDivergence {
  double bits = 0.0;
  /// False when support(p) is not contained in support(q); `bits` is +inf then.
  bool absolutely_continuous = true;
};

KlDivergence kl_divergence(std::span<const double> p, std::span<const double> q);
inline KlDivergence kl_divergence(const Dist& p, const Dist& q) {
  return kl_divergence(p.mass(), q.mass());
}

/// I(A;B) for a two-axis joint.
double mutual_information(const Joint& joint);

/// I(A;B|C) for a three-axis joint; `conditioning_axis` names C and the two
/// remaining axes are A and B.
double conditional_mutual_information(const Joint& joint, std::size_t conditioning_axis);

/// Posterior over the kernel's input after observing output `observed`.
/// Throws Error(kZeroProbabilityObservation) when the observation has zero
/// probability under the prior.
Dist bayes_posterior(const Dist& prior, const Kernel& kernel, std::size_t observed);

}  // namespace stratcomm
