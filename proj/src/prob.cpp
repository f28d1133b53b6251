#include "stratcomm/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "stratcomm/error.hpp"

namespace stratcomm {
namespace {

void check_mass(std::span<const double> mass, const std::string& what) {
  if (mass.empty()) throw Error(ErrorKind::kValidation, what + ": empty distribution");
  double total = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (!std::isfinite(mass[i]) || mass[i] < 0.0) {
      throw Error(ErrorKind::kValidation,
                  what + ": entry " + std::to_string(i) + " is negative or not finite");
    }
    total += mass[i];
  }
  if (std::abs(total - 1.0) > kProbTol) {
    throw Error(ErrorKind::kValidation,
                what + ": total mass " + std::to_string(total) + " differs from 1");
  }
}

double xlog2x(double p) noexcept { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

Alphabet::Alphabet(std::string name, std::vector<std::string> symbols)
    : name_(std::move(name)), symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error(ErrorKind::kValidation, "alphabet '" + name_ + "' is empty");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (!seen.insert(s).second) {
      throw Error(ErrorKind::kValidation,
                  "alphabet '" + name_ + "' repeats symbol '" + s + "'");
    }
  }
}

Alphabet Alphabet::numbered(std::string name, std::string_view prefix, std::size_t size) {
  std::vector<std::string> symbols;
  symbols.reserve(size);
  for (std::size_t i = 1; i <= size; ++i) symbols.push_back(std::string(prefix) + std::to_string(i));
  return Alphabet(std::move(name), std::move(symbols));
}

std::size_t Alphabet::index_of(std::string_view symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) {
    throw Error(ErrorKind::kValidation,
                "symbol '" + std::string(symbol) + "' not in alphabet '" + name_ + "'");
  }
  return static_cast<std::size_t>(it - symbols_.begin());
}

Dist::Dist(std::vector<double> mass) : mass_(std::move(mass)) { check_mass(mass_, "distribution"); }

Dist Dist::uniform(std::size_t size) {
  if (size == 0) throw Error(ErrorKind::kValidation, "uniform distribution over empty alphabet");
  return Dist(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Dist Dist::point_mass(std::size_t size, std::size_t index) {
  std::vector<double> m(size, 0.0);
  m.at(index) = 1.0;
  return Dist(std::move(m));
}

Dist Dist::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorKind::kValidation, "negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::kValidation, "weights sum to zero");
  for (double& w : weights) w /= total;
  Dist d;
  d.mass_ = std::move(weights);
  return d;
}

Dist Dist::binary(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::kValidation, "binary belief outside [0,1]");
  Dist d;
  d.mass_ = {1.0 - q, q};
  return d;
}

Kernel::Kernel(std::size_t from_size, std::size_t to_size, std::vector<double> row_major)
    : from_(from_size), to_(to_size), data_(std::move(row_major)) {
  if (from_ == 0 || to_ == 0 || data_.size() != from_ * to_) {
    throw Error(ErrorKind::kDimensionMismatch, "kernel table has wrong size");
  }
  for (std::size_t r = 0; r < from_; ++r) check_mass(row(r), "kernel row " + std::to_string(r));
}

Kernel Kernel::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(ErrorKind::kDimensionMismatch, "kernel has no rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorKind::kDimensionMismatch, "ragged kernel rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Kernel(rows.size(), cols, std::move(flat));
}

Kernel Kernel::identity(std::size_t size) {
  std::vector<double> flat(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) flat[i * size + i] = 1.0;
  return Kernel(size, size, std::move(flat));
}

Joint::Joint(std::vector<std::size_t> shape, std::vector<double> mass)
    : shape_(std::move(shape)), mass_(std::move(mass)) {
  std::size_t cells = 1;
  for (auto s : shape_) {
    if (s == 0) throw Error(ErrorKind::kDimensionMismatch, "joint axis of size zero");
    cells *= s;
  }
  if (shape_.empty() || cells != mass_.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "joint table has wrong size");
  }
  check_mass(mass_, "joint");
}

Joint Joint::from_prior_and_kernel(const Dist& prior, const Kernel& kernel) {
  if (prior.size() != kernel.from_size()) {
    throw Error(ErrorKind::kDimensionMismatch, "prior and kernel sizes differ");
  }
  std::vector<double> m(prior.size() * kernel.to_size());
  for (std::size_t a = 0; a < prior.size(); ++a)
    for (std::size_t b = 0; b < kernel.to_size(); ++b)
      m[a * kernel.to_size() + b] = prior[a] * kernel(a, b);
  return Joint({prior.size(), kernel.to_size()}, std::move(m));
}

double Joint::at(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape_.size(); ++k) flat = flat * shape_[k] + index[k];
  return mass_[flat];
}

Joint Joint::marginal(std::span<const std::size_t> keep) const {
  std::vector<std::size_t> out_shape;
  for (auto axis : keep) {
    if (axis >= shape_.size()) throw Error(ErrorKind::kDimensionMismatch, "marginal axis out of range");
    out_shape.push_back(shape_[axis]);
  }
  std::size_t out_cells = 1;
  for (auto s : out_shape) out_cells *= s;
  std::vector<double> out(out_cells, 0.0);
  std::vector<std::size_t> idx(shape_.size(), 0);
  for (double m : mass_) {
    std::size_t flat = 0;
    for (auto axis : keep) flat = flat * shape_[axis] + idx[axis];
    out[flat] += m;
    for (std::size_t k = shape_.size(); k-- > 0;) {
      if (++idx[k] < shape_[k]) break;
      idx[k] = 0;
    }
  }
  Joint j;
  j.shape_ = std::move(out_shape);
  j.mass_ = std::move(out);
  return j;
}

Dist Joint::marginal_dist(std::size_t axis) const {
  const std::size_t keep[] = {axis};
  auto j = marginal(keep);
  return Dist::normalized(j.mass_);
}

double entropy(std::span<const double> p) noexcept {
  double h = 0.0;
  for (double x : p) h -= xlog2x(x);
  return h < 0.0 ? 0.0 : h;
}

double binary_entropy(double p) noexcept { return -xlog2x(p) - xlog2x(1.0 - p); }

KlDivergence kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::kDimensionMismatch, "KL over different alphabets");
  KlDivergence out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      out.absolutely_continuous = false;
      out.bits = std::numeric_limits<double>::infinity();
      return out;
    }
    out.bits += p[i] * std::log2(p[i] / q[i]);
  }
  if (out.bits < 0.0) out.bits = 0.0;
  return out;
}

double mutual_information(const Joint& joint) {
  if (joint.rank() != 2) throw Error(ErrorKind::kDimensionMismatch, "mutual information needs two axes");
  const double ha = entropy(joint.marginal({0}).values());
  const double hb = entropy(joint.marginal({1}).values());
  const double hab = entropy(joint.values());
  return std::max(0.0, ha + hb - hab);
}

double conditional_mutual_information(const Joint& joint, std::size_t conditioning_axis) {
  if (joint.rank() != 3) {
    throw Error(ErrorKind::kDimensionMismatch, "conditional mutual information needs three axes");
  }
  if (conditioning_axis > 2) throw Error(ErrorKind::kDimensionMismatch, "conditioning axis out of range");
  std::size_t a = conditioning_axis == 0 ? 1 : 0;
  std::size_t b = conditioning_axis == 2 ? 1 : 2;
  const double hac = entropy(joint.marginal({a, conditioning_axis}).values());
  const double hbc = entropy(joint.marginal({b, conditioning_axis}).values());
  const double hc = entropy(joint.marginal({conditioning_axis}).values());
  const double habc = entropy(joint.values());
  return std::max(0.0, hac + hbc - habc - hc);
}

Dist bayes_posterior(const Dist& prior, const Kernel& kernel, std::size_t observed) {
  if (prior.size() != kernel.from_size() || observed >= kernel.to_size()) {
    throw Error(ErrorKind::kDimensionMismatch, "posterior: prior/kernel/observation mismatch");
  }
  std::vector<double> w(prior.size());
  double total = 0.0;
  for (std::size_t a = 0; a < prior.size(); ++a) {
    w[a] = prior[a] * kernel(a, observed);
    total += w[a];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorKind::kZeroProbabilityObservation,
                "observation " + std::to_string(observed) + " has zero probability");
  }
  return Dist::normalized(std::move(w));
}

}  // namespace stratcomm
