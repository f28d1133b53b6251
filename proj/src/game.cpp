#include "stratcomm/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "stratcomm/error.hpp"

namespace stratcomm {

UtilityTable::UtilityTable(std::size_t nu, std::size_t nz, std::size_t nv, std::vector<double> values)
    : nu_(nu), nz_(nz), nv_(nv), values_(std::move(values)) {
  if (nu_ == 0 || nz_ == 0 || nv_ == 0 || values_.size() != nu_ * nz_ * nv_) {
    throw Error(ErrorKind::kDimensionMismatch, "utility table has wrong size");
  }
  for (double x : values_) {
    if (!std::isfinite(x)) throw Error(ErrorKind::kValidation, "utility table has a non-finite entry");
  }
}

UtilityTable UtilityTable::state_independent(std::size_t nz, const std::vector<std::vector<double>>& uv) {
  if (uv.empty() || uv.front().empty()) throw Error(ErrorKind::kDimensionMismatch, "empty utility table");
  const std::size_t nu = uv.size();
  const std::size_t nv = uv.front().size();
  std::vector<double> values;
  values.reserve(nu * nz * nv);
  for (const auto& row : uv) {
    if (row.size() != nv) throw Error(ErrorKind::kDimensionMismatch, "ragged utility table");
    for (std::size_t z = 0; z < nz; ++z) values.insert(values.end(), row.begin(), row.end());
  }
  return UtilityTable(nu, nz, nv, std::move(values));
}

double UtilityTable::min() const { return *std::min_element(values_.begin(), values_.end()); }
double UtilityTable::max() const { return *std::max_element(values_.begin(), values_.end()); }

Scenario::Scenario(ScenarioAlphabets alphabets, Joint source, Kernel channel,
                   UtilityTable utility_encoder, UtilityTable utility_decoder)
    : alphabets_(std::move(alphabets)),
      source_(std::move(source)),
      channel_(std::move(channel)),
      utility_encoder_(std::move(utility_encoder)),
      utility_decoder_(std::move(utility_decoder)) {
  const std::size_t nu = alphabets_.u.size();
  const std::size_t nz = alphabets_.z.size();
  const std::size_t nv = alphabets_.v.size();
  if (source_.rank() != 2 || source_.shape()[0] != nu || source_.shape()[1] != nz) {
    throw Error(ErrorKind::kDimensionMismatch, "source must be a |U| x |Z| joint");
  }
  if (channel_.from_size() != alphabets_.x.size() || channel_.to_size() != alphabets_.y.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "channel must be a |X| x |Y| kernel");
  }
  for (const UtilityTable* t : {&utility_encoder_, &utility_decoder_}) {
    if (t->nu() != nu || t->nz() != nz || t->nv() != nv) {
      throw Error(ErrorKind::kDimensionMismatch, "utility tables must be |U| x |Z| x |V|");
    }
  }

  prior_ = source_.marginal_dist(0);
  std::vector<double> rows(nu * nz);
  for (std::size_t u = 0; u < nu; ++u) {
    double pu = 0.0;
    for (std::size_t z = 0; z < nz; ++z) pu += source_.at(u, z);
    for (std::size_t z = 0; z < nz; ++z) {
      rows[u * nz + z] = pu > 0.0 ? source_.at(u, z) / pu : 1.0 / static_cast<double>(nz);
    }
    // Renormalize away division rounding so each row passes validation.
    double total = 0.0;
    for (std::size_t z = 0; z < nz; ++z) total += rows[u * nz + z];
    for (std::size_t z = 0; z < nz; ++z) rows[u * nz + z] /= total;
  }
  state_kernel_ = Kernel(nu, nz, std::move(rows));
  conditional_entropy_ = average_entropy(*this, prior_.mass());
}

bool Scenario::operator==(const Scenario& other) const {
  return alphabets_.u == other.alphabets_.u && alphabets_.z == other.alphabets_.z &&
         alphabets_.x == other.alphabets_.x && alphabets_.y == other.alphabets_.y &&
         alphabets_.v == other.alphabets_.v && source_ == other.source_ &&
         channel_ == other.channel_ && utility_encoder_ == other.utility_encoder_ &&
         utility_decoder_ == other.utility_decoder_;
}

Splitting::Splitting(std::vector<SplittingAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::kValidation, "splitting has no atoms");
  double total = 0.0;
  const std::size_t n = atoms_.front().belief.size();
  for (const auto& a : atoms_) {
    if (!(a.weight >= 0.0 && a.weight <= 1.0 + kWeightTol)) {
      throw Error(ErrorKind::kValidation, "splitting weight outside [0,1]");
    }
    if (a.belief.size() != n || n == 0) throw Error(ErrorKind::kDimensionMismatch, "splitting beliefs differ in size");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw Error(ErrorKind::kValidation, "splitting weights sum to " + std::to_string(total));
  }
}

Belief Splitting::barycenter() const {
  std::vector<double> m(atoms_.front().belief.size(), 0.0);
  for (const auto& a : atoms_)
    for (std::size_t u = 0; u < m.size(); ++u) m[u] += a.weight * a.belief[u];
  return Dist::normalized(std::move(m));
}

std::size_t auxiliary_cardinality_bound(const Scenario& s) {
  const std::size_t a = s.nu() + 1;
  std::size_t b = 1;
  for (std::size_t z = 0; z < s.nz() && b < a; ++z) b *= s.nv();
  return std::min(a, b);
}

double state_probability(const Scenario& s, std::size_t z, std::span<const double> p) {
  double pz = 0.0;
  for (std::size_t u = 0; u < p.size(); ++u) pz += p[u] * s.state_kernel()(u, z);
  return pz;
}

Belief state_posterior(const Scenario& s, std::size_t z, std::span<const double> p) {
  std::vector<double> w(p.size());
  for (std::size_t u = 0; u < p.size(); ++u) w[u] = p[u] * s.state_kernel()(u, z);
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) {
    throw Error(ErrorKind::kZeroProbabilityObservation, "state has zero probability under the belief");
  }
  return Dist::normalized(std::move(w));
}

BestReply best_reply_actions(const Scenario& s, std::size_t z, std::span<const double> p) {
  const auto& phi_d = s.utility_decoder();
  const auto& phi_e = s.utility_encoder();
  const std::size_t nv = s.nv();

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> dec(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t u = 0; u < p.size(); ++u) dec[v] += p[u] * phi_d(u, z, v);
    best = std::max(best, dec[v]);
  }

  BestReply out;
  double worst_for_encoder = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < nv; ++v) {
    if (dec[v] < best - kDecoderTieTol) continue;
    out.decoder_optimal.push_back(v);
    double enc = 0.0;
    for (std::size_t u = 0; u < p.size(); ++u) enc += p[u] * phi_e(u, z, v);
    if (enc < worst_for_encoder) {
      worst_for_encoder = enc;
      out.chosen = v;
    }
  }
  return out;
}

double robust_utility(const Scenario& s, std::size_t z, std::span<const double> p) {
  const std::size_t v = best_reply_actions(s, z, p).chosen;
  double enc = 0.0;
  for (std::size_t u = 0; u < p.size(); ++u) enc += p[u] * s.utility_encoder()(u, z, v);
  return enc;
}

namespace {

// Calls fn(z, P(z), posterior) for every state with positive probability.
template <class Fn>
void for_each_state(const Scenario& s, std::span<const double> p, Fn&& fn) {
  std::vector<double> post(p.size());
  for (std::size_t z = 0; z < s.nz(); ++z) {
    double pz = 0.0;
    for (std::size_t u = 0; u < p.size(); ++u) {
      post[u] = p[u] * s.state_kernel()(u, z);
      pz += post[u];
    }
    if (!(pz > 0.0)) continue;
    for (double& x : post) x /= pz;
    fn(z, pz, std::span<const double>(post));
  }
}

}  // namespace

double average_utility(const Scenario& s, std::span<const double> p) {
  double total = 0.0;
  for_each_state(s, p, [&](std::size_t z, double pz, std::span<const double> post) {
    total += pz * robust_utility(s, z, post);
  });
  return total;
}

double average_entropy(const Scenario& s, std::span<const double> p) {
  double total = 0.0;
  for_each_state(s, p, [&](std::size_t, double pz, std::span<const double> post) {
    total += pz * entropy(post);
  });
  return total;
}

ActionProfile action_profile(const Scenario& s, std::span<const double> p) {
  ActionProfile profile(s.nz());
  for (std::size_t z = 0; z < s.nz(); ++z) profile[z] = best_reply_actions(s, z, p).chosen;
  for_each_state(s, p, [&](std::size_t z, double, std::span<const double> post) {
    profile[z] = best_reply_actions(s, z, post).chosen;
  });
  return profile;
}

DirectValue direct_value(const Scenario& s, const DisclosureKernel& q, double channel_capacity) {
  const std::size_t nu = s.nu(), nz = s.nz(), nw = q.w_size();
  if (q.kernel.from_size() != nu) throw Error(ErrorKind::kDimensionMismatch, "disclosure kernel must be |U| x |W|");

  // joint[(u * nz + z) * nw + w] = P(u,z) Q(w|u)
  std::vector<double> joint(nu * nz * nw);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t z = 0; z < nz; ++z)
      for (std::size_t w = 0; w < nw; ++w) joint[(u * nz + z) * nw + w] = s.source().at(u, z) * q.kernel(u, w);

  // I(U;W|Z) = H(U,Z) + H(W,Z) - H(U,Z,W) - H(Z)
  std::vector<double> uz(nu * nz, 0.0), wz(nw * nz, 0.0), zm(nz, 0.0);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t z = 0; z < nz; ++z)
      for (std::size_t w = 0; w < nw; ++w) {
        const double m = joint[(u * nz + z) * nw + w];
        uz[u * nz + z] += m;
        wz[w * nz + z] += m;
        zm[z] += m;
      }
  const double info = std::max(0.0, entropy(uz) + entropy(wz) - entropy(joint) - entropy(zm));

  DirectValue out;
  std::vector<double> post(nu);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t w = 0; w < nw; ++w) {
      const double pzw = wz[w * nz + z];
      if (!(pzw > 0.0)) continue;
      for (std::size_t u = 0; u < nu; ++u) post[u] = joint[(u * nz + z) * nw + w] / pzw;
      out.value += pzw * robust_utility(s, z, post);
    }
  }
  out.information = info;
  out.constraint_slack = channel_capacity - info;
  out.feasible = out.constraint_slack >= -kFeasibilityTol;
  return out;
}

double zero_capacity_value(const Scenario& s) { return average_utility(s, s.prior()); }

SplittingEvaluation splitting_evaluate(const Scenario& s, const Splitting& sp, double channel_capacity) {
  SplittingEvaluation out;
  for (const auto& a : sp.atoms()) {
    if (a.belief.size() != s.nu()) throw Error(ErrorKind::kDimensionMismatch, "belief size differs from |U|");
    out.value += a.weight * average_utility(s, a.belief);
    out.avg_entropy += a.weight * average_entropy(s, a.belief);
  }
  out.barycenter = sp.barycenter();
  double gap = 0.0;
  for (std::size_t u = 0; u < s.nu(); ++u) gap = std::max(gap, std::abs(out.barycenter[u] - s.prior()[u]));
  if (gap > kBarycenterTol) {
    out.feasible = false;
    out.reason = std::string(to_string(ErrorKind::kBarycenterMismatch)) + ": barycenter differs from prior by " +
                 std::to_string(gap);
    return out;
  }
  const double required = s.conditional_entropy() - channel_capacity;
  out.feasible = out.avg_entropy >= required - kFeasibilityTol;
  if (!out.feasible) out.reason = "information constraint violated";
  return out;
}

Splitting merge_equivalent_posteriors(const Scenario& s, const Splitting& sp) {
  std::map<ActionProfile, std::size_t> slot;
  std::vector<double> weights;
  std::vector<std::vector<double>> sums;
  for (const auto& a : sp.atoms()) {
    auto profile = action_profile(s, a.belief);
    auto [it, inserted] = slot.emplace(std::move(profile), weights.size());
    if (inserted) {
      weights.push_back(0.0);
      sums.emplace_back(a.belief.size(), 0.0);
    }
    const std::size_t k = it->second;
    weights[k] += a.weight;
    for (std::size_t u = 0; u < a.belief.size(); ++u) sums[k][u] += a.weight * a.belief[u];
  }
  std::vector<SplittingAtom> merged;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] > 0.0) {
      merged.push_back({weights[k], Dist::normalized(std::move(sums[k]))});
    } else {
      // Zero-weight group: keep the first member's belief unchanged.
      for (const auto& a : sp.atoms()) {
        if (slot.at(action_profile(s, a.belief)) == k) {
          merged.push_back({0.0, a.belief});
          break;
        }
      }
    }
  }
  return Splitting(std::move(merged));
}

Splitting splitting_from_kernel(const Dist& prior, const DisclosureKernel& q) {
  const std::size_t nu = prior.size();
  if (q.kernel.from_size() != nu) throw Error(ErrorKind::kDimensionMismatch, "disclosure kernel must be |U| x |W|");
  std::vector<SplittingAtom> atoms;
  for (std::size_t w = 0; w < q.w_size(); ++w) {
    std::vector<double> m(nu);
    double qw = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
      m[u] = prior[u] * q.kernel(u, w);
      qw += m[u];
    }
    if (qw > 0.0) atoms.push_back({qw, Dist::normalized(std::move(m))});
  }
  return Splitting(std::move(atoms));
}

DisclosureKernel kernel_from_splitting(const Dist& prior, const Splitting& sp) {
  const std::size_t nu = prior.size();
  const std::size_t nw = sp.size();
  std::vector<double> rows(nu * nw);
  for (std::size_t u = 0; u < nu; ++u) {
    double total = 0.0;
    for (std::size_t w = 0; w < nw; ++w) {
      const auto& a = sp.atoms()[w];
      rows[u * nw + w] = prior[u] > 0.0 ? a.weight * a.belief[u] / prior[u] : 1.0;
      total += rows[u * nw + w];
    }
    for (std::size_t w = 0; w < nw; ++w) rows[u * nw + w] /= total;
  }
  return DisclosureKernel{Kernel(nu, nw, std::move(rows))};
}

}  // namespace stratcomm
