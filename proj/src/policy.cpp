#include "aeronav/policy.hpp"

#include <cmath>
#include <numbers>

#include "aeronav/errors.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

namespace {
std::vector<int> trunk_sizes(int obs_dim, int hidden_units, int hidden_layers, int out) {
  std::vector<int> sizes;
  sizes.push_back(obs_dim);
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(hidden_units);
  sizes.push_back(out);
  return sizes;
}
}  // namespace

PolicyParams make_policy(int obs_dim, int hidden_units, int hidden_layers, double log_std_init,
                         Rng& rng) {
  PolicyParams p;
  // Small output gain keeps the initial action means near zero.
  p.net = Mlp::init(trunk_sizes(obs_dim, hidden_units, hidden_layers, kActionDim), rng, 1.0, 0.01);
  p.log_std.fill(log_std_init);
  clamp_log_std(p);
  return p;
}

ValueParams make_value(int obs_dim, int hidden_units, int hidden_layers, Rng& rng) {
  ValueParams v;
  v.net = Mlp::init(trunk_sizes(obs_dim, hidden_units, hidden_layers, 1), rng, 1.0, 1.0);
  return v;
}

PolicyOutput policy_forward(const PolicyParams& p, const FeatureVector& obs) {
  std::vector<double> mean = p.net.forward(obs.values);
  PolicyOutput out;
  for (int i = 0; i < kActionDim; ++i) {
    out.mean[static_cast<size_t>(i)] = mean[static_cast<size_t>(i)];
    out.std[static_cast<size_t>(i)] = std::exp(p.log_std[static_cast<size_t>(i)]);
  }
  return out;
}

double value_forward(const ValueParams& v, const FeatureVector& obs) {
  return v.net.forward(obs.values)[0];
}

double gaussian_log_prob(const std::array<double, kActionDim>& mean,
                         const std::array<double, kActionDim>& std,
                         const std::array<double, kActionDim>& action) {
  constexpr double kHalfLog2Pi = 0.9189385332046727;  // ln(2*pi)/2
  double lp = 0.0;
  for (int i = 0; i < kActionDim; ++i) {
    const double s = std[static_cast<size_t>(i)];
    if (!(s > 0.0)) throw ConfigError("gaussian_log_prob: std must be > 0");
    const double z = (action[static_cast<size_t>(i)] - mean[static_cast<size_t>(i)]) / s;
    lp += -kHalfLog2Pi - std::log(s) - 0.5 * z * z;
  }
  return lp;
}

double gaussian_kl(const std::array<double, kActionDim>& mean1,
                   const std::array<double, kActionDim>& std1,
                   const std::array<double, kActionDim>& mean2,
                   const std::array<double, kActionDim>& std2) {
  double kl = 0.0;
  for (int i = 0; i < kActionDim; ++i) {
    const double s1 = std1[static_cast<size_t>(i)];
    const double s2 = std2[static_cast<size_t>(i)];
    if (!(s1 > 0.0) || !(s2 > 0.0)) throw ConfigError("gaussian_kl: std must be > 0");
    const double dm = mean1[static_cast<size_t>(i)] - mean2[static_cast<size_t>(i)];
    kl += std::log(s2 / s1) + (s1 * s1 + dm * dm) / (2.0 * s2 * s2) - 0.5;
  }
  return kl;
}

std::vector<double> policy_flat(const PolicyParams& p) {
  std::vector<double> flat = p.net.params();
  flat.insert(flat.end(), p.log_std.begin(), p.log_std.end());
  return flat;
}

void policy_set_flat(PolicyParams& p, const std::vector<double>& flat) {
  if (flat.size() != p.net.param_count() + kActionDim) {
    throw ConfigError("policy_set_flat: size mismatch");
  }
  std::copy(flat.begin(), flat.begin() + static_cast<long>(p.net.param_count()),
            p.net.params().begin());
  std::copy(flat.end() - kActionDim, flat.end(), p.log_std.begin());
}

void clamp_log_std(PolicyParams& p) {
  for (double& ls : p.log_std) {
    if (ls < kLogStdMin) ls = kLogStdMin;
    if (ls > kLogStdMax) ls = kLogStdMax;
  }
}

std::array<double, kActionDim> action_to_array(const Action& a) {
  return {a.dx, a.dy, a.dz, a.dtheta, a.dphi, a.dpsi};
}

Action array_to_action(const std::array<double, kActionDim>& a) {
  return Action{a[0], a[1], a[2], a[3], a[4], a[5]};
}

}  // namespace aeronav
