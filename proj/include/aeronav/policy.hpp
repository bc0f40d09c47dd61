#ifndef AERONAV_POLICY_HPP
#define AERONAV_POLICY_HPP

#include <array>
#include <vector>

#include "aeronav/geometry.hpp"
#include "aeronav/mlp.hpp"

namespace aeronav {

inline constexpr int kActionDim = 6;
inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

// Diagonal Gaussian policy: MLP trunk ending in a linear 6-way mean head,
// plus state-independent learnable log standard deviations.
struct PolicyParams {
  Mlp net;  // obs_dim -> hidden... -> kActionDim
  std::array<double, kActionDim> log_std{};

  bool operator==(const PolicyParams& o) const = default;
};

struct ValueParams {
  Mlp net;  // obs_dim -> hidden... -> 1

  bool operator==(const ValueParams& o) const = default;
};

PolicyParams make_policy(int obs_dim, int hidden_units, int hidden_layers, double log_std_init,
                         Rng& rng);
ValueParams make_value(int obs_dim, int hidden_units, int hidden_layers, Rng& rng);

struct PolicyOutput {
  std::array<double, kActionDim> mean{};
  std::array<double, kActionDim> std{};
};

// mean = net(obs), std = exp(log_std). Pure.
PolicyOutput policy_forward(const PolicyParams& p, const FeatureVector& obs);

double value_forward(const ValueParams& v, const FeatureVector& obs);

// Diagonal Gaussian log density. Throws ConfigError on non-positive std.
double gaussian_log_prob(const std::array<double, kActionDim>& mean,
                         const std::array<double, kActionDim>& std,
                         const std::array<double, kActionDim>& action);

// KL(N(mean1, std1^2) || N(mean2, std2^2)), summed over dimensions.
double gaussian_kl(const std::array<double, kActionDim>& mean1,
                   const std::array<double, kActionDim>& std1,
                   const std::array<double, kActionDim>& mean2,
                   const std::array<double, kActionDim>& std2);

// Flat parameter views: net parameters followed by log_std. Lets one Adam
// state and one finite-difference probe cover the whole policy.
std::vector<double> policy_flat(const PolicyParams& p);
void policy_set_flat(PolicyParams& p, const std::vector<double>& flat);
void clamp_log_std(PolicyParams& p);

std::array<double, kActionDim> action_to_array(const Action& a);
Action array_to_action(const std::array<double, kActionDim>& a);

}  // namespace aeronav

#endif  // AERONAV_POLICY_HPP
