#ifndef AERONAV_PPO_HPP
#define AERONAV_PPO_HPP

#include <array>
#include <vector>

#include "aeronav/config.hpp"
#include "aeronav/episode.hpp"
#include "aeronav/geometry.hpp"
#include "aeronav/policy.hpp"

namespace aeronav {

// One transition as seen by the optimizer. log_prob_old was recorded at
// sampling time from the collection snapshot.
struct RolloutStep {
  FeatureVector observation;
  std::array<double, kActionDim> action{};
  double log_prob_old = 0.0;
  double reward = 0.0;        // combined signal driving the surrogate
  double reward_dense = 0.0;
  double reward_verifiable = 0.0;
  int t = 0;
  int episode_index = 0;
};

struct RolloutBatch {
  std::vector<RolloutStep> steps;
  int episodes = 0;

  bool empty() const { return steps.empty(); }
};

// w_dense * dense + w_verifiable * verifiable.
double total_step_reward(double dense, double verifiable, const RewardConfig& cfg);

// Appends an episode's transitions; rewards combined via total_step_reward,
// optionally after baseline subtraction later (see trainer).
void append_episode(RolloutBatch& batch, const Episode& e, const RewardConfig& cfg);

// Clipped-ratio surrogate with a KL anchor to the frozen reference policy:
//   -mean[ min(rho * R, clip(rho, 1-eps, 1+eps) * R) - beta * KL(pi||ref) ]
// where rho = exp(log pi(a|s) - log pi_old(a|s)). Returns the value to
// minimize. Throws ConfigError on an empty batch.
double ppo_kl_loss(const RolloutBatch& batch, const PolicyParams& policy,
                   const PolicyParams& policy_old, const PolicyParams& policy_ref,
                   double epsilon, double beta);

// Same loss plus its exact gradient in policy_flat layout (net params then
// log_std); pass nullptr to skip gradient work. Step indices may restrict
// evaluation to a minibatch; empty means the whole batch.
double ppo_kl_loss_grad(const RolloutBatch& batch, const PolicyParams& policy,
                        const PolicyParams& policy_old, const PolicyParams& policy_ref,
                        double epsilon, double beta, std::vector<double>* grad_out,
                        const std::vector<size_t>& indices = {});

}  // namespace aeronav

#endif  // AERONAV_PPO_HPP
