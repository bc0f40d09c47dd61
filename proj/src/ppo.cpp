#include "aeronav/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aeronav/errors.hpp"

namespace aeronav {

double total_step_reward(double dense, double verifiable, const RewardConfig& cfg) {
  return cfg.w_dense * dense + cfg.w_verifiable * verifiable;
}

void append_episode(RolloutBatch& batch, const Episode& e, const RewardConfig& cfg) {
  const int ep = batch.episodes;
  for (const StepRecord& r : e.records) {
    RolloutStep s;
    s.observation = r.observation;
    s.action = action_to_array(r.action);
    s.log_prob_old = r.log_prob;
    s.reward_dense = r.reward_dense;
    s.reward_verifiable = r.reward_verifiable;
    s.reward = total_step_reward(r.reward_dense, r.reward_verifiable, cfg);
    s.t = r.t;
    s.episode_index = ep;
    batch.steps.push_back(std::move(s));
  }
  batch.episodes += 1;
}

namespace {

// Keeps exp(log-ratio) finite; gradients at this magnitude are already
// saturated by the clip term, so the cap only prevents inf/NaN poisoning.
constexpr double kMaxLogRatio = 60.0;

struct StepTerms {
  double objective = 0.0;  // min(rho R, clip(rho) R) - beta * KL
  double d_obj_d_rho = 0.0;
  double rho = 0.0;
};

StepTerms surrogate_terms(double log_ratio, double reward, double epsilon) {
  StepTerms out;
  const double lr = std::clamp(log_ratio, -kMaxLogRatio, kMaxLogRatio);
  const double rho = std::exp(lr);
  out.rho = rho;
  const double clipped = std::clamp(rho, 1.0 - epsilon, 1.0 + epsilon);
  const double a = rho * reward;
  const double b = clipped * reward;
  if (a <= b) {
    out.objective = a;
    out.d_obj_d_rho = reward;
  } else {
    out.objective = b;
    out.d_obj_d_rho = (rho >= 1.0 - epsilon && rho <= 1.0 + epsilon) ? reward : 0.0;
  }
  return out;
}

}  // namespace

double ppo_kl_loss(const RolloutBatch& batch, const PolicyParams& policy,
                   const PolicyParams& policy_old, const PolicyParams& policy_ref,
                   double epsilon, double beta) {
  return ppo_kl_loss_grad(batch, policy, policy_old, policy_ref, epsilon, beta, nullptr);
}

double ppo_kl_loss_grad(const RolloutBatch& batch, const PolicyParams& policy,
                        const PolicyParams& policy_old, const PolicyParams& policy_ref,
                        double epsilon, double beta, std::vector<double>* grad_out,
                        const std::vector<size_t>& indices) {
  if (batch.empty()) throw ConfigError("ppo_kl_loss: empty batch");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("ppo_kl_loss: epsilon in (0,1)");
  if (beta < 0.0) throw ConfigError("ppo_kl_loss: beta must be >= 0");

  const bool want_grad = grad_out != nullptr;
  const size_t net_params = policy.net.param_count();
  std::vector<double> net_grads;
  std::array<double, kActionDim> log_std_grads{};
  if (want_grad) net_grads.assign(net_params, 0.0);

  std::vector<size_t> all;
  const std::vector<size_t>* idx = &indices;
  if (indices.empty()) {
    all.resize(batch.steps.size());
    std::iota(all.begin(), all.end(), size_t{0});
    idx = &all;
  }
  const double inv_n = 1.0 / static_cast<double>(idx->size());

  std::array<double, kActionDim> std_cur{};
  std::array<double, kActionDim> var_cur{};
  for (int j = 0; j < kActionDim; ++j) {
    std_cur[static_cast<size_t>(j)] = std::exp(policy.log_std[static_cast<size_t>(j)]);
    var_cur[static_cast<size_t>(j)] =
        std_cur[static_cast<size_t>(j)] * std_cur[static_cast<size_t>(j)];
  }

  double loss = 0.0;
  for (size_t si : *idx) {
    const RolloutStep& step = batch.steps[si];

    Mlp::Cache cache;
    std::vector<double> mean_vec = policy.net.forward_cached(step.observation.values, cache);
    std::array<double, kActionDim> mean{};
    for (int j = 0; j < kActionDim; ++j) mean[static_cast<size_t>(j)] = mean_vec[static_cast<size_t>(j)];

    const double lp = gaussian_log_prob(mean, std_cur, step.action);
    PolicyOutput old_out = policy_forward(policy_old, step.observation);
    const double lp_old = gaussian_log_prob(old_out.mean, old_out.std, step.action);
    StepTerms terms = surrogate_terms(lp - lp_old, step.reward, epsilon);

    PolicyOutput ref_out = policy_forward(policy_ref, step.observation);
    const double kl = gaussian_kl(mean, std_cur, ref_out.mean, ref_out.std);

    loss += -(terms.objective - beta * kl);

    if (!want_grad) continue;

    // d(loss)/d(mean_j) and d(loss)/d(log_std_j) for this step.
    std::vector<double> d_mean(kActionDim, 0.0);
    for (int j = 0; j < kActionDim; ++j) {
      const size_t j_s = static_cast<size_t>(j);
      const double diff = step.action[j_s] - mean[j_s];
      const double dlp_dmean = diff / var_cur[j_s];
      const double dlp_dls = diff * diff / var_cur[j_s] - 1.0;
      const double ref_var = ref_out.std[j_s] * ref_out.std[j_s];
      const double dkl_dmean = (mean[j_s] - ref_out.mean[j_s]) / ref_var;
      const double dkl_dls = var_cur[j_s] / ref_var - 1.0;
      const double d_surr = terms.d_obj_d_rho * terms.rho;
      d_mean[j_s] = inv_n * (-(d_surr * dlp_dmean) + beta * dkl_dmean);
      log_std_grads[j_s] += inv_n * (-(d_surr * dlp_dls) + beta * dkl_dls);
    }
    policy.net.backward(cache, d_mean, net_grads);
  }

  loss *= inv_n;

  if (want_grad) {
    grad_out->resize(net_params + kActionDim);
    std::copy(net_grads.begin(), net_grads.end(), grad_out->begin());
    std::copy(log_std_grads.begin(), log_std_grads.end(),
              grad_out->begin() + static_cast<long>(net_params));
  }
  return loss;
}

}  // namespace aeronav
