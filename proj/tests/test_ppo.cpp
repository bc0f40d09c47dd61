#include <doctest.h>

#include <cmath>

#include "aeronav/errors.hpp"
#include "aeronav/ppo.hpp"
#include "aeronav/rng.hpp"
#include "testutil.hpp"

using namespace aeronav;

namespace {

constexpr int kObsDim = 4;

PolicyParams zero_policy(double log_std = 0.0) {
  PolicyParams p;
  p.net = Mlp({kObsDim, kActionDim});
  p.log_std.fill(log_std);
  return p;
}

// Mean biased along dimension 0 regardless of the observation.
PolicyParams biased_policy(double bias0, double log_std = 0.0) {
  PolicyParams p = zero_policy(log_std);
  // Last kActionDim entries of a single linear layer are the biases.
  p.net.params()[p.net.param_count() - kActionDim] = bias0;
  return p;
}

}  // namespace

TEST_CASE("total_step_reward combines the two signals") {
  RewardConfig cfg;  // unit weights
  CHECK(total_step_reward(0.0, 2.0, cfg) == 2.0);
  cfg.w_dense = 0.5;
  cfg.w_verifiable = 0.5;
  CHECK(total_step_reward(1.0, 1.0, cfg) == 1.0);
  cfg.w_dense = 0.0;
  cfg.w_verifiable = 1.0;
  CHECK(total_step_reward(123.0, 4.5, cfg) == 4.5);
}

TEST_CASE("identical policies and unit rewards give loss -1") {
  PolicyParams p = zero_policy();
  RolloutBatch batch;
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    RolloutStep s;
    s.observation.values.assign(kObsDim, 0.0);
    for (int k = 0; k < kActionDim; ++k) s.action[k] = rng.normal();
    PolicyOutput out = policy_forward(p, s.observation);
    s.log_prob_old = gaussian_log_prob(out.mean, out.std, s.action);
    s.reward = 1.0;
    batch.steps.push_back(s);
  }
  batch.episodes = 1;
  const double loss = ppo_kl_loss(batch, p, p, p, 0.2, 0.1);
  CHECK(loss == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("hand case: rho=2, R=1 clips to 1.2") {
  // log pi - log pi_old = ln 2 via a mean shift of sqrt(2 ln 2) at sigma=1.
  const double delta = std::sqrt(2.0 * std::log(2.0));
  PolicyParams current = zero_policy();   // mean 0 = action
  PolicyParams old = biased_policy(-delta);
  RolloutBatch batch;
  RolloutStep s;
  s.observation.values.assign(kObsDim, 0.0);
  s.action = {};  // exactly the current mean
  PolicyOutput old_out = policy_forward(old, s.observation);
  s.log_prob_old = gaussian_log_prob(old_out.mean, old_out.std, s.action);
  s.reward = 1.0;
  batch.steps.push_back(s);
  batch.episodes = 1;

  const double loss = ppo_kl_loss(batch, current, old, current, 0.2, 0.0);
  CHECK(loss == doctest::Approx(-1.2).epsilon(1e-9));
}

TEST_CASE("hand case: rho=0.5, R=-1 clips to -0.8") {
  const double delta = std::sqrt(2.0 * std::log(2.0));
  PolicyParams current = biased_policy(-delta);  // lp lower by ln 2 at action 0
  PolicyParams old = zero_policy();
  RolloutBatch batch;
  RolloutStep s;
  s.observation.values.assign(kObsDim, 0.0);
  s.action = {};
  PolicyOutput old_out = policy_forward(old, s.observation);
  s.log_prob_old = gaussian_log_prob(old_out.mean, old_out.std, s.action);
  s.reward = -1.0;
  batch.steps.push_back(s);
  batch.episodes = 1;

  const double loss = ppo_kl_loss(batch, current, old, current, 0.2, 0.0);
  CHECK(loss == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("clip inactivity: ratios inside the window equal the raw surrogate") {
  Rng rng(11);
  PolicyParams p = make_policy(kObsDim, 8, 1, -0.3, rng);
  PolicyParams old = p;
  // Nudge the old policy slightly so ratios differ from 1 but stay inside.
  old.net.params()[old.net.param_count() - kActionDim] += 0.01;

  RolloutBatch batch;
  double raw_surrogate = 0.0;
  for (int i = 0; i < 20; ++i) {
    RolloutStep s;
    s.observation.values.clear();
    for (int k = 0; k < kObsDim; ++k) s.observation.values.push_back(rng.normal() * 0.3);
    PolicyOutput cur = policy_forward(p, s.observation);
    for (int k = 0; k < kActionDim; ++k) s.action[k] = cur.mean[k] + 0.1 * rng.normal();
    PolicyOutput old_out = policy_forward(old, s.observation);
    s.log_prob_old = gaussian_log_prob(old_out.mean, old_out.std, s.action);
    s.reward = rng.normal();
    batch.steps.push_back(s);

    const double lp = gaussian_log_prob(cur.mean, cur.std, s.action);
    const double rho = std::exp(lp - s.log_prob_old);
    REQUIRE(rho > 0.8);
    REQUIRE(rho < 1.2);
    raw_surrogate += rho * s.reward;
  }
  batch.episodes = 1;
  raw_surrogate /= static_cast<double>(batch.steps.size());
  const double loss = ppo_kl_loss(batch, p, old, p, 0.2, 0.0);
  CHECK(loss == doctest::Approx(-raw_surrogate).epsilon(1e-12));
}

TEST_CASE("KL anchoring: beta=0 ignores the reference, theta=ref zeroes the term") {
  Rng rng(13);
  PolicyParams p = make_policy(kObsDim, 8, 1, -0.3, rng);
  PolicyParams ref_a = make_policy(kObsDim, 8, 1, 0.4, rng);
  PolicyParams ref_b = make_policy(kObsDim, 8, 1, -1.0, rng);

  RolloutBatch batch;
  for (int i = 0; i < 8; ++i) {
    RolloutStep s;
    for (int k = 0; k < kObsDim; ++k) s.observation.values.push_back(rng.normal() * 0.4);
    PolicyOutput cur = policy_forward(p, s.observation);
    for (int k = 0; k < kActionDim; ++k) s.action[k] = cur.mean[k] + 0.3 * rng.normal();
    s.log_prob_old = gaussian_log_prob(cur.mean, cur.std, s.action);
    s.reward = rng.normal();
    batch.steps.push_back(s);
  }
  batch.episodes = 1;

  // beta = 0: loss and gradient independent of the reference policy.
  std::vector<double> grad_a, grad_b;
  const double loss_a = ppo_kl_loss_grad(batch, p, p, ref_a, 0.2, 0.0, &grad_a);
  const double loss_b = ppo_kl_loss_grad(batch, p, p, ref_b, 0.2, 0.0, &grad_b);
  CHECK(loss_a == loss_b);
  CHECK(grad_a == grad_b);

  // theta == ref: the KL term contributes exactly zero at any beta.
  const double loss_ref_self = ppo_kl_loss(batch, p, p, p, 0.2, 1e6);
  CHECK(loss_ref_self == loss_a);
}

TEST_CASE("ppo gradient matches central finite differences") {
  double worst = 0.0;
  for (uint64_t trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(900, 0, trial));
    PolicyParams p = make_policy(kObsDim, 6, 1, -0.2, rng);
    PolicyParams old = make_policy(kObsDim, 6, 1, -0.4, rng);
    PolicyParams ref = make_policy(kObsDim, 6, 1, 0.1, rng);

    RolloutBatch batch;
    for (int i = 0; i < 6; ++i) {
      RolloutStep s;
      for (int k = 0; k < kObsDim; ++k) s.observation.values.push_back(rng.normal() * 0.5);
      PolicyOutput old_out = policy_forward(old, s.observation);
      for (int k = 0; k < kActionDim; ++k) {
        s.action[k] = old_out.mean[k] + old_out.std[k] * rng.normal();
      }
      s.log_prob_old = gaussian_log_prob(old_out.mean, old_out.std, s.action);
      s.reward = rng.normal(0.0, 2.0);
      batch.steps.push_back(s);
    }
    batch.episodes = 2;

    std::vector<double> grad;
    ppo_kl_loss_grad(batch, p, old, ref, 0.2, 0.37, &grad);

    auto loss_at = [&](const std::vector<double>& flat) {
      PolicyParams probe = p;
      policy_set_flat(probe, flat);
      return ppo_kl_loss(batch, probe, old, ref, 0.2, 0.37);
    };
    worst = std::max(worst, testutil::max_grad_rel_error(policy_flat(p), grad, loss_at));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("empty batches and bad hyperparameters are rejected") {
  PolicyParams p = zero_policy();
  RolloutBatch empty;
  CHECK_THROWS_AS(ppo_kl_loss(empty, p, p, p, 0.2, 0.1), ConfigError);

  RolloutBatch batch;
  RolloutStep s;
  s.observation.values.assign(kObsDim, 0.0);
  s.log_prob_old = gaussian_log_prob(policy_forward(p, s.observation).mean,
                                     policy_forward(p, s.observation).std, s.action);
  batch.steps.push_back(s);
  CHECK_THROWS_AS(ppo_kl_loss(batch, p, p, p, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(ppo_kl_loss(batch, p, p, p, 1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(ppo_kl_loss(batch, p, p, p, 0.2, -1.0), ConfigError);
}

TEST_CASE("append_episode copies rewards and tags episode indices") {
  Episode e;
  e.records.resize(3);
  for (int i = 0; i < 3; ++i) {
    e.records[static_cast<size_t>(i)].t = i;
    e.records[static_cast<size_t>(i)].reward_dense = 0.5 * i;
    e.records[static_cast<size_t>(i)].reward_verifiable = 1.0 + i;
    e.records[static_cast<size_t>(i)].log_prob = -2.0;
  }
  RewardConfig cfg;
  RolloutBatch batch;
  append_episode(batch, e, cfg);
  append_episode(batch, e, cfg);
  CHECK(batch.episodes == 2);
  CHECK(batch.steps.size() == 6);
  CHECK(batch.steps[0].episode_index == 0);
  CHECK(batch.steps[4].episode_index == 1);
  CHECK(batch.steps[2].reward ==
        doctest::Approx(total_step_reward(1.0, 3.0, cfg)));
  CHECK(batch.steps[1].t == 1);
}
