#ifndef AERONAV_REWARDS_HPP
#define AERONAV_REWARDS_HPP

#include <vector>

#include "aeronav/config.hpp"
#include "aeronav/geometry.hpp"
#include "aeronav/policy.hpp"

namespace aeronav {

// Values along a trajectory, one per waypoint state (v_1 .. v_{n+1}).
using ValueSequence = std::vector<double>;

// Trajectory-level reward from a value sequence.
//   value_drop:  sum_{t=1..n} gamma^t * (v_t - v_{t+1})
//   potential:   sum_{t=1..n} gamma^(t-1) * (gamma * v_{t+1} - v_t)
// Throws ConfigError when the sequence has fewer than two entries.
double dense_trajectory_reward(const ValueSequence& vs, double gamma, ShapingMode mode);

// Per-step decomposition of the above; t is 1-based. Summing over
// t = 1..n reproduces dense_trajectory_reward exactly in either mode.
double per_step_shaped_reward(double v_t, double v_next, double gamma, ShapingMode mode,
                              int t);

// Thresholded similarity reward: min(1 / (1 - sim), cap), where cap is
// r_level when finite and r_max otherwise. The sim -> 1 singularity is
// absorbed by the cap; the result is always positive and finite.
double verifiable_reward(double sim, double r_level, double r_max);

// Mean hinge over adjacent pairs: avg_t max(0, margin + v_t - v_{t+1}).
// Zero iff every pair satisfies v_{t+1} - v_t >= margin.
double value_ranking_loss(const ValueSequence& vs, double margin);

// d(loss)/d(v_t) for each entry; same averaging as the loss.
std::vector<double> value_ranking_loss_grad(const ValueSequence& vs, double margin);

struct ValueFitReport {
  std::vector<double> epoch_loss;        // mean training loss per epoch
  double holdout_monotone_fraction = 0.0;  // held-out pairs with v_t < v_{t+1}
  size_t train_sequences = 0;
  size_t holdout_sequences = 0;
};

// Post-fit value scale: mean value gain across one expert step. Chosen so
// the potential-shaped dense reward is commensurate with the capped
// similarity reward over a full-speed step.
inline constexpr double kExpertStepGapTarget = 5.0;

// Fits the value model by minimizing the mean ranking loss over expert
// state sequences (one FeatureVector per visited state, in visit order).
// holdout_fraction of the sequences is held out by a seeded split.
ValueFitReport fit_value_model(ValueParams& value,
                               const std::vector<std::vector<FeatureVector>>& sequences,
                               double margin, int epochs, double learning_rate,
                               double holdout_fraction, uint64_t seed);

}  // namespace aeronav

#endif  // AERONAV_REWARDS_HPP
