#include "aeronav/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aeronav/errors.hpp"
#include "aeronav/rng.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

double dense_trajectory_reward(const ValueSequence& vs, double gamma, ShapingMode mode) {
  if (vs.size() < 2) {
    throw ConfigError("dense_trajectory_reward needs at least two values, got " +
                      fmt_int((long long)vs.size()));
  }
  const int n = static_cast<int>(vs.size()) - 1;
  double total = 0.0;
  for (int t = 1; t <= n; ++t) {
    total += per_step_shaped_reward(vs[static_cast<size_t>(t - 1)],
                                    vs[static_cast<size_t>(t)], gamma, mode, t);
  }
  return total;
}

double per_step_shaped_reward(double v_t, double v_next, double gamma, ShapingMode mode,
                              int t) {
  switch (mode) {
    case ShapingMode::kValueDrop:
      return std::pow(gamma, t) * (v_t - v_next);
    case ShapingMode::kPotential:
      return std::pow(gamma, t - 1) * (gamma * v_next - v_t);
  }
  throw ConfigError("unknown shaping mode");
}

double verifiable_reward(double sim, double r_level, double r_max) {
  const double cap = std::isfinite(r_level) ? r_level : r_max;
  // 1/(1-sim) is +inf at sim == 1; IEEE semantics make min(inf, cap) = cap.
  const double gain = (sim < 1.0) ? 1.0 / (1.0 - sim) : std::numeric_limits<double>::infinity();
  return std::min(gain, cap);
}

double value_ranking_loss(const ValueSequence& vs, double margin) {
  if (vs.size() < 2) {
    throw ConfigError("value_ranking_loss needs at least two values, got " +
                      fmt_int((long long)vs.size()));
  }
  if (margin < 0.0) throw ConfigError("margin must be >= 0");
  const size_t pairs = vs.size() - 1;
  double total = 0.0;
  for (size_t t = 0; t + 1 < vs.size(); ++t) {
    total += std::max(0.0, margin + vs[t] - vs[t + 1]);
  }
  return total / static_cast<double>(pairs);
}

std::vector<double> value_ranking_loss_grad(const ValueSequence& vs, double margin) {
  if (vs.size() < 2) {
    throw ConfigError("value_ranking_loss_grad needs at least two values");
  }
  const double inv_pairs = 1.0 / static_cast<double>(vs.size() - 1);
  std::vector<double> grad(vs.size(), 0.0);
  for (size_t t = 0; t + 1 < vs.size(); ++t) {
    if (margin + vs[t] - vs[t + 1] > 0.0) {
      grad[t] += inv_pairs;
      grad[t + 1] -= inv_pairs;
    }
  }
  return grad;
}

ValueFitReport fit_value_model(ValueParams& value,
                               const std::vector<std::vector<FeatureVector>>& sequences,
                               double margin, int epochs, double learning_rate,
                               double holdout_fraction, uint64_t seed) {
  if (sequences.empty()) throw ConfigError("fit_value_model: empty dataset");
  for (const auto& seq : sequences) {
    if (seq.size() < 2) throw ConfigError("fit_value_model: sequence with fewer than 2 states");
  }

  // Seeded split; at least one training sequence.
  std::vector<size_t> order(sequences.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng split_rng(derive_seed(seed, streams::kValueFit));
  split_rng.shuffle(order);
  size_t holdout_n = static_cast<size_t>(std::floor(holdout_fraction * static_cast<double>(sequences.size())));
  if (holdout_n >= sequences.size()) holdout_n = sequences.size() - 1;
  std::vector<size_t> holdout(order.begin(), order.begin() + static_cast<long>(holdout_n));
  std::vector<size_t> train(order.begin() + static_cast<long>(holdout_n), order.end());

  ValueFitReport report;
  report.train_sequences = train.size();
  report.holdout_sequences = holdout.size();

  AdamState opt;
  std::vector<double> grads(value.net.param_count(), 0.0);

  auto sequence_values = [&](const std::vector<FeatureVector>& seq,
                             std::vector<Mlp::Cache>* caches) {
    ValueSequence vs(seq.size());
    if (caches) caches->resize(seq.size());
    for (size_t i = 0; i < seq.size(); ++i) {
      if (caches) {
        vs[i] = value.net.forward_cached(seq[i].values, (*caches)[i])[0];
      } else {
        vs[i] = value.net.forward(seq[i].values)[0];
      }
    }
    return vs;
  };

  // Full-batch epochs: mean ranking loss over training sequences.
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grads.begin(), grads.end(), 0.0);
    double loss_sum = 0.0;
    const double inv_n = 1.0 / static_cast<double>(train.size());
    for (size_t idx : train) {
      const auto& seq = sequences[idx];
      std::vector<Mlp::Cache> caches;
      ValueSequence vs = sequence_values(seq, &caches);
      loss_sum += value_ranking_loss(vs, margin);
      std::vector<double> dvs = value_ranking_loss_grad(vs, margin);
      for (size_t i = 0; i < seq.size(); ++i) {
        if (dvs[i] == 0.0) continue;
        value.net.backward(caches[i], {dvs[i] * inv_n}, grads);
      }
    }
    report.epoch_loss.push_back(loss_sum * inv_n);
    adam_step(value.net.params(), grads, opt, learning_rate);
  }

  // Normalize the value scale so one expert step averages a fixed number
  // of value units: the ranking loss fixes only the ordering, while the
  // shaped rewards downstream need a stable, policy-relevant magnitude.
  // Pure rescale of the linear output layer, so ordering and monotone
  // fractions are unaffected.
  if (epochs > 0) {
    double gap_sum = 0.0;
    size_t gap_n = 0;
    for (size_t idx : train) {
      ValueSequence vs = sequence_values(sequences[idx], nullptr);
      gap_sum += vs.back() - vs.front();
      gap_n += vs.size() - 1;
    }
    const double mean_gap = gap_n == 0 ? 0.0 : gap_sum / static_cast<double>(gap_n);
    if (mean_gap > 1e-9) {
      const double scale = kExpertStepGapTarget / mean_gap;
      const auto& sizes = value.net.sizes();
      const int out = sizes.back();
      const int in = sizes[sizes.size() - 2];
      const size_t tail = static_cast<size_t>(out) * static_cast<size_t>(in) +
                          static_cast<size_t>(out);
      std::vector<double>& params = value.net.params();
      for (size_t i = params.size() - tail; i < params.size(); ++i) params[i] *= scale;
    }
  }

  // Held-out strict-monotonicity fraction; falls back to the training set
  // when no sequences were held out.
  const std::vector<size_t>& probe = holdout.empty() ? train : holdout;
  size_t pairs = 0;
  size_t monotone = 0;
  for (size_t idx : probe) {
    ValueSequence vs = sequence_values(sequences[idx], nullptr);
    for (size_t t = 0; t + 1 < vs.size(); ++t) {
      ++pairs;
      if (vs[t] < vs[t + 1]) ++monotone;
    }
  }
  report.holdout_monotone_fraction =
      pairs == 0 ? 0.0 : static_cast<double>(monotone) / static_cast<double>(pairs);
  return report;
}

}  // namespace aeronav
