#ifndef AERONAV_MLP_HPP
#define AERONAV_MLP_HPP

#include <cstdint>
#include <vector>

#include "aeronav/rng.hpp"

namespace aeronav {

// Feed-forward network, tanh hidden layers, linear output. Parameters are a
// single flat vector laid out layer by layer: W (out x in, row-major), then b.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes);

  // Scaled orthogonal init for weights, zero biases. gain_out applies to the
  // final layer only.
  static Mlp init(std::vector<int> sizes, Rng& rng, double gain_hidden = 1.0,
                  double gain_out = 1.0);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  size_t param_count() const { return params_.size(); }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  std::vector<double> forward(const std::vector<double>& x) const;

  // Activations kept for backprop: acts[0] is the input, acts[L] the output.
  struct Cache {
    std::vector<std::vector<double>> acts;
  };
  std::vector<double> forward_cached(const std::vector<double>& x, Cache& cache) const;

  // Accumulates dL/dparams into grads (same layout/size as params) given
  // dL/doutput; returns dL/dinput. grads must be pre-sized and may already
  // hold partial sums from other samples.
  std::vector<double> backward(const Cache& cache, const std::vector<double>& d_out,
                               std::vector<double>& grads) const;

  bool operator==(const Mlp& o) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<size_t> layer_offsets_;  // start of each layer's W within params_
  std::vector<double> params_;
};

// Adam with bias correction. Moments are lazily sized on first step.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long step = 0;

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
};

// One update in place. Throws ConfigError when grads and params disagree
// in size (or the moments do, once initialized).
void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, double learning_rate);

}  // namespace aeronav

#endif  // AERONAV_MLP_HPP
