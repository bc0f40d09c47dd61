#include "aeronav/mlp.hpp"

#include <cmath>

#include "aeronav/errors.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

namespace {

size_t total_params(const std::vector<int>& sizes) {
  size_t n = 0;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += static_cast<size_t>(sizes[l + 1]) * static_cast<size_t>(sizes[l]) +
         static_cast<size_t>(sizes[l + 1]);
  }
  return n;
}

// Orthonormalize the rows of an out x in matrix (or its transpose when
// out > in) via modified Gram-Schmidt, then scale by gain.
void orthogonal_fill(double* w, int out, int in, Rng& rng, double gain) {
  const bool tall = out > in;
  const int rows = tall ? in : out;
  const int cols = tall ? out : in;
  std::vector<double> g(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  for (double& x : g) x = rng.normal();
  for (int r = 0; r < rows; ++r) {
    double* row = &g[static_cast<size_t>(r) * cols];
    for (int p = 0; p < r; ++p) {
      const double* prev = &g[static_cast<size_t>(p) * cols];
      double proj = 0.0;
      for (int c = 0; c < cols; ++c) proj += row[c] * prev[c];
      for (int c = 0; c < cols; ++c) row[c] -= proj * prev[c];
    }
    double nrm = 0.0;
    for (int c = 0; c < cols; ++c) nrm += row[c] * row[c];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) {
      for (int c = 0; c < cols; ++c) row[c] = (c == r % cols) ? 1.0 : 0.0;
    } else {
      for (int c = 0; c < cols; ++c) row[c] /= nrm;
    }
  }
  for (int i = 0; i < out; ++i) {
    for (int j = 0; j < in; ++j) {
      double v = tall ? g[static_cast<size_t>(j) * out + i] : g[static_cast<size_t>(i) * in + j];
      w[static_cast<size_t>(i) * in + j] = gain * v;
    }
  }
}

}  // namespace

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw ConfigError("mlp needs at least input and output sizes");
  for (int s : sizes_) {
    if (s < 1) throw ConfigError("mlp layer sizes must be >= 1");
  }
  params_.assign(total_params(sizes_), 0.0);
  size_t off = 0;
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    layer_offsets_.push_back(off);
    off += static_cast<size_t>(sizes_[l + 1]) * static_cast<size_t>(sizes_[l]) +
           static_cast<size_t>(sizes_[l + 1]);
  }
}

Mlp Mlp::init(std::vector<int> sizes, Rng& rng, double gain_hidden, double gain_out) {
  Mlp net(std::move(sizes));
  const size_t layers = net.sizes_.size() - 1;
  for (size_t l = 0; l < layers; ++l) {
    const int in = net.sizes_[l];
    const int out = net.sizes_[l + 1];
    const double gain = (l + 1 == layers) ? gain_out : gain_hidden;
    orthogonal_fill(&net.params_[net.layer_offsets_[l]], out, in, rng, gain);
    // biases stay zero
  }
  return net;
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
  Cache cache;
  return forward_cached(x, cache);
}

std::vector<double> Mlp::forward_cached(const std::vector<double>& x, Cache& cache) const {
  if (static_cast<int>(x.size()) != sizes_.front()) {
    throw ConfigError("mlp input has dimension " + fmt_int((long long)x.size()) +
                      ", expected " + fmt_int(sizes_.front()));
  }
  cache.acts.clear();
  cache.acts.reserve(sizes_.size());
  cache.acts.push_back(x);
  const size_t layers = sizes_.size() - 1;
  for (size_t l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = &params_[layer_offsets_[l]];
    const double* b = w + static_cast<size_t>(out) * in;
    const std::vector<double>& a = cache.acts.back();
    std::vector<double> next(static_cast<size_t>(out));
    const bool last = (l + 1 == layers);
    for (int i = 0; i < out; ++i) {
      double acc = b[i];
      const double* row = w + static_cast<size_t>(i) * in;
      for (int j = 0; j < in; ++j) acc += row[j] * a[static_cast<size_t>(j)];
      next[static_cast<size_t>(i)] = last ? acc : std::tanh(acc);
    }
    cache.acts.push_back(std::move(next));
  }
  return cache.acts.back();
}

std::vector<double> Mlp::backward(const Cache& cache, const std::vector<double>& d_out,
                                  std::vector<double>& grads) const {
  if (grads.size() != params_.size()) {
    throw ConfigError("gradient buffer size mismatch");
  }
  if (cache.acts.size() != sizes_.size()) {
    throw ConfigError("backward called without a matching forward cache");
  }
  const size_t layers = sizes_.size() - 1;
  std::vector<double> da = d_out;
  for (size_t l = layers; l-- > 0;) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const bool last = (l + 1 == layers);
    const std::vector<double>& a_in = cache.acts[l];
    const std::vector<double>& a_out = cache.acts[l + 1];
    // dz = da (linear output) or da * (1 - a^2) (tanh)
    std::vector<double> dz(static_cast<size_t>(out));
    for (int i = 0; i < out; ++i) {
      double g = da[static_cast<size_t>(i)];
      if (!last) {
        const double a = a_out[static_cast<size_t>(i)];
        g *= (1.0 - a * a);
      }
      dz[static_cast<size_t>(i)] = g;
    }
    double* gw = &grads[layer_offsets_[l]];
    double* gb = gw + static_cast<size_t>(out) * in;
    const double* w = &params_[layer_offsets_[l]];
    std::vector<double> da_prev(static_cast<size_t>(in), 0.0);
    for (int i = 0; i < out; ++i) {
      const double gi = dz[static_cast<size_t>(i)];
      double* grow = gw + static_cast<size_t>(i) * in;
      const double* wrow = w + static_cast<size_t>(i) * in;
      for (int j = 0; j < in; ++j) {
        grow[j] += gi * a_in[static_cast<size_t>(j)];
        da_prev[static_cast<size_t>(j)] += gi * wrow[j];
      }
      gb[i] += gi;
    }
    da = std::move(da_prev);
  }
  return da;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, double learning_rate) {
  if (params.size() != grads.size()) {
    throw ConfigError("adam_step: params and grads differ in size");
  }
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) {
    throw ConfigError("adam_step: optimizer state does not match parameters");
  }
  state.step += 1;
  const double b1 = AdamState::kBeta1;
  const double b2 = AdamState::kBeta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= learning_rate * mhat / (std::sqrt(vhat) + AdamState::kEps);
  }
}

}  // namespace aeronav
