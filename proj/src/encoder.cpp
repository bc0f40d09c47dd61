#include "aeronav/encoder.hpp"

#include <cmath>
#include <numbers>

#include "aeronav/errors.hpp"
#include "aeronav/rng.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

EncoderParams::EncoderParams(uint64_t seed, int d, const WorldConfig& world)
    : seed_(seed),
      d_(d),
      extent_(world.extent),
      center_{world.extent / 2.0, world.extent / 2.0,
              (world.min_altitude + world.max_altitude) / 2.0},
      sensing_range_(world.sensing_range) {
  if (d < 1) throw ConfigError("encoder dimension must be >= 1");
  if (!(extent_ > 0.0)) throw ConfigError("world extent must be > 0");
  Rng rng(derive_seed(seed, streams::kEncoder));
  const double w_scale = 1.5 / std::sqrt(static_cast<double>(kRawDim));
  weights_.resize(static_cast<size_t>(d_) * kRawDim);
  for (double& w : weights_) w = rng.normal() * w_scale;
  bias_.resize(static_cast<size_t>(d_));
  for (double& b : bias_) b = rng.normal() * 0.05;
}

FeatureVector EncoderParams::project(const std::vector<double>& raw) const {
  if (static_cast<int>(raw.size()) != kRawDim) {
    throw ConfigError("encoder raw input has dimension " + fmt_int((long long)raw.size()) +
                      ", expected " + fmt_int(kRawDim));
  }
  FeatureVector out;
  out.values.resize(static_cast<size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    double acc = bias_[static_cast<size_t>(i)];
    const double* row = &weights_[static_cast<size_t>(i) * kRawDim];
    for (int j = 0; j < kRawDim; ++j) acc += row[j] * raw[static_cast<size_t>(j)];
    out.values[static_cast<size_t>(i)] = std::tanh(acc);
  }
  return out;
}

std::vector<double> EncoderParams::token_embedding(int64_t token_seed) const {
  Rng rng(derive_seed(seed_, streams::kEncoder, static_cast<uint64_t>(token_seed) + 1));
  std::vector<double> emb(kTokenDim);
  for (double& e : emb) e = rng.normal() * kTokenScale;
  return emb;
}

namespace {

void put_vec(std::vector<double>& raw, size_t at, const Vec3& v, double scale) {
  raw[at] = v.x * scale;
  raw[at + 1] = v.y * scale;
  raw[at + 2] = v.z * scale;
}

}  // namespace

FeatureVector encode_state(const EncoderParams& enc, const Pose& pose, const GoalSpec& goal,
                           const std::optional<Vec3>& hint, const Vec3& clearance_offset) {
  const double inv_e = 1.0 / enc.world_extent();
  std::vector<double> raw(static_cast<size_t>(enc.raw_dim()), 0.0);
  put_vec(raw, 0, pose.position() - enc.world_center(), inv_e);
  put_vec(raw, 3, goal.goal_position - pose.position(), inv_e * EncoderParams::kRelGoalGain);
  // Repulsion: unit direction to the nearest obstacle, weighted by how
  // close it is (1 at contact, 0 at sensing range or beyond).
  const double off_norm = norm(clearance_offset);
  if (off_norm > 1e-12 && off_norm < enc.sensing_range()) {
    const double weight = 1.0 - off_norm / enc.sensing_range();
    put_vec(raw, 6, clearance_offset, weight / off_norm);
  }
  if (hint) put_vec(raw, 9, *hint - pose.position(), inv_e);
  const double ang = EncoderParams::kAngleScale / std::numbers::pi;
  raw[12] = pose.theta * ang;
  raw[13] = pose.phi * ang;
  raw[14] = pose.psi * ang;
  std::vector<double> tok = enc.token_embedding(goal.goal_token_seed);
  for (int k = 0; k < EncoderParams::kTokenDim; ++k) {
    raw[static_cast<size_t>(15 + k)] = tok[static_cast<size_t>(k)];
  }
  return enc.project(raw);
}

FeatureVector encode_goal(const EncoderParams& enc, const Vec3& position, int64_t token_seed) {
  const double inv_e = 1.0 / enc.world_extent();
  std::vector<double> raw(static_cast<size_t>(enc.raw_dim()), 0.0);
  put_vec(raw, 0, position - enc.world_center(), inv_e);
  std::vector<double> tok = enc.token_embedding(token_seed);
  for (int k = 0; k < EncoderParams::kTokenDim; ++k) {
    raw[static_cast<size_t>(15 + k)] = tok[static_cast<size_t>(k)];
  }
  return enc.project(raw);
}

FeatureVector encode_goal(const EncoderParams& enc, const Waypoint& w, const GoalSpec& goal) {
  return encode_goal(enc, w.position, goal.goal_token_seed);
}

double cosine_similarity(const FeatureVector& u, const FeatureVector& v) {
  if (u.size() != v.size()) {
    throw ConfigError("cosine_similarity dimension mismatch: " + fmt_int((long long)u.size()) +
                      " vs " + fmt_int((long long)v.size()));
  }
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    uu += u[i] * u[i];
    vv += v[i] * v[i];
    uv += u[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw ConfigError("cosine similarity undefined for a zero vector");
  }
  double sim = uv / (std::sqrt(uu) * std::sqrt(vv));
  if (sim > 1.0) sim = 1.0;
  if (sim < -1.0) sim = -1.0;
  return sim;
}

GoalSpec make_goal_spec(const EncoderParams& enc, const Vec3& position, int64_t token_seed) {
  GoalSpec g;
  g.goal_position = position;
  g.goal_token_seed = token_seed;
  g.description_features = encode_goal(enc, position, token_seed);
  return g;
}

}  // namespace aeronav
