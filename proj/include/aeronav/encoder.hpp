#ifndef AERONAV_ENCODER_HPP
#define AERONAV_ENCODER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "aeronav/config.hpp"
#include "aeronav/geometry.hpp"

namespace aeronav {

// Frozen feature encoder: a seeded random projection followed by tanh.
// State-side and goal-side inputs share one raw layout and one projection,
// so the cosine similarity between their features rises as the state
// approaches the goal. Never updated by any optimizer.
//
// Raw input layout (both sides; absent channels are zero):
//   [0..2]   (position - world center) / extent
//   [3..5]   (goal - position) / extent, amplified   goal side: zeros
//   [6..8]   obstacle repulsion: direction weighted by closeness
//   [9..11]  (hint - position) / extent              goal side: zeros
//   [12..14] Euler angles / pi, scaled down          goal side: zeros
//   [15..18] token embedding from goal_token_seed, shared by both sides
class EncoderParams {
 public:
  EncoderParams(uint64_t seed, int d, const WorldConfig& world);

  uint64_t seed() const { return seed_; }
  int d() const { return d_; }
  double world_extent() const { return extent_; }
  Vec3 world_center() const { return center_; }
  double sensing_range() const { return sensing_range_; }
  int raw_dim() const { return kRawDim; }

  // tanh(W * raw + b); raw.size() must equal raw_dim().
  FeatureVector project(const std::vector<double>& raw) const;

  // Deterministic token embedding for an instruction stand-in seed.
  std::vector<double> token_embedding(int64_t token_seed) const;

  bool operator==(const EncoderParams& o) const {
    return seed_ == o.seed_ && d_ == o.d_ && extent_ == o.extent_ && center_ == o.center_ &&
           sensing_range_ == o.sensing_range_ && weights_ == o.weights_ && bias_ == o.bias_;
  }

  static constexpr int kTokenDim = 4;
  static constexpr int kRawDim = 15 + kTokenDim;
  static constexpr double kAngleScale = 0.1;
  static constexpr double kRelGoalGain = 2.0;
  static constexpr double kTokenScale = 0.3;

 private:
  uint64_t seed_;
  int d_;
  double extent_;
  Vec3 center_;
  double sensing_range_;
  std::vector<double> weights_;  // d_ x kRawDim, row-major
  std::vector<double> bias_;     // d_
};

// Feature representation of the current state. The clearance offset comes
// from the world's obstacle sensor; zero when nothing is in range.
FeatureVector encode_state(const EncoderParams& enc, const Pose& pose, const GoalSpec& goal,
                           const std::optional<Vec3>& hint,
                           const Vec3& clearance_offset = Vec3{});

// Feature representation of the labelled target waypoint.
FeatureVector encode_goal(const EncoderParams& enc, const Waypoint& w, const GoalSpec& goal);
FeatureVector encode_goal(const EncoderParams& enc, const Vec3& position, int64_t token_seed);

// <u,v> / (|u||v|), clamped into [-1, 1]. Throws ConfigError on a zero vector.
double cosine_similarity(const FeatureVector& u, const FeatureVector& v);

// GoalSpec with description_features filled from the encoder.
GoalSpec make_goal_spec(const EncoderParams& enc, const Vec3& position, int64_t token_seed);

}  // namespace aeronav

#endif  // AERONAV_ENCODER_HPP
