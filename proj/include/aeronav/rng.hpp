#ifndef AERONAV_RNG_HPP
#define AERONAV_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace aeronav {

// splitmix64; used to derive independent stream seeds from a master seed.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index = 0) {
  return mix_seed(master ^ mix_seed(stream ^ mix_seed(index)));
}

// Stream ids, one per independent consumer of randomness.
namespace streams {
inline constexpr uint64_t kScenario = 1;
inline constexpr uint64_t kEncoder = 2;
inline constexpr uint64_t kPolicyInit = 3;
inline constexpr uint64_t kValueInit = 4;
inline constexpr uint64_t kRollout = 5;
inline constexpr uint64_t kExpert = 6;
inline constexpr uint64_t kValueFit = 7;
inline constexpr uint64_t kMinibatch = 8;
inline constexpr uint64_t kEval = 9;
inline constexpr uint64_t kSubsample = 10;
}  // namespace streams

// Deterministic RNG. mt19937_64 output is fully specified by the standard;
// the distributions below are hand-rolled because the std:: ones are not.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Fisher-Yates; std::shuffle is implementation-defined so we roll our own.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace aeronav

#endif  // AERONAV_RNG_HPP
