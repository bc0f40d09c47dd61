#ifndef AERONAV_METRICS_HPP
#define AERONAV_METRICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aeronav/config.hpp"
#include "aeronav/episode.hpp"
#include "aeronav/geometry.hpp"

namespace aeronav {

enum class NeMode { kRaw, kNormalized };

std::string to_string(NeMode m);

// Per-episode quantities behind SR/OSR/SPL/NE.
struct EpisodeResult {
  bool success = false;
  double final_distance = 0.0;
  double min_distance = 0.0;
  double initial_distance = 0.0;
  double agent_path_length = 0.0;
  double oracle_path_length = 0.0;
  std::string difficulty;  // "easy" | "hard"
  Assistance assistance = Assistance::kL3;
};

EpisodeResult to_result(const Episode& e, const Scenario& scenario);

// True iff any visited pose is within success_radius of the goal
// (closed containment: distance exactly equal counts).
bool episode_success(const std::vector<Pose>& visited, const Vec3& goal,
                     double success_radius);

// raw: final distance in meters. normalized: final / initial.
double normalized_error(double final_distance, double initial_distance, NeMode mode);

// Closest continuous approach within the radius (closed).
bool oracle_success(double min_distance, double success_radius);

// 0 on failure, else oracle_len / max(agent_len, oracle_len).
double spl(bool success, double oracle_len, double agent_len);

struct StratumMetrics {
  size_t episodes = 0;
  double ne = 0.0;   // mean error (mode recorded in the report)
  double sr = 0.0;   // percent
  double osr = 0.0;  // percent
  double spl = 0.0;  // percent
};

// difficulty stratum: "full" | "easy" | "hard", crossed with assistance.
struct MetricsReport {
  NeMode ne_mode = NeMode::kRaw;
  double success_radius = 0.0;
  std::map<std::pair<std::string, std::string>, StratumMetrics> strata;  // (assistance, stratum)

  std::optional<StratumMetrics> stratum(const std::string& assistance,
                                        const std::string& difficulty) const;
};

// Percentage means per stratum. Empty strata are absent from the report.
MetricsReport aggregate(const std::vector<EpisodeResult>& results, double success_radius,
                        NeMode ne_mode = NeMode::kRaw);

// CSV table: method,assistance,stratum,episodes,ne,sr,osr,spl with a
// leading `# ne_mode=...` comment naming the error convention in use.
std::string metrics_csv(const MetricsReport& report, const std::string& method_label);

}  // namespace aeronav

#endif  // AERONAV_METRICS_HPP
