#include "aeronav/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "aeronav/errors.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

std::string to_string(NeMode m) {
  return m == NeMode::kRaw ? "raw" : "normalized";
}

EpisodeResult to_result(const Episode& e, const Scenario& scenario) {
  EpisodeResult r;
  r.success = e.outcome == Outcome::kSuccess;
  r.final_distance = e.final_distance;
  r.min_distance = e.min_distance;
  r.initial_distance = e.initial_distance;
  r.agent_path_length = e.agent_path_length;
  r.oracle_path_length = scenario.oracle_length();
  r.difficulty = scenario.difficulty;
  r.assistance = e.assistance;
  return r;
}

bool episode_success(const std::vector<Pose>& visited, const Vec3& goal,
                     double success_radius) {
  for (const Pose& p : visited) {
    if (euclidean_distance(p.position(), goal) <= success_radius) return true;
  }
  return false;
}

double normalized_error(double final_distance, double initial_distance, NeMode mode) {
  if (mode == NeMode::kRaw) return final_distance;
  if (!(initial_distance > 0.0)) {
    throw ConfigError("normalized_error: initial distance must be > 0 in normalized mode");
  }
  return final_distance / initial_distance;
}

bool oracle_success(double min_distance, double success_radius) {
  return min_distance <= success_radius;
}

double spl(bool success, double oracle_len, double agent_len) {
  if (!(oracle_len > 0.0)) throw ConfigError("spl: oracle length must be > 0");
  if (!success) return 0.0;
  return oracle_len / std::max(agent_len, oracle_len);
}

std::optional<StratumMetrics> MetricsReport::stratum(const std::string& assistance,
                                                     const std::string& difficulty) const {
  auto it = strata.find({assistance, difficulty});
  if (it == strata.end()) return std::nullopt;
  return it->second;
}

MetricsReport aggregate(const std::vector<EpisodeResult>& results, double success_radius,
                        NeMode ne_mode) {
  MetricsReport report;
  report.ne_mode = ne_mode;
  report.success_radius = success_radius;

  struct Acc {
    size_t n = 0;
    double ne = 0.0;
    double sr = 0.0;
    double osr = 0.0;
    double spl_sum = 0.0;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;

  for (const EpisodeResult& r : results) {
    const double ne = normalized_error(r.final_distance, r.initial_distance, ne_mode);
    const bool osr = oracle_success(r.min_distance, success_radius);
    const double s = spl(r.success, r.oracle_path_length, r.agent_path_length);
    const std::string level = to_string(r.assistance);
    for (const std::string& stratum : {std::string("full"), r.difficulty}) {
      Acc& a = acc[{level, stratum}];
      a.n += 1;
      a.ne += ne;
      a.sr += r.success ? 1.0 : 0.0;
      a.osr += osr ? 1.0 : 0.0;
      a.spl_sum += s;
    }
  }

  for (const auto& [key, a] : acc) {
    StratumMetrics m;
    m.episodes = a.n;
    const double inv = 1.0 / static_cast<double>(a.n);
    m.ne = a.ne * inv;
    m.sr = 100.0 * a.sr * inv;
    m.osr = 100.0 * a.osr * inv;
    m.spl = 100.0 * a.spl_sum * inv;
    report.strata[key] = m;
  }
  return report;
}

std::string metrics_csv(const MetricsReport& report, const std::string& method_label) {
  std::string out = "# ne_mode=" + to_string(report.ne_mode) +
                    " success_radius=" + fmt_double(report.success_radius) + "\n";
  out += "method,assistance,stratum,episodes,ne,sr,osr,spl\n";
  // std::map ordering makes the row order deterministic.
  for (const auto& [key, m] : report.strata) {
    out += method_label + "," + key.first + "," + key.second + "," +
           fmt_int(static_cast<long long>(m.episodes)) + "," + fmt_double(m.ne) + "," +
           fmt_double(m.sr) + "," + fmt_double(m.osr) + "," + fmt_double(m.spl) + "\n";
  }
  return out;
}

}  // namespace aeronav
