#include "aeronav/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "aeronav/errors.hpp"
#include "aeronav/textio.hpp"

namespace aeronav {

namespace {
constexpr double kPi = std::numbers::pi;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw BoundsError(std::string("non-finite ") + what + ": " + fmt_double(v));
  }
}
}  // namespace

double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double euclidean_distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return euclidean_distance(p, a);
  double t = dot(p - a, ab) / len2;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return euclidean_distance(p, a + ab * t);
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);  // lands in [-pi, pi]
  if (w >= kPi) w -= 2.0 * kPi;
  return w;
}

Pose::Pose(double x_, double y_, double z_, double theta_, double phi_, double psi_)
    : x(x_), y(y_), z(z_) {
  require_finite(x_, "x");
  require_finite(y_, "y");
  require_finite(z_, "z");
  require_finite(theta_, "theta");
  require_finite(phi_, "phi");
  require_finite(psi_, "psi");
  theta = wrap_angle(theta_);
  phi = wrap_angle(phi_);
  psi = wrap_angle(psi_);
}

void validate_action(const Action& a, const ActionBounds& bounds) {
  const double t = bounds.max_step_len;
  const double r = bounds.max_turn;
  auto check = [](double v, double lim, const char* name) {
    if (!std::isfinite(v) || std::abs(v) > lim) {
      throw BoundsError(std::string("action component ") + name + "=" + fmt_double(v) +
                        " exceeds bound " + fmt_double(lim));
    }
  };
  check(a.dx, t, "dx");
  check(a.dy, t, "dy");
  check(a.dz, t, "dz");
  check(a.dtheta, r, "dtheta");
  check(a.dphi, r, "dphi");
  check(a.dpsi, r, "dpsi");
}

Action clamp_action(const Action& a, const ActionBounds& bounds) {
  auto clip = [](double v, double lim) {
    if (v > lim) return lim;
    if (v < -lim) return -lim;
    return v;
  };
  return Action{clip(a.dx, bounds.max_step_len),  clip(a.dy, bounds.max_step_len),
                clip(a.dz, bounds.max_step_len),  clip(a.dtheta, bounds.max_turn),
                clip(a.dphi, bounds.max_turn),    clip(a.dpsi, bounds.max_turn)};
}

Pose apply_action(const Pose& p, const Action& a, const ActionBounds& bounds) {
  validate_action(a, bounds);
  return Pose(p.x + a.dx, p.y + a.dy, p.z + a.dz, p.theta + a.dtheta, p.phi + a.dphi,
              p.psi + a.dpsi);
}

Waypoint::Waypoint(const Vec3& pos, std::optional<double> radius)
    : position(pos), arrival_radius(radius) {
  if (arrival_radius && *arrival_radius <= 0.0) {
    throw BoundsError("arrival_radius must be > 0, got " + fmt_double(*arrival_radius));
  }
}

double path_length(const Trajectory& t) {
  double total = 0.0;
  for (size_t i = 1; i < t.waypoints.size(); ++i) {
    total += euclidean_distance(t.waypoints[i - 1].position(), t.waypoints[i].position());
  }
  return total;
}

double polyline_distance(const Vec3& p, const Trajectory& t) {
  if (t.waypoints.empty()) return 0.0;
  if (t.waypoints.size() == 1) return euclidean_distance(p, t.waypoints[0].position());
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < t.waypoints.size(); ++i) {
    double d = point_segment_distance(p, t.waypoints[i - 1].position(),
                                      t.waypoints[i].position());
    if (d < best) best = d;
  }
  return best;
}

}  // namespace aeronav
