#include "zerobas/spatial.hpp"

#include <cmath>
#include <numbers>

namespace zerobas {

SphericalPosition::SphericalPosition(double azimuth, double elevation, double distance)
    : azimuth_(azimuth), elevation_(elevation), distance_(distance) {
  if (!std::isfinite(azimuth) || !std::isfinite(elevation) || !std::isfinite(distance))
    throw InvalidInput("spherical position must be finite");
  if (distance < 0.0) throw InvalidInput("distance must be non-negative");
  if (std::abs(elevation) > std::numbers::pi / 2)
    throw InvalidInput("elevation must lie in [-pi/2, pi/2]");
}

Vec3 spherical_to_cartesian(const SphericalPosition& s) {
  const double horizontal = s.distance() * std::cos(s.elevation());
  return {horizontal * std::cos(s.azimuth()), horizontal * std::sin(s.azimuth()),
          s.distance() * std::sin(s.elevation())};
}

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Vec3 Quaternion::rotate(Vec3 v) const {
  // v' = v + 2w (u x v) + 2 u x (u x v), u = (x, y, z)
  const Vec3 u{x, y, z};
  auto cross = [](Vec3 a, Vec3 b) {
    return Vec3{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  };
  const Vec3 t = 2.0 * cross(u, v);
  return v + w * t + cross(u, t);
}

Quaternion Quaternion::yaw(double angle) {
  return {std::cos(angle / 2), 0.0, 0.0, std::sin(angle / 2)};
}

std::pair<Vec3, Vec3> ears_from_head_pose(const HeadPose& pose) {
  if (std::abs(pose.orientation.norm() - 1.0) > 1e-6)
    throw InvalidInput("head orientation must be a unit quaternion");
  if (!(pose.ear_offset > 0.0)) throw InvalidInput("ear offset must be positive");
  const Vec3 left = pose.position + pose.orientation.rotate({0.0, pose.ear_offset, 0.0});
  const Vec3 right = pose.position + pose.orientation.rotate({0.0, -pose.ear_offset, 0.0});
  return {left, right};
}

CoordinateFrame parse_coordinate_frame(const std::string& name) {
  if (name == "x-forward-y-left") return CoordinateFrame::kXForwardYLeft;
  if (name == "x-right-y-forward") return CoordinateFrame::kXRightYForward;
  throw InvalidInput("unknown coordinate frame '" + name +
                     "' (expected x-forward-y-left or x-right-y-forward)");
}

Vec3 to_frame(Vec3 native, CoordinateFrame frame) {
  switch (frame) {
    case CoordinateFrame::kXForwardYLeft: return native;
    case CoordinateFrame::kXRightYForward: return {-native.y, native.x, native.z};
  }
  return native;
}

}  // namespace zerobas
