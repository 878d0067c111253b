// Listener-frame geometry.
//
// Axis convention: x forward, y left, z up. Azimuth is measured
// counter-clockwise from +x in the horizontal plane, elevation upward from
// that plane. Both are radians.
#pragma once

#include <string>
#include <utility>

#include "zerobas/core.hpp"

namespace zerobas {

/// Default half inter-ear distance in meters (KEMAR-like head).
inline constexpr double kDefaultEarOffset = 0.09;

class SphericalPosition {
 public:
  /// Throws InvalidInput for negative distance or |elevation| > pi/2.
  SphericalPosition(double azimuth, double elevation, double distance);

  double azimuth() const { return azimuth_; }
  double elevation() const { return elevation_; }
  double distance() const { return distance_; }

 private:
  double azimuth_;
  double elevation_;
  double distance_;
};

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  Vec3 rotate(Vec3 v) const;
  /// Rotation by `angle` radians about +z.
  static Quaternion yaw(double angle);
};

struct HeadPose {
  Vec3 position;
  Quaternion orientation;
  double ear_offset = kDefaultEarOffset;
};

Vec3 spherical_to_cartesian(const SphericalPosition& s);

/// Left ear at position + R(0, +offset, 0), right ear at position + R(0, -offset, 0).
/// Throws InvalidInput when |q| deviates from 1 by more than 1e-6 or offset <= 0.
std::pair<Vec3, Vec3> ears_from_head_pose(const HeadPose& pose);

/// Output frame for dataset tooling.
enum class CoordinateFrame {
  kXForwardYLeft,   // native convention above
  kXRightYForward,  // x right, y forward, z up
};

CoordinateFrame parse_coordinate_frame(const std::string& name);
/// Re-expresses a native-frame vector in `frame`.
Vec3 to_frame(Vec3 native, CoordinateFrame frame);

}  // namespace zerobas
