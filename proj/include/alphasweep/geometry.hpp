#pragma once
/**
 * @file    geometry.hpp
 * @brief   Point-cloud obstacles, the cylinder decomposition of the robot,
 *          and pose-validity queries.
 *
 * Conventions:
 * - World frame: x east, y north, z up, meters.
 * - Robot base frame: origin at the base link, +X forward. Cylinders are
 *   world-vertical; their horizontal offsets are given in the base frame and
 *   their z extent in world coordinates.
 * - A point on a cylinder boundary counts as a collision.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace alphasweep {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
double normalize_angle(double theta);

/// Signed shortest rotation from `from` to `to`, in (-pi, pi].
double angle_difference(double from, double to);

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Bounds3 {
  Point3 min;
  Point3 max;

  bool contains(const Point3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
  }
};

/**
 * Immutable obstacle cloud.
 *
 * Construction builds the bounds and a uniform xy bucket grid. The bucket grid
 * only narrows which points get tested; every candidate still goes through
 * the exact point-in-cylinder predicate, so query results are identical to a
 * scan over all points.
 */
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> points, double bucket_size = 0.1);

  std::span<const Point3> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::optional<Bounds3>& bounds() const { return bounds_; }

  /// Returns a new cloud holding the points of both clouds (this one first).
  PointCloud merged(const PointCloud& other) const;

  /// Visits candidate points whose xy lies within the square [cx-r, cx+r] x [cy-r, cy+r]
  /// (conservatively enlarged). `visit` returns true to stop early; the function
  /// then returns true.
  template <typename Visit>
  bool any_near(double cx, double cy, double r, Visit&& visit) const;

 private:
  std::vector<Point3> points_;
  std::optional<Bounds3> bounds_;
  double bucket_size_ = 0.1;
  long buckets_x_ = 0;
  long buckets_y_ = 0;
  std::vector<std::size_t> bucket_start_;  // CSR offsets, size buckets+1
  std::vector<Point3> bucketed_;           // points_ reordered by bucket
};

enum class CylinderTag { kBody, kSensor };

struct CollisionCylinder {
  double offset_x = 0.0;
  double offset_y = 0.0;
  double radius = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  CylinderTag tag = CylinderTag::kBody;
};

/// Detector footprint rectangle, centered on the sensor point and aligned with the heading.
struct SensorFootprint {
  double length_along_travel = 0.0;  // m
  double width = 0.0;                // m
};

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // [0, 2*pi)

  static Pose2D make(double x, double y, double theta) { return {x, y, normalize_angle(theta)}; }
};

/// Cylinder decomposition of the robot plus the off-center sensor mount.
class RobotModel {
 public:
  RobotModel(std::vector<CollisionCylinder> cylinders, Point2 sensor_offset,
             SensorFootprint footprint, double max_linear_speed, double max_angular_speed);

  std::span<const CollisionCylinder> cylinders() const { return cylinders_; }
  std::vector<CollisionCylinder> body_cylinders() const;
  std::vector<CollisionCylinder> sensor_cylinders() const;
  Point2 sensor_offset() const { return sensor_offset_; }
  const SensorFootprint& footprint() const { return footprint_; }
  double max_linear_speed() const { return max_linear_speed_; }
  double max_angular_speed() const { return max_angular_speed_; }

  /// Largest horizontal distance from the sensor center to any cylinder edge.
  double reach_from_sensor() const;

  /// Demonstration Magni-like model: 5 body cylinders, 2 low sensor cylinders,
  /// detector 0.30 m x 0.30 m centered 0.45 m ahead of the base link.
  static RobotModel magni_default();

 private:
  std::vector<CollisionCylinder> cylinders_;
  Point2 sensor_offset_;
  SensorFootprint footprint_;
  double max_linear_speed_;
  double max_angular_speed_;
};

/// World-frame xy of a cylinder axis when the robot base is at `base`.
Point2 cylinder_axis(const CollisionCylinder& cyl, const Pose2D& base);

bool point_in_cylinder(const Point3& p, const CollisionCylinder& cyl, const Pose2D& base);

/// True iff no cloud point lies inside any robot cylinder at `base`.
bool pose_valid(const Pose2D& base, const RobotModel& robot, const PointCloud& cloud);

/// Base pose that puts the sensor footprint center at `sensor_center` with heading `theta`.
Pose2D sensor_pose_to_base_pose(Point2 sensor_center, double theta, const RobotModel& robot);

/// Forward transform: sensor pose of a robot whose base is at `base`.
Pose2D base_pose_to_sensor_pose(const Pose2D& base, const RobotModel& robot);

/// Footprint rectangle corners (counter-clockwise) for a sensor pose.
std::array<Point2, 4> footprint_polygon(const Pose2D& sensor_pose, const SensorFootprint& fp);

// ---------------------------------------------------------------------------

template <typename Visit>
bool PointCloud::any_near(double cx, double cy, double r, Visit&& visit) const {
  if (points_.empty()) return false;
  const auto& b = *bounds_;
  // One extra bucket of margin on each side absorbs rounding at the square's edge.
  long ix0 = static_cast<long>(std::floor((cx - r - b.min.x) / bucket_size_)) - 1;
  long ix1 = static_cast<long>(std::floor((cx + r - b.min.x) / bucket_size_)) + 1;
  long iy0 = static_cast<long>(std::floor((cy - r - b.min.y) / bucket_size_)) - 1;
  long iy1 = static_cast<long>(std::floor((cy + r - b.min.y) / bucket_size_)) + 1;
  if (ix1 < 0 || iy1 < 0 || ix0 >= buckets_x_ || iy0 >= buckets_y_) return false;
  ix0 = std::max(ix0, 0L);
  iy0 = std::max(iy0, 0L);
  ix1 = std::min(ix1, buckets_x_ - 1);
  iy1 = std::min(iy1, buckets_y_ - 1);
  for (long iy = iy0; iy <= iy1; ++iy) {
    const std::size_t row = static_cast<std::size_t>(iy * buckets_x_);
    const std::size_t first = bucket_start_[row + static_cast<std::size_t>(ix0)];
    const std::size_t last = bucket_start_[row + static_cast<std::size_t>(ix1) + 1];
    for (std::size_t k = first; k < last; ++k) {
      if (visit(bucketed_[k])) return true;
    }
  }
  return false;
}

}  // namespace alphasweep
