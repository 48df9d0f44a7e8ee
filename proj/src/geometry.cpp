#include "alphasweep/geometry.hpp"

#include <cmath>
#include <limits>

#include "alphasweep/errors.hpp"

namespace alphasweep {

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod of a tiny negative value can round back up to exactly 2*pi.
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angle_difference(double from, double to) {
  double d = normalize_angle(to - from);
  if (d > std::numbers::pi) d -= kTwoPi;
  return d;
}

PointCloud::PointCloud(std::vector<Point3> points, double bucket_size)
    : points_(std::move(points)), bucket_size_(bucket_size) {
  if (!(bucket_size_ > 0.0)) throw ConfigError("point cloud bucket size must be positive");
  if (points_.empty()) return;

  Bounds3 b{points_.front(), points_.front()};
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw ConfigError("point cloud contains a non-finite coordinate");
    }
    b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y), std::min(b.min.z, p.z)};
    b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y), std::max(b.max.z, p.z)};
  }
  bounds_ = b;

  buckets_x_ = static_cast<long>(std::floor((b.max.x - b.min.x) / bucket_size_)) + 1;
  buckets_y_ = static_cast<long>(std::floor((b.max.y - b.min.y) / bucket_size_)) + 1;
  const auto n_buckets = static_cast<std::size_t>(buckets_x_ * buckets_y_);

  auto bucket_of = [&](const Point3& p) {
    long ix = static_cast<long>(std::floor((p.x - b.min.x) / bucket_size_));
    long iy = static_cast<long>(std::floor((p.y - b.min.y) / bucket_size_));
    ix = std::clamp(ix, 0L, buckets_x_ - 1);
    iy = std::clamp(iy, 0L, buckets_y_ - 1);
    return static_cast<std::size_t>(iy * buckets_x_ + ix);
  };

  bucket_start_.assign(n_buckets + 1, 0);
  for (const auto& p : points_) ++bucket_start_[bucket_of(p) + 1];
  for (std::size_t i = 0; i < n_buckets; ++i) bucket_start_[i + 1] += bucket_start_[i];
  bucketed_.resize(points_.size());
  std::vector<std::size_t> cursor(bucket_start_.begin(), bucket_start_.end() - 1);
  for (const auto& p : points_) bucketed_[cursor[bucket_of(p)]++] = p;
}

PointCloud PointCloud::merged(const PointCloud& other) const {
  std::vector<Point3> all(points_.begin(), points_.end());
  all.insert(all.end(), other.points_.begin(), other.points_.end());
  return PointCloud(std::move(all), bucket_size_);
}

RobotModel::RobotModel(std::vector<CollisionCylinder> cylinders, Point2 sensor_offset,
                       SensorFootprint footprint, double max_linear_speed,
                       double max_angular_speed)
    : cylinders_(std::move(cylinders)),
      sensor_offset_(sensor_offset),
      footprint_(footprint),
      max_linear_speed_(max_linear_speed),
      max_angular_speed_(max_angular_speed) {
  bool has_body = false;
  bool has_sensor = false;
  for (const auto& c : cylinders_) {
    if (!(c.radius > 0.0)) throw ConfigError("cylinder radius must be positive");
    if (!(c.z_min < c.z_max)) throw ConfigError("cylinder z_min must be below z_max");
    has_body |= c.tag == CylinderTag::kBody;
    has_sensor |= c.tag == CylinderTag::kSensor;
  }
  if (!has_body || !has_sensor) {
    throw ConfigError("robot model needs at least one body and one sensor cylinder");
  }
  if (!(footprint_.length_along_travel > 0.0) || !(footprint_.width > 0.0)) {
    throw ConfigError("sensor footprint dimensions must be positive");
  }
  if (!(max_linear_speed_ > 0.0) || !(max_angular_speed_ > 0.0)) {
    throw ConfigError("robot speed limits must be positive");
  }

  // The cylinders must cover the footprint rectangle; checked on an 11x11 lattice.
  constexpr int kLattice = 10;
  for (int i = 0; i <= kLattice; ++i) {
    for (int j = 0; j <= kLattice; ++j) {
      const double px = sensor_offset_.x + footprint_.length_along_travel * (i / double(kLattice) - 0.5);
      const double py = sensor_offset_.y + footprint_.width * (j / double(kLattice) - 0.5);
      bool covered = false;
      for (const auto& c : cylinders_) {
        const double dx = px - c.offset_x;
        const double dy = py - c.offset_y;
        covered |= dx * dx + dy * dy <= c.radius * c.radius * (1.0 + 1e-9);
      }
      if (!covered) throw ConfigError("cylinders do not cover the sensor footprint");
    }
  }
}

std::vector<CollisionCylinder> RobotModel::body_cylinders() const {
  std::vector<CollisionCylinder> out;
  for (const auto& c : cylinders_)
    if (c.tag == CylinderTag::kBody) out.push_back(c);
  return out;
}

std::vector<CollisionCylinder> RobotModel::sensor_cylinders() const {
  std::vector<CollisionCylinder> out;
  for (const auto& c : cylinders_)
    if (c.tag == CylinderTag::kSensor) out.push_back(c);
  return out;
}

double RobotModel::reach_from_sensor() const {
  double reach = 0.0;
  for (const auto& c : cylinders_) {
    reach = std::max(reach, std::hypot(c.offset_x - sensor_offset_.x, c.offset_y - sensor_offset_.y) + c.radius);
  }
  return reach;
}

RobotModel RobotModel::magni_default() {
  using T = CylinderTag;
  std::vector<CollisionCylinder> cyl = {
      {0.0, 0.0, 0.20, 0.02, 1.10, T::kBody},     // mast and electronics
      {0.14, 0.14, 0.12, 0.02, 0.40, T::kBody},   // chassis corners
      {0.14, -0.14, 0.12, 0.02, 0.40, T::kBody},
      {-0.14, 0.14, 0.12, 0.02, 0.40, T::kBody},
      {-0.14, -0.14, 0.12, 0.02, 0.40, T::kBody},
      {0.45, 0.075, 0.17, 0.03, 0.30, T::kSensor},  // detector housing
      {0.45, -0.075, 0.17, 0.03, 0.30, T::kSensor},
  };
  return RobotModel(std::move(cyl), {0.45, 0.0}, {0.30, 0.30}, 0.5, 1.0);
}

Point2 cylinder_axis(const CollisionCylinder& cyl, const Pose2D& base) {
  const double c = std::cos(base.theta);
  const double s = std::sin(base.theta);
  return {base.x + c * cyl.offset_x - s * cyl.offset_y, base.y + s * cyl.offset_x + c * cyl.offset_y};
}

namespace {

bool inside(const Point3& p, const CollisionCylinder& cyl, Point2 axis) {
  if (p.z < cyl.z_min || p.z > cyl.z_max) return false;
  const double dx = p.x - axis.x;
  const double dy = p.y - axis.y;
  return dx * dx + dy * dy <= cyl.radius * cyl.radius;
}

}  // namespace

bool point_in_cylinder(const Point3& p, const CollisionCylinder& cyl, const Pose2D& base) {
  return inside(p, cyl, cylinder_axis(cyl, base));
}

bool pose_valid(const Pose2D& base, const RobotModel& robot, const PointCloud& cloud) {
  if (cloud.empty()) return true;
  const auto& b = *cloud.bounds();
  for (const auto& cyl : robot.cylinders()) {
    if (cyl.z_max < b.min.z || cyl.z_min > b.max.z) continue;
    const Point2 axis = cylinder_axis(cyl, base);
    const bool hit = cloud.any_near(axis.x, axis.y, cyl.radius,
                                    [&](const Point3& p) { return inside(p, cyl, axis); });
    if (hit) return false;
  }
  return true;
}

Pose2D sensor_pose_to_base_pose(Point2 sensor_center, double theta, const RobotModel& robot) {
  const double t = normalize_angle(theta);
  const double c = std::cos(t);
  const double s = std::sin(t);
  const Point2 o = robot.sensor_offset();
  return {sensor_center.x - (c * o.x - s * o.y), sensor_center.y - (s * o.x + c * o.y), t};
}

Pose2D base_pose_to_sensor_pose(const Pose2D& base, const RobotModel& robot) {
  const double c = std::cos(base.theta);
  const double s = std::sin(base.theta);
  const Point2 o = robot.sensor_offset();
  return {base.x + c * o.x - s * o.y, base.y + s * o.x + c * o.y, base.theta};
}

std::array<Point2, 4> footprint_polygon(const Pose2D& sensor_pose, const SensorFootprint& fp) {
  const double c = std::cos(sensor_pose.theta);
  const double s = std::sin(sensor_pose.theta);
  const double hl = 0.5 * fp.length_along_travel;
  const double hw = 0.5 * fp.width;
  auto at = [&](double lx, double ly) -> Point2 {
    return {sensor_pose.x + c * lx - s * ly, sensor_pose.y + s * lx + c * ly};
  };
  return {at(-hl, -hw), at(hl, -hw), at(hl, hw), at(-hl, hw)};
}

}  // namespace alphasweep
