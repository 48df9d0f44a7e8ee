#include "alphasweep/partition_grid.hpp"

#include <cmath>
#include <string>

#include "alphasweep/errors.hpp"

namespace alphasweep {

void GridSpec::validate() const {
  if (!(cell_size > 0.0)) throw ConfigError("grid cell_size must be positive");
  if (nx < 1 || ny < 1) throw ConfigError("grid nx and ny must be at least 1");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) throw ConfigError("grid origin must be finite");
}

std::optional<CellIndex> GridSpec::cell_of(Point2 p) const {
  const double fx = std::floor((p.x - origin.x) / cell_size);
  const double fy = std::floor((p.y - origin.y) / cell_size);
  if (fx < 0.0 || fy < 0.0 || fx >= nx || fy >= ny) return std::nullopt;
  return CellIndex{static_cast<int>(fx), static_cast<int>(fy)};
}

double OrientationRange::width() const {
  if (full) return kTwoPi;
  return normalize_angle(phi2 - phi1);
}

bool OrientationRange::contains(double theta, double tol) const {
  if (full) return true;
  double d = normalize_angle(theta - phi1);
  if (d > kTwoPi - tol) d = 0.0;
  return d <= width() + tol;
}

namespace {

int lattice_index(double theta, double dtheta, int n) {
  return static_cast<int>(std::lround(normalize_angle(theta) / dtheta)) % n;
}

}  // namespace

double OrientationRange::middle_sample(double dtheta) const {
  const int n = heading_sample_count(dtheta);
  const int start = lattice_index(phi1, dtheta, n);
  return ((start + (samples - 1) / 2) % n) * dtheta;
}

std::vector<double> OrientationRange::sample_headings(double dtheta) const {
  const int n = heading_sample_count(dtheta);
  const int start = full ? 0 : lattice_index(phi1, dtheta, n);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) out.push_back(((start + k) % n) * dtheta);
  return out;
}

int heading_sample_count(double dtheta) {
  if (!(dtheta > 0.0) || dtheta > std::numbers::pi / 8.0 + 1e-12) {
    throw ConfigError("angular resolution must lie in (0, 22.5 deg]");
  }
  const double ratio = kTwoPi / dtheta;
  const long n = std::lround(ratio);
  if (std::abs(static_cast<double>(n) * dtheta - kTwoPi) > 1e-9) {
    throw ConfigError("angular resolution must divide a full turn evenly");
  }
  return static_cast<int>(n);
}

std::vector<OrientationRange> compute_cell_ranges(Point2 cell_center, const RobotModel& robot,
                                                  const PointCloud& cloud, double dtheta) {
  const int n = heading_sample_count(dtheta);
  std::vector<char> valid(static_cast<std::size_t>(n));
  int valid_count = 0;
  for (int k = 0; k < n; ++k) {
    const Pose2D base = sensor_pose_to_base_pose(cell_center, k * dtheta, robot);
    valid[static_cast<std::size_t>(k)] = pose_valid(base, robot, cloud);
    valid_count += valid[static_cast<std::size_t>(k)];
  }
  if (valid_count == 0) return {};
  if (valid_count == n) return {OrientationRange{0.0, (n - 1) * dtheta, n, true}};

  auto at = [&](int k) { return valid[static_cast<std::size_t>(((k % n) + n) % n)] != 0; };

  // Start scanning at the beginning of some run so that a run crossing the
  // 0 / 2*pi seam is collected as one piece.
  int first = 0;
  while (!(at(first) && !at(first - 1))) ++first;

  std::vector<OrientationRange> ranges;
  int k = first;
  while (k < first + n) {
    if (!at(k)) {
      ++k;
      continue;
    }
    const int run_start = k;
    while (k < first + n && at(k)) ++k;
    const int len = k - run_start;
    ranges.push_back({(run_start % n) * dtheta, ((run_start + len - 1) % n) * dtheta, len, false});
  }
  std::sort(ranges.begin(), ranges.end(),
            [](const OrientationRange& a, const OrientationRange& b) { return a.phi1 < b.phi1; });
  return ranges;
}

PartitionGrid::PartitionGrid(GridSpec spec, double dtheta, std::vector<std::vector<OrientationRange>> cells)
    : spec_(spec), dtheta_(dtheta), cells_(std::move(cells)) {
  spec_.validate();
  if (cells_.size() != spec_.cell_count()) throw ConfigError("partition grid cell count mismatch");
  first_node_.reserve(cells_.size() + 1);
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    first_node_.push_back(partitions_.size());
    const CellIndex c = spec_.unflat(k);
    for (std::size_t i = 0; i < cells_[k].size(); ++i) {
      partitions_.push_back({c, static_cast<int>(i), cells_[k][i]});
    }
  }
  first_node_.push_back(partitions_.size());
}

std::size_t PartitionGrid::coverable_count() const {
  std::size_t n = 0;
  for (const auto& c : cells_) n += !c.empty();
  return n;
}

std::vector<CellIndex> PartitionGrid::uncoverable_cells() const {
  std::vector<CellIndex> out;
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (cells_[k].empty()) out.push_back(spec_.unflat(k));
  return out;
}

PartitionGrid build_partition_grid(const GridSpec& spec, const RobotModel& robot, const PointCloud& cloud,
                                   double dtheta) {
  spec.validate();
  heading_sample_count(dtheta);
  std::vector<std::vector<OrientationRange>> cells(spec.cell_count());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    cells[k] = compute_cell_ranges(spec.cell_center(spec.unflat(k)), robot, cloud, dtheta);
  }
  return PartitionGrid(spec, dtheta, std::move(cells));
}

}  // namespace alphasweep
