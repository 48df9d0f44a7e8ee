#pragma once
/**
 * @file    partition_grid.hpp
 * @brief   Per-cell orientation partitions for sensor-over-cell placements.
 *
 * For every grid cell the sensor footprint center is put on the cell center
 * and the heading is sampled on a uniform lattice. Maximal runs of valid
 * samples become orientation ranges; each range is one partition of the cell.
 * Ranges are sampled, not exact: endpoints are the outermost valid samples,
 * so a range may under-report the true free arc by up to one step.
 */

#include <cstddef>
#include <optional>
#include <vector>

#include "alphasweep/geometry.hpp"

namespace alphasweep {

struct CellIndex {
  int x = 0;
  int y = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
  friend auto operator<=>(const CellIndex& a, const CellIndex& b) {
    // Row-major: y first, then x.
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

struct GridSpec {
  Point2 origin;  // lower-left corner of cell (0, 0)
  double cell_size = 0.0;
  int nx = 0;
  int ny = 0;

  void validate() const;
  std::size_t cell_count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  bool in_bounds(CellIndex c) const { return c.x >= 0 && c.y >= 0 && c.x < nx && c.y < ny; }
  std::size_t flat(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(c.x);
  }
  CellIndex unflat(std::size_t k) const {
    return {static_cast<int>(k % static_cast<std::size_t>(nx)), static_cast<int>(k / static_cast<std::size_t>(nx))};
  }
  Point2 cell_center(CellIndex c) const {
    return {origin.x + (c.x + 0.5) * cell_size, origin.y + (c.y + 0.5) * cell_size};
  }
  /// Cell containing a world point, if inside the grid.
  std::optional<CellIndex> cell_of(Point2 p) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/**
 * A closed arc of headings [phi1, phi2], walked counter-clockwise from phi1.
 * `samples` is the number of lattice headings it contains; a single-sample
 * range has phi1 == phi2.
 */
struct OrientationRange {
  double phi1 = 0.0;
  double phi2 = 0.0;
  int samples = 0;
  bool full = false;  // all headings valid

  bool wraps() const { return !full && phi2 < phi1; }
  /// Angular extent from phi1 to phi2 (2*pi for the full circle).
  double width() const;
  /// Inclusive containment with an absolute angular tolerance.
  bool contains(double theta, double tol = 1e-9) const;
  /// Middle lattice heading (the lower-middle for even sample counts).
  double middle_sample(double dtheta) const;
  /// All lattice headings of the range, in counter-clockwise order.
  std::vector<double> sample_headings(double dtheta) const;
};

struct Partition {
  CellIndex cell;
  int index = 0;
  OrientationRange range;
};

/// Number of heading samples per turn; throws ConfigError unless 0 < dtheta <= pi/8
/// and dtheta divides 2*pi within 1e-9.
int heading_sample_count(double dtheta);

std::vector<OrientationRange> compute_cell_ranges(Point2 cell_center, const RobotModel& robot,
                                                  const PointCloud& cloud, double dtheta);

class PartitionGrid {
 public:
  PartitionGrid(GridSpec spec, double dtheta, std::vector<std::vector<OrientationRange>> cells);

  const GridSpec& spec() const { return spec_; }
  double angular_resolution() const { return dtheta_; }
  const std::vector<OrientationRange>& ranges(CellIndex c) const { return cells_[spec_.flat(c)]; }
  bool coverable(CellIndex c) const { return !ranges(c).empty(); }

  /// Partitions flattened in row-major cell order, then by range index.
  /// The position in this list is the partition's node id.
  const std::vector<Partition>& partitions() const { return partitions_; }
  /// First node id of a cell (ids of a cell are contiguous).
  std::size_t first_node(CellIndex c) const { return first_node_[spec_.flat(c)]; }

  std::size_t coverable_count() const;
  std::vector<CellIndex> uncoverable_cells() const;

 private:
  GridSpec spec_;
  double dtheta_;
  std::vector<std::vector<OrientationRange>> cells_;
  std::vector<Partition> partitions_;
  std::vector<std::size_t> first_node_;
};

PartitionGrid build_partition_grid(const GridSpec& spec, const RobotModel& robot,
                                   const PointCloud& cloud, double dtheta);

}  // namespace alphasweep
