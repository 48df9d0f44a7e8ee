#pragma once
/**
 * @file    scene.hpp
 * @brief   Declarative test scenes rasterised to obstacle point clouds.
 *
 * Scene file, one directive per line (metres, `#` comments):
 *   bounds  x_min y_min x_max y_max
 *   spacing s
 *   box     x y z size_x size_y size_z           (min corner)
 *   pillar  x y radius height                     (centre of base)
 *   table   x y size_x size_y height thickness leg   (min corner of top)
 *
 * Surfaces are sampled on a lattice whose pitch is the requested spacing
 * rounded so that edges land exactly on the primitive's faces.
 */

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "alphasweep/geometry.hpp"

namespace alphasweep {

struct BoxPrimitive {
  Point3 min;
  Point3 size;
};

struct PillarPrimitive {
  Point2 center;
  double radius = 0.0;
  double height = 0.0;
};

/// Table top is a slab [height - thickness, height]; four square legs of side `leg` sit in the corners.
struct TablePrimitive {
  Point2 min;
  Point2 size;
  double height = 0.0;
  double thickness = 0.0;
  double leg = 0.0;
};

using Primitive = std::variant<BoxPrimitive, PillarPrimitive, TablePrimitive>;

struct SceneSpec {
  Point2 bounds_min{0.0, 0.0};
  Point2 bounds_max{0.0, 0.0};
  double spacing = 0.02;
  std::vector<Primitive> primitives;
  std::vector<int> source_lines;  // per primitive, 0 when built in code
};

SceneSpec parse_scene(std::istream& in, const std::string& source);

/// Number of lattice points on the surface of a box, as produced by rasterize_box.
std::size_t box_raster_count(const BoxPrimitive& box, double spacing);

std::vector<Point3> rasterize_box(const BoxPrimitive& box, double spacing);
std::vector<Point3> rasterize_pillar(const PillarPrimitive& pillar, double spacing);
std::vector<Point3> rasterize_table(const TablePrimitive& table, double spacing);

/// Rasterises every primitive in order; throws ConfigError naming the first primitive
/// whose horizontal extent leaves the bounds.
std::vector<Point3> rasterize_scene(const SceneSpec& scene);

}  // namespace alphasweep
