#include "alphasweep/scene.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "alphasweep/errors.hpp"
#include "alphasweep/io.hpp"

namespace alphasweep {

namespace {

int divisions(double length, double spacing) {
  return std::max(1, static_cast<int>(std::lround(length / spacing)));
}

struct Extent {
  double x0, y0, x1, y1;
};

Extent extent_of(const Primitive& p) {
  return std::visit(
      [](const auto& v) -> Extent {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BoxPrimitive>) {
          return {v.min.x, v.min.y, v.min.x + v.size.x, v.min.y + v.size.y};
        } else if constexpr (std::is_same_v<T, PillarPrimitive>) {
          return {v.center.x - v.radius, v.center.y - v.radius, v.center.x + v.radius, v.center.y + v.radius};
        } else {
          return {v.min.x, v.min.y, v.min.x + v.size.x, v.min.y + v.size.y};
        }
      },
      p);
}

const char* kind_of(const Primitive& p) {
  switch (p.index()) {
    case 0:
      return "box";
    case 1:
      return "pillar";
    default:
      return "table";
  }
}

}  // namespace

SceneSpec parse_scene(std::istream& in, const std::string& source) {
  SceneSpec scene;
  bool have_bounds = false;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    auto nums = [&](std::size_t expected) {
      if (tok.size() != expected + 1) {
        throw ConfigError(fmt::format("{}:{}: '{}' takes {} numbers", source, n, tok[0], expected));
      }
      std::vector<double> v;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        auto x = parse_number(tok[k]);
        if (!x) throw ConfigError(fmt::format("{}:{}: bad number '{}'", source, n, tok[k]));
        v.push_back(*x);
      }
      return v;
    };
    auto positive = [&](std::initializer_list<double> vals) {
      for (double v : vals)
        if (!(v > 0.0)) throw ConfigError(fmt::format("{}:{}: '{}' sizes must be positive", source, n, tok[0]));
    };
    const std::string& key = tok[0];
    if (key == "bounds") {
      const auto v = nums(4);
      if (!(v[0] < v[2] && v[1] < v[3])) throw ConfigError(fmt::format("{}:{}: empty bounds", source, n));
      scene.bounds_min = {v[0], v[1]};
      scene.bounds_max = {v[2], v[3]};
      have_bounds = true;
    } else if (key == "spacing") {
      scene.spacing = nums(1)[0];
      positive({scene.spacing});
    } else if (key == "box") {
      const auto v = nums(6);
      positive({v[3], v[4], v[5]});
      scene.primitives.push_back(BoxPrimitive{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
      scene.source_lines.push_back(n);
    } else if (key == "pillar") {
      const auto v = nums(4);
      positive({v[2], v[3]});
      scene.primitives.push_back(PillarPrimitive{{v[0], v[1]}, v[2], v[3]});
      scene.source_lines.push_back(n);
    } else if (key == "table") {
      const auto v = nums(7);
      positive({v[2], v[3], v[4], v[5], v[6]});
      if (!(v[5] < v[4]) || !(2.0 * v[6] <= std::min(v[2], v[3]))) {
        throw ConfigError(fmt::format("{}:{}: table thickness/leg do not fit its size", source, n));
      }
      scene.primitives.push_back(TablePrimitive{{v[0], v[1]}, {v[2], v[3]}, v[4], v[5], v[6]});
      scene.source_lines.push_back(n);
    } else {
      throw ConfigError(fmt::format("{}:{}: unknown directive '{}'", source, n, key));
    }
  }
  if (!have_bounds) throw ConfigError(source + ": missing 'bounds'");
  return scene;
}

std::size_t box_raster_count(const BoxPrimitive& box, double spacing) {
  const auto nx = static_cast<std::size_t>(divisions(box.size.x, spacing));
  const auto ny = static_cast<std::size_t>(divisions(box.size.y, spacing));
  const auto nz = static_cast<std::size_t>(divisions(box.size.z, spacing));
  return (nx + 1) * (ny + 1) * (nz + 1) - (nx - 1) * (ny - 1) * (nz - 1);
}

std::vector<Point3> rasterize_box(const BoxPrimitive& box, double spacing) {
  const int nx = divisions(box.size.x, spacing);
  const int ny = divisions(box.size.y, spacing);
  const int nz = divisions(box.size.z, spacing);
  std::vector<Point3> out;
  out.reserve(box_raster_count(box, spacing));
  for (int k = 0; k <= nz; ++k) {
    const bool kface = k == 0 || k == nz;
    for (int j = 0; j <= ny; ++j) {
      const bool jface = j == 0 || j == ny;
      for (int i = 0; i <= nx; ++i) {
        const bool iface = i == 0 || i == nx;
        if (!(iface || jface || kface)) continue;
        out.push_back({box.min.x + box.size.x * i / nx, box.min.y + box.size.y * j / ny,
                       box.min.z + box.size.z * k / nz});
      }
    }
  }
  return out;
}

std::vector<Point3> rasterize_pillar(const PillarPrimitive& pillar, double spacing) {
  std::vector<Point3> out;
  const int around = std::max(8, static_cast<int>(std::ceil(kTwoPi * pillar.radius / spacing)));
  const int up = divisions(pillar.height, spacing);
  for (int k = 0; k <= up; ++k) {
    const double z = pillar.height * k / up;
    for (int a = 0; a < around; ++a) {
      const double t = kTwoPi * a / around;
      out.push_back({pillar.center.x + pillar.radius * std::cos(t), pillar.center.y + pillar.radius * std::sin(t), z});
    }
  }
  // Top cap: square lattice clipped to the disk.
  const int half = static_cast<int>(std::floor(pillar.radius / spacing));
  for (int j = -half; j <= half; ++j) {
    for (int i = -half; i <= half; ++i) {
      const double dx = i * spacing;
      const double dy = j * spacing;
      if (dx * dx + dy * dy < pillar.radius * pillar.radius) {
        out.push_back({pillar.center.x + dx, pillar.center.y + dy, pillar.height});
      }
    }
  }
  return out;
}

std::vector<Point3> rasterize_table(const TablePrimitive& t, double spacing) {
  const double under = t.height - t.thickness;
  std::vector<Point3> out =
      rasterize_box({{t.min.x, t.min.y, under}, {t.size.x, t.size.y, t.thickness}}, spacing);
  const double lx[] = {t.min.x, t.min.x + t.size.x - t.leg};
  const double ly[] = {t.min.y, t.min.y + t.size.y - t.leg};
  for (double y : ly) {
    for (double x : lx) {
      // Legs stop one lattice step below the top so no leg point duplicates the slab.
      const double leg_height = under - std::min(spacing, 0.5 * under);
      auto leg = rasterize_box({{x, y, 0.0}, {t.leg, t.leg, leg_height}}, spacing);
      out.insert(out.end(), leg.begin(), leg.end());
    }
  }
  return out;
}

std::vector<Point3> rasterize_scene(const SceneSpec& scene) {
  if (!(scene.spacing > 0.0)) throw ConfigError("scene spacing must be positive");
  std::vector<Point3> out;
  for (std::size_t k = 0; k < scene.primitives.size(); ++k) {
    const auto& p = scene.primitives[k];
    const Extent e = extent_of(p);
    if (e.x0 < scene.bounds_min.x || e.y0 < scene.bounds_min.y || e.x1 > scene.bounds_max.x ||
        e.y1 > scene.bounds_max.y) {
      const int line = k < scene.source_lines.size() ? scene.source_lines[k] : 0;
      throw ConfigError(fmt::format("{} #{}{} lies outside the scene bounds", kind_of(p), k + 1,
                                    line > 0 ? fmt::format(" (line {})", line) : std::string()));
    }
    std::vector<Point3> pts = std::visit(
        [&](const auto& v) -> std::vector<Point3> {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, BoxPrimitive>) return rasterize_box(v, scene.spacing);
          else if constexpr (std::is_same_v<T, PillarPrimitive>) return rasterize_pillar(v, scene.spacing);
          else return rasterize_table(v, scene.spacing);
        },
        p);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

}  // namespace alphasweep
