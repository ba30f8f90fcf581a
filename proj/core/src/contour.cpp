#include "fermizones/contour.hpp"

#include <cmath>
#include <cstdint>
#include <map>

#include "fermizones/errors.hpp"

namespace fermizones {

namespace {

// Edge id within the grid: (point index) * 2 + orientation (0 horizontal
// toward +x, 1 vertical toward +y).
std::uint64_t edge_id(int i, int j, int orient, int stride) {
  return (static_cast<std::uint64_t>(j) * stride + i) * 2 + orient;
}

}  // namespace

Vec3 contour_lift(const Vec3& b_direction, double plane_offset, const Vec2& xy) {
  PlaneFrame f = plane_frame(b_direction);
  return f.b_hat * plane_offset + f.u1 * xy.x + f.u2 * xy.y;
}

std::vector<PlanarCurve> contour_plane(const DispersionRelation& d, double level,
                                       const Vec3& b_direction, double plane_offset,
                                       double half_size, double h) {
  if (h <= 0 || half_size <= 0)
    throw ValidationError("orbit-tracer: contour window and step must be positive");
  PlaneFrame frame = plane_frame(b_direction);
  const ReciprocalLattice& lat = d.lattice();
  bool identity = lat.is_identity();

  int m = static_cast<int>(std::ceil(2 * half_size / h));
  int pts = m + 1;
  double step = 2 * half_size / m;

  auto plane_point = [&](double x, double y) {
    return frame.b_hat * plane_offset + frame.u1 * x + frame.u2 * y;
  };
  auto value_at = [&](double x, double y) {
    Vec3 q = plane_point(x, y);
    Vec3 p = identity ? q : lat.to_lattice(q);
    return d.evaluate(p) - level;
  };

  std::vector<double> g(static_cast<std::size_t>(pts) * pts);
  for (int j = 0; j < pts; ++j)
    for (int i = 0; i < pts; ++i)
      g[static_cast<std::size_t>(j) * pts + i] =
          value_at(-half_size + i * step, -half_size + j * step);

  auto val = [&](int i, int j) { return g[static_cast<std::size_t>(j) * pts + i]; };
  auto coord = [&](int i, int j) {
    return Vec2{-half_size + i * step, -half_size + j * step};
  };

  // Crossing point on an edge by linear interpolation; memoized per edge id.
  std::map<std::uint64_t, Vec2> crossings;
  auto crossing = [&](int i0, int j0, int orient) {
    std::uint64_t id = edge_id(i0, j0, orient, pts);
    auto it = crossings.find(id);
    if (it != crossings.end()) return std::make_pair(id, it->second);
    int i1 = i0 + (orient == 0 ? 1 : 0);
    int j1 = j0 + (orient == 1 ? 1 : 0);
    double f0 = val(i0, j0), f1 = val(i1, j1);
    double t = f0 / (f0 - f1);
    t = std::clamp(t, 0.0, 1.0);
    Vec2 a = coord(i0, j0), b = coord(i1, j1);
    Vec2 p = a + (b - a) * t;
    crossings.emplace(id, p);
    return std::make_pair(id, p);
  };

  // Segments between edge ids.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      double v0 = val(i, j), v1 = val(i + 1, j), v2 = val(i + 1, j + 1), v3 = val(i, j + 1);
      int code = (v0 >= 0 ? 1 : 0) | (v1 >= 0 ? 2 : 0) | (v2 >= 0 ? 4 : 0) | (v3 >= 0 ? 8 : 0);
      if (code == 0 || code == 15) continue;
      auto e_bottom = crossing(i, j, 0).first;
      auto e_right = crossing(i + 1, j, 1).first;
      auto e_top = crossing(i, j + 1, 0).first;
      auto e_left = crossing(i, j, 1).first;
      auto add = [&](std::uint64_t a, std::uint64_t b) { segments.push_back({a, b}); };
      switch (code) {
        case 1: case 14: add(e_left, e_bottom); break;
        case 2: case 13: add(e_bottom, e_right); break;
        case 3: case 12: add(e_left, e_right); break;
        case 4: case 11: add(e_right, e_top); break;
        case 6: case 9: add(e_bottom, e_top); break;
        case 7: case 8: add(e_left, e_top); break;
        case 5: {
          // Saddle: decide by the bilinear value at the cell center.
          double center = 0.25 * (v0 + v1 + v2 + v3);
          if ((center >= 0) == true) {
            add(e_bottom, e_right);
            add(e_left, e_top);
          } else {
            add(e_left, e_bottom);
            add(e_right, e_top);
          }
          break;
        }
        case 10: {
          double center = 0.25 * (v0 + v1 + v2 + v3);
          if (center >= 0) {
            add(e_left, e_bottom);
            add(e_right, e_top);
          } else {
            add(e_bottom, e_right);
            add(e_left, e_top);
          }
          break;
        }
        default: break;
      }
    }

  if (segments.empty())
    throw NumericalError("orbit-tracer: DegenerateLevel: no level crossings in contour window");

  // Chain segments through shared edge ids into polylines.
  std::map<std::uint64_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }

  std::vector<char> used(segments.size(), 0);
  std::vector<PlanarCurve> curves;

  auto walk = [&](std::uint64_t start_edge, std::size_t start_seg) {
    PlanarCurve curve;
    curve.points.push_back(crossings[start_edge]);
    std::uint64_t at = start_edge;
    std::size_t seg = start_seg;
    for (;;) {
      used[seg] = 1;
      std::uint64_t next = segments[seg].first == at ? segments[seg].second : segments[seg].first;
      curve.points.push_back(crossings[next]);
      at = next;
      const auto& inc = incident[at];
      std::size_t cont = segments.size();
      for (std::size_t cand : inc)
        if (!used[cand]) cont = cand;
      if (cont == segments.size()) break;
      seg = cont;
    }
    curve.closed = at == start_edge;
    return curve;
  };

  // Open chains first (edges of degree 1 are window-boundary terminations).
  for (const auto& [edge, inc] : incident) {
    if (inc.size() != 1) continue;
    if (used[inc[0]]) continue;
    curves.push_back(walk(edge, inc[0]));
  }
  // Remaining cycles.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    curves.push_back(walk(segments[s].first, s));
  }
  return curves;
}

}  // namespace fermizones
