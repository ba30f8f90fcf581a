// Marching-squares contouring of the dispersion restricted to a plane
// orthogonal to B. Shares no code path with the orbit tracer; used as an
// independent oracle for tracer verification.
#pragma once

#include <vector>

#include "fermizones/lattice.hpp"
#include "fermizones/magnetic.hpp"

namespace fermizones {

struct PlanarCurve {
  std::vector<Vec2> points;  // in-plane coordinates around origin c * B
  bool closed = false;
};

// Level curves of epsilon restricted to {B . q = c} inside the window
// [-half_size, half_size]^2 at grid step h. Throws
// NumericalError("DegenerateLevel") when the restricted function never
// crosses the level inside the window.
std::vector<PlanarCurve> contour_plane(const DispersionRelation& d, double level,
                                       const Vec3& b_direction, double plane_offset,
                                       double half_size, double h);

// Lift of an in-plane point to Cartesian covering coordinates.
Vec3 contour_lift(const Vec3& b_direction, double plane_offset, const Vec2& xy);

}  // namespace fermizones
