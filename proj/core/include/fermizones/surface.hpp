// Level-set triangulation of epsilon(p) = eF on the 3-torus.
//
// Each unit cell of an N^3 grid is split into the six Kuhn tetrahedra of the
// Freudenthal decomposition, which induces the same two triangles on every
// shared cube face, so the marching step has no ambiguous cases and the
// output is a closed combinatorial 2-manifold whenever the level avoids grid
// values. Vertices live on tetrahedron edges and are refined onto the level
// by bisection plus Newton steps.
//
// Periodicity bookkeeping: vertices are stored once per torus equivalence
// class; every triangle corner carries an integer offset so that
// vertex_position + offset is the corner's position in the covering space.
#pragma once

#include <cstdint>
#include <vector>

#include "fermizones/lattice.hpp"

namespace fermizones {

struct FermiTriangulation {
  double epsilon_f = 0.0;
  int resolution = 0;
  ReciprocalLattice lattice;

  std::vector<Vec3> vertices;          // lattice coordinates, fundamental domain
  std::vector<Vec3> vertex_gradients;  // lattice-frame gradient of epsilon

  struct Corner {
    std::int32_t v = -1;
    std::array<std::int8_t, 3> offset{0, 0, 0};
  };
  struct Triangle {
    Corner c[3];
    std::int32_t component = -1;
  };
  std::vector<Triangle> triangles;

  int component_count = 0;
  std::vector<std::int32_t> vertex_component;

  bool regular_warning = false;  // min sampled |grad eps| on the level < 1e-3
  double min_gradient_norm = 0.0;

  Vec3 corner_position(const Triangle& t, int i) const {
    const Corner& c = t.c[i];
    const Vec3& v = vertices[static_cast<std::size_t>(c.v)];
    return {v.x + c.offset[0], v.y + c.offset[1], v.z + c.offset[2]};
  }

  Vec3 centroid_lattice(const Triangle& t) const {
    return (corner_position(t, 0) + corner_position(t, 1) + corner_position(t, 2)) / 3.0;
  }

  double triangle_area_cartesian(const Triangle& t) const {
    Vec3 a = lattice.to_cartesian(corner_position(t, 0));
    Vec3 b = lattice.to_cartesian(corner_position(t, 1));
    Vec3 c = lattice.to_cartesian(corner_position(t, 2));
    return 0.5 * norm(cross(b - a, c - a));
  }

  double total_area_cartesian() const;

  // V - E + F per component (vertices and edges counted once per torus class).
  std::vector<int> euler_characteristics() const;

  // True iff every decorated edge is shared by exactly two triangles.
  bool is_closed_manifold() const;
};

// Marching triangulation of {epsilon = eF}. Throws NumericalError
// ("DegenerateLevel") when eF is outside the sampled range of epsilon.
// Near-critical levels (min |grad| < 1e-3 at the produced vertices) set
// regular_warning and proceed.
FermiTriangulation triangulate_level(const DispersionRelation& d, double epsilon_f,
                                     int resolution);

// Minimum of |grad_cartesian epsilon| sampled over the level set via grid-edge
// crossings at the given density. Throws NumericalError("DegenerateLevel") if
// the level does not intersect the sampled grid at all.
double check_regular(const DispersionRelation& d, double epsilon_f, int sample_density = 32);

// Rank (0..3) of the image of pi_1(component) -> pi_1(T^3) = Z^3 for each
// component, from spanning-tree cycle offsets of the decorated vertex graph.
std::vector<int> pi1_image_rank(const FermiTriangulation& t);

// `count` points on the surface, area-weighted systematic sampling over the
// triangle list (deterministic given seed). Lattice coordinates.
std::vector<Vec3> stratified_surface_points(const FermiTriangulation& t, int count,
                                            std::uint64_t seed);

}  // namespace fermizones
