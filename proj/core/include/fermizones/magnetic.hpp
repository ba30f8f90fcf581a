// Magnetic field directions and rationality detection.
//
// A direction B is "rational" when the closed 1-form sum B^i dp_i has
// commensurate periods over H_1(T^3), i.e. basis^T B is parallel to an
// integer vector. Rational directions are traced like any other but carry a
// tag so that genericity-dependent claims can exclude them.
#pragma once

#include <optional>

#include "fermizones/lattice.hpp"

namespace fermizones {

struct MagneticField {
  Vec3 direction{0, 0, 1};  // unit, Cartesian frame
  std::optional<Vec3i> rational_tag;
};

// Smallest-height primitive integer vector within angular `tol` of
// basis^T B, searching heights <= q_max; nullopt when none exists.
std::optional<Vec3i> detect_rational(const Vec3& direction, const ReciprocalLattice& lattice,
                                     int q_max = 64, double tol = 1e-9);

MagneticField make_field(const Vec3& b, const ReciprocalLattice& lattice = {}, int q_max = 64,
                         double tol = 1e-9);

// Deterministic orthonormal frame (u1, u2) of the plane orthogonal to B.
struct PlaneFrame {
  Vec3 b_hat, u1, u2;
  Vec2 project(const Vec3& v) const { return {dot(v, u1), dot(v, u2)}; }
  Vec3 lift(const Vec2& w) const { return u1 * w.x + u2 * w.y; }
};
PlaneFrame plane_frame(const Vec3& b);

// v rotated by `angle` radians about unit `axis`.
Vec3 rotate_about(const Vec3& v, const Vec3& axis, double angle);

}  // namespace fermizones
