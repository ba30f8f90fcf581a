// Dispersion relations as finite trigonometric series on the 3-torus.
//
// A point p in "lattice coordinates" lives in R^3 with unit periods; its
// Cartesian quasimomentum is q = basis * p, where the columns of `basis` are
// the reciprocal basis vectors. All series are exactly 1-periodic in each
// lattice coordinate by construction.
#pragma once

#include <vector>

#include "fermizones/geometry.hpp"

namespace fermizones {

struct ReciprocalLattice {
  Mat3 basis = Mat3::identity();  // columns = reciprocal basis vectors
  Mat3 inv = Mat3::identity();
  Mat3 inv_t = Mat3::identity();  // transpose of inv; maps lattice gradients to Cartesian

  ReciprocalLattice() = default;
  explicit ReciprocalLattice(const Mat3& b);

  Vec3 to_cartesian(const Vec3& p) const { return basis.apply(p); }
  Vec3 to_lattice(const Vec3& q) const { return inv.apply(q); }
  // grad_q f = basis^{-T} grad_p f
  Vec3 gradient_to_cartesian(const Vec3& g_lat) const { return inv_t.apply(g_lat); }
  bool is_identity() const;
};

struct HarmonicTerm {
  Vec3i k{0, 0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
};

class DispersionRelation {
 public:
  DispersionRelation(std::vector<HarmonicTerm> terms, ReciprocalLattice lattice = {});

  // epsilon(p) = sum_t a_t cos(2 pi k_t . p + phi_t), p in lattice coordinates.
  // p is reduced mod 1 before the phase is formed, so evaluate(p + u) for
  // integer u is the same floating expression as evaluate(p).
  double evaluate(const Vec3& p) const;

  // Term-by-term analytic derivative, lattice frame.
  Vec3 gradient(const Vec3& p) const;

  // Fused value + lattice gradient (one trig pass); the tracer hot path.
  void value_and_gradient(const Vec3& p, double& value, Vec3& grad_lat) const;

  Vec3 gradient_cartesian(const Vec3& p) const {
    return lattice_.gradient_to_cartesian(gradient(p));
  }

  // Hessian in the lattice frame.
  Mat3 hessian(const Vec3& p) const;
  // basis^{-T} H basis^{-1}
  Mat3 hessian_cartesian(const Vec3& p) const;

  // Min/max of epsilon over an n^3 lattice-coordinate sample.
  std::pair<double, double> sample_range(int n = 24) const;

  const std::vector<HarmonicTerm>& terms() const { return terms_; }
  const ReciprocalLattice& lattice() const { return lattice_; }

 private:
  std::vector<HarmonicTerm> terms_;
  ReciprocalLattice lattice_;
};

// The cos p1 + cos p2 + cos p3 test surface (simple cubic lattice).
DispersionRelation make_simple_cubic_cos();
// Single-term cos(2 pi k . p) surface.
DispersionRelation make_single_cos(const Vec3i& k);

}  // namespace fermizones
