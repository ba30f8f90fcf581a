#include "fermizones/lattice.hpp"

#include <cmath>

#include "fermizones/errors.hpp"

namespace fermizones {

ReciprocalLattice::ReciprocalLattice(const Mat3& b) : basis(b) {
  double d = basis.det();
  if (std::abs(d) <= 1e-12)
    throw ValidationError("lattice-surface: reciprocal basis is singular (|det| <= 1e-12)");
  inv = basis.inverse();
  inv_t = inv.transposed();
}

bool ReciprocalLattice::is_identity() const {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (basis(r, c) != (r == c ? 1.0 : 0.0)) return false;
  return true;
}

DispersionRelation::DispersionRelation(std::vector<HarmonicTerm> terms, ReciprocalLattice lattice)
    : terms_(std::move(terms)), lattice_(lattice) {
  bool has_wave = false;
  for (const auto& t : terms_)
    if (t.k[0] != 0 || t.k[1] != 0 || t.k[2] != 0) has_wave = true;
  if (terms_.empty() || !has_wave)
    throw ValidationError("lattice-surface: dispersion needs at least one term with k != 0");
}

double DispersionRelation::evaluate(const Vec3& p) const {
  Vec3 u{wrap_unit(p.x), wrap_unit(p.y), wrap_unit(p.z)};
  double v = 0.0;
  for (const auto& t : terms_) {
    double phase = kTwoPi * (t.k[0] * u.x + t.k[1] * u.y + t.k[2] * u.z) + t.phase;
    v += t.amplitude * std::cos(phase);
  }
  return v;
}

Vec3 DispersionRelation::gradient(const Vec3& p) const {
  Vec3 u{wrap_unit(p.x), wrap_unit(p.y), wrap_unit(p.z)};
  Vec3 g{0, 0, 0};
  for (const auto& t : terms_) {
    double phase = kTwoPi * (t.k[0] * u.x + t.k[1] * u.y + t.k[2] * u.z) + t.phase;
    double s = -kTwoPi * t.amplitude * std::sin(phase);
    g.x += s * t.k[0];
    g.y += s * t.k[1];
    g.z += s * t.k[2];
  }
  return g;
}

void DispersionRelation::value_and_gradient(const Vec3& p, double& value, Vec3& grad_lat) const {
  Vec3 u{wrap_unit(p.x), wrap_unit(p.y), wrap_unit(p.z)};
  double v = 0.0;
  Vec3 g{0, 0, 0};
  for (const auto& t : terms_) {
    double phase = kTwoPi * (t.k[0] * u.x + t.k[1] * u.y + t.k[2] * u.z) + t.phase;
    double c = std::cos(phase), s = std::sin(phase);
    v += t.amplitude * c;
    double f = -kTwoPi * t.amplitude * s;
    g.x += f * t.k[0];
    g.y += f * t.k[1];
    g.z += f * t.k[2];
  }
  value = v;
  grad_lat = g;
}

Mat3 DispersionRelation::hessian(const Vec3& p) const {
  Vec3 u{wrap_unit(p.x), wrap_unit(p.y), wrap_unit(p.z)};
  Mat3 h;
  h.m.fill(0.0);
  for (const auto& t : terms_) {
    double phase = kTwoPi * (t.k[0] * u.x + t.k[1] * u.y + t.k[2] * u.z) + t.phase;
    double f = -kTwoPi * kTwoPi * t.amplitude * std::cos(phase);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) h(r, c) += f * t.k[r] * t.k[c];
  }
  return h;
}

Mat3 DispersionRelation::hessian_cartesian(const Vec3& p) const {
  return lattice_.inv_t * (hessian(p) * lattice_.inv);
}

std::pair<double, double> DispersionRelation::sample_range(int n) const {
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = evaluate({(i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  return {lo, hi};
}

DispersionRelation make_simple_cubic_cos() {
  return DispersionRelation({{{1, 0, 0}, 1.0, 0.0}, {{0, 1, 0}, 1.0, 0.0}, {{0, 0, 1}, 1.0, 0.0}});
}

DispersionRelation make_single_cos(const Vec3i& k) {
  return DispersionRelation({{k, 1.0, 0.0}});
}

}  // namespace fermizones
