#include "fermizones/magnetic.hpp"

#include <cmath>

#include "fermizones/errors.hpp"

namespace fermizones {

std::optional<Vec3i> detect_rational(const Vec3& direction, const ReciprocalLattice& lattice,
                                     int q_max, double tol) {
  if (q_max < 1) throw ValidationError("orbit-tracer: detect_rational needs q_max >= 1");
  Vec3 w = lattice.basis.transposed().apply(direction);
  double wn = norm(w);
  if (wn < 1e-300) return std::nullopt;
  w = w / wn;

  int pivot = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(w[i]) > std::abs(w[pivot])) pivot = i;
  double sign = w[pivot] >= 0 ? 1.0 : -1.0;
  Vec3 mu = w / w[pivot];  // mu[pivot] == 1, |mu_i| <= 1

  // Integer candidates must lie within sqrt(3)*q*tol of the ray, so the
  // rounding window around q*mu is narrow.
  int window = static_cast<int>(std::ceil(1.7320508 * q_max * std::max(tol, 1e-15))) + 1;

  for (int q = 1; q <= q_max; ++q) {
    Vec3i best{0, 0, 0};
    double best_angle = tol;
    bool found = false;
    double c0 = q * mu[0], c1 = q * mu[1], c2 = q * mu[2];
    auto scan = [&](std::int64_t m0, std::int64_t m1, std::int64_t m2) {
      Vec3i m{m0, m1, m2};
      m[pivot] = q;
      if (gcd3(m[0], m[1], m[2]) != 1) return;  // reduced form found at smaller q
      if (sign < 0) {
        m[0] = -m[0];
        m[1] = -m[1];
        m[2] = -m[2];
      }
      Vec3 mv = to_vec3(m);
      double angle = std::atan2(norm(cross(mv, w)), dot(mv, w));
      if (angle <= best_angle) {
        best_angle = angle;
        best = m;
        found = true;
      }
    };
    std::int64_t base0 = static_cast<std::int64_t>(std::llround(c0));
    std::int64_t base1 = static_cast<std::int64_t>(std::llround(c1));
    std::int64_t base2 = static_cast<std::int64_t>(std::llround(c2));
    for (std::int64_t d0 = -window; d0 <= window; ++d0)
      for (std::int64_t d1 = -window; d1 <= window; ++d1)
        for (std::int64_t d2 = -window; d2 <= window; ++d2)
          scan(pivot == 0 ? q : base0 + d0, pivot == 1 ? q : base1 + d1,
               pivot == 2 ? q : base2 + d2);
    if (found) return best;
  }
  return std::nullopt;
}

MagneticField make_field(const Vec3& b, const ReciprocalLattice& lattice, int q_max, double tol) {
  double n = norm(b);
  if (n < 1e-300) throw ValidationError("orbit-tracer: magnetic field direction is zero");
  MagneticField f;
  f.direction = b / n;
  f.rational_tag = detect_rational(f.direction, lattice, q_max, tol);
  return f;
}

PlaneFrame plane_frame(const Vec3& b) {
  PlaneFrame f;
  f.b_hat = normalized(b);
  int least = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(f.b_hat[i]) < std::abs(f.b_hat[least])) least = i;
  Vec3 e{0, 0, 0};
  e[least] = 1.0;
  f.u1 = normalized(e - f.b_hat * dot(e, f.b_hat));
  f.u2 = cross(f.b_hat, f.u1);
  return f;
}

Vec3 rotate_about(const Vec3& v, const Vec3& axis, double angle) {
  Vec3 a = normalized(axis);
  double c = std::cos(angle), s = std::sin(angle);
  return v * c + cross(a, v) * s + a * (dot(a, v) * (1 - c));
}

}  // namespace fermizones
