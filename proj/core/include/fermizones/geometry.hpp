// Small fixed-size linear algebra used throughout the library.
// Lattice coordinates are dimensionless fractions of the reciprocal basis;
// Cartesian coordinates are obtained through ReciprocalLattice::to_cartesian.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace fermizones {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

using Vec3i = std::array<std::int64_t, 3>;

inline Vec3 to_vec3(const Vec3i& u) {
  return {static_cast<double>(u[0]), static_cast<double>(u[1]), static_cast<double>(u[2])};
}

inline std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
}

// Reduces an integer vector to its primitive representative; zero stays zero.
inline Vec3i make_primitive(Vec3i v) {
  std::int64_t g = gcd3(v[0], v[1], v[2]);
  if (g > 1) { v[0] /= g; v[1] /= g; v[2] /= g; }
  return v;
}

// Canonical sign: first nonzero component positive. Used wherever a label is
// defined only up to a global sign.
inline Vec3i canonical_sign(Vec3i v) {
  for (int i = 0; i < 3; ++i) {
    if (v[i] != 0) {
      if (v[i] < 0) { v[0] = -v[0]; v[1] = -v[1]; v[2] = -v[2]; }
      break;
    }
  }
  return v;
}

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double& operator()(int r, int c) { return m[3 * r + c]; }
  double operator()(int r, int c) const { return m[3 * r + c]; }

  static Mat3 identity() { return Mat3{}; }

  Vec3 apply(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Mat3 transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
  }

  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }

  Mat3 inverse() const {
    double d = det();
    Mat3 inv;
    inv.m = {(m[4] * m[8] - m[5] * m[7]) / d, (m[2] * m[7] - m[1] * m[8]) / d,
             (m[1] * m[5] - m[2] * m[4]) / d, (m[5] * m[6] - m[3] * m[8]) / d,
             (m[0] * m[8] - m[2] * m[6]) / d, (m[2] * m[3] - m[0] * m[5]) / d,
             (m[3] * m[7] - m[4] * m[6]) / d, (m[1] * m[6] - m[0] * m[7]) / d,
             (m[0] * m[4] - m[1] * m[3]) / d};
    return inv;
  }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};
inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(const Vec2& a) { double n = norm(a); return {a.x / n, a.y / n}; }

// Symmetric 2x2 tensor with an eigen-decomposition helper; used for the
// transverse conductivity blocks and line fits.
struct SymEigen2 {
  double eig_min = 0, eig_max = 0;
  Vec2 vec_min, vec_max;
};

inline SymEigen2 sym_eigen2(double a11, double a12, double a22) {
  SymEigen2 r;
  double tr = a11 + a22;
  double diff = a11 - a22;
  double disc = std::sqrt(diff * diff + 4 * a12 * a12);
  r.eig_max = 0.5 * (tr + disc);
  r.eig_min = 0.5 * (tr - disc);
  // Eigenvector for eig_max; guard the isotropic case.
  if (disc < 1e-300) {
    r.vec_max = {1, 0};
    r.vec_min = {0, 1};
  } else {
    Vec2 v{a12, r.eig_max - a11};
    if (norm(v) < 1e-150 * (std::abs(a11) + std::abs(a22) + 1e-300))
      v = {r.eig_max - a22, a12};
    if (norm(v) == 0) v = {1, 0};
    r.vec_max = normalized(v);
    r.vec_min = {-r.vec_max.y, r.vec_max.x};
  }
  return r;
}

struct Vec4 {
  std::array<double, 4> v{0, 0, 0, 0};
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  Vec4& operator+=(const Vec4& o) { for (int i = 0; i < 4; ++i) v[i] += o.v[i]; return *this; }
  Vec4& operator-=(const Vec4& o) { for (int i = 0; i < 4; ++i) v[i] -= o.v[i]; return *this; }
  Vec4& operator*=(double s) { for (auto& c : v) c *= s; return *this; }
};
inline Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
inline Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
inline Vec4 operator*(Vec4 a, double s) { return a *= s; }
inline Vec4 operator*(double s, Vec4 a) { return a *= s; }
inline double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }
inline Vec4 normalized(const Vec4& a) { return a * (1.0 / norm(a)); }

using Vec4i = std::array<std::int64_t, 4>;

inline std::int64_t gcd4(const Vec4i& v) {
  std::int64_t g = 0;
  for (auto c : v) g = std::gcd(g, std::abs(c));
  return g;
}

inline Vec4i make_primitive4(Vec4i v) {
  std::int64_t g = gcd4(v);
  if (g > 1) for (auto& c : v) c /= g;
  return v;
}

inline Vec4i canonical_sign4(Vec4i v) {
  for (int i = 0; i < 4; ++i) {
    if (v[i] != 0) {
      if (v[i] < 0) for (auto& c : v) c = -c;
      break;
    }
  }
  return v;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

inline double wrap_unit(double t) { return t - std::floor(t); }

// Distance from point p to segment [a, b].
inline double point_segment_dist(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = norm2(ab);
  if (len2 < 1e-300) return dist(p, a);
  double t = dot(p - a, ab) / len2;
  t = t < 0 ? 0 : (t > 1 ? 1 : t);
  return dist(p, a + ab * t);
}

inline double point_segment_dist2d(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 < 1e-300) return norm(p - a);
  double t = dot(p - a, ab) / len2;
  t = t < 0 ? 0 : (t > 1 ? 1 : t);
  Vec2 q = a + ab * t;
  return norm(p - q);
}

}  // namespace fermizones
