#include "doctest.h"

#include <cmath>
#include <random>

#include "fermizones/errors.hpp"
#include "fermizones/lattice.hpp"
#include "test_helpers.hpp"

using namespace fermizones;

TEST_CASE("evaluate: simple cubic cosine values") {
  auto d = make_simple_cubic_cos();
  CHECK(d.evaluate({0, 0, 0}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.evaluate({0.5, 0.5, 0.5}) == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("evaluate: exact periodicity under integer translations") {
  auto d = make_simple_cubic_cos();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Vec3 p = fztest::random_point(rng);
    Vec3 shifted{p.x + 2, p.y - 1, p.z + 3};
    CHECK(std::abs(d.evaluate(p) - d.evaluate(shifted)) < 1e-12);
  }
  std::mt19937_64 rng2(8);
  auto dr = fztest::random_dispersion(rng2, 3);
  for (int i = 0; i < 200; ++i) {
    Vec3 p = fztest::random_point(rng2);
    Vec3 shifted{p.x - 4, p.y + 7, p.z - 1};
    CHECK(std::abs(dr.evaluate(p) - dr.evaluate(shifted)) < 1e-12);
  }
}

TEST_CASE("gradient: analytic values at simple points") {
  auto d = make_simple_cubic_cos();
  Vec3 g = d.gradient({0.25, 0, 0});
  CHECK(g.x == doctest::Approx(-kTwoPi).epsilon(1e-12));
  CHECK(g.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.z == doctest::Approx(0.0).epsilon(1e-12));
  Vec3 g0 = d.gradient({0, 0, 0});
  CHECK(norm(g0) < 1e-12);
}

TEST_CASE("gradient: matches central finite differences") {
  // Independent oracle: central differences at h = 1e-5.
  std::mt19937_64 rng(11);
  auto d = fztest::random_dispersion(rng, 4, 3);
  const double h = 1e-5;
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    Vec3 p = fztest::random_point(rng);
    Vec3 g = d.gradient(p);
    for (int a = 0; a < 3; ++a) {
      Vec3 pp = p, pm = p;
      pp[a] += h;
      pm[a] -= h;
      double fd = (d.evaluate(pp) - d.evaluate(pm)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[a]));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("fused value_and_gradient agrees with the separate paths") {
  std::mt19937_64 rng(13);
  auto d = fztest::random_dispersion(rng, 3);
  for (int i = 0; i < 100; ++i) {
    Vec3 p = fztest::random_point(rng);
    double v;
    Vec3 g;
    d.value_and_gradient(p, v, g);
    CHECK(v == doctest::Approx(d.evaluate(p)).epsilon(1e-15));
    CHECK(norm(g - d.gradient(p)) < 1e-13);
  }
}

TEST_CASE("hessian matches finite differences of the gradient") {
  std::mt19937_64 rng(17);
  auto d = fztest::random_dispersion(rng, 3);
  const double h = 1e-5;
  for (int i = 0; i < 50; ++i) {
    Vec3 p = fztest::random_point(rng);
    Mat3 hess = d.hessian(p);
    for (int a = 0; a < 3; ++a) {
      Vec3 pp = p, pm = p;
      pp[a] += h;
      pm[a] -= h;
      Vec3 fd = (d.gradient(pp) - d.gradient(pm)) / (2 * h);
      for (int r = 0; r < 3; ++r) CHECK(std::abs(fd[r] - hess(r, a)) < 2e-5);
    }
  }
}

TEST_CASE("general lattice: cartesian conversions are consistent") {
  Mat3 basis;
  basis.m = {1.0, 0.2, 0.0, 0.0, 1.1, 0.3, 0.1, 0.0, 0.9};
  ReciprocalLattice lat(basis);
  std::mt19937_64 rng(19);
  for (int i = 0; i < 50; ++i) {
    Vec3 p = fztest::random_point(rng);
    Vec3 q = lat.to_cartesian(p);
    CHECK(norm(lat.to_lattice(q) - p) < 1e-12);
  }

  // Cartesian gradient via chain rule vs finite differences in q.
  DispersionRelation d({{{1, 0, 0}, 1.0, 0.0}, {{0, 1, 1}, 0.5, 0.3}}, lat);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    Vec3 p = fztest::random_point(rng);
    Vec3 q = lat.to_cartesian(p);
    Vec3 g = d.gradient_cartesian(p);
    for (int a = 0; a < 3; ++a) {
      Vec3 qp = q, qm = q;
      qp[a] += h;
      qm[a] -= h;
      double fd = (d.evaluate(lat.to_lattice(qp)) - d.evaluate(lat.to_lattice(qm))) / (2 * h);
      CHECK(std::abs(fd - g[a]) < 1e-5);
    }
  }
}

TEST_CASE("validation: singular basis and empty series are rejected") {
  Mat3 singular;
  singular.m = {1, 0, 0, 2, 0, 0, 0, 0, 1};
  CHECK_THROWS_AS(ReciprocalLattice{singular}, ValidationError);
  CHECK_THROWS_AS(DispersionRelation({{{0, 0, 0}, 1.0, 0.0}}), ValidationError);
}

TEST_CASE("sample_range brackets the true extrema for ccc") {
  auto d = make_simple_cubic_cos();
  auto [lo, hi] = d.sample_range(24);
  CHECK(lo < -2.9);
  CHECK(hi > 2.9);
  CHECK(lo >= -3.0 - 1e-12);
  CHECK(hi <= 3.0 + 1e-12);
}
