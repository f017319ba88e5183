#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bicons/ambient.hpp"

using namespace bicons;
using Eigen::VectorXd;

namespace {

std::mt19937 rng(2024);

VectorXd random_vector(int n) {
  std::normal_distribution<double> d;
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = d(rng);
  return x;
}

// Random vector tangent to the sphere at p.
VectorXd tangent_at(const VectorXd& p) {
  VectorXd x = random_vector(static_cast<int>(p.size()));
  return x - (x.dot(p) / p.squaredNorm()) * p;
}

}  // namespace

TEST_CASE("ambient construction") {
  CHECK(AmbientSpace::euclidean(4).curvature() == 0.0);
  CHECK(AmbientSpace::euclidean(4).coordinate_count() == 4);
  const AmbientSpace s = AmbientSpace::sphere(3, 2.0);
  CHECK(s.curvature() == 0.25);
  CHECK(s.coordinate_count() == 4);
  CHECK_THROWS_AS(AmbientSpace::euclidean(2), ConfigError);
  CHECK_THROWS_AS(AmbientSpace::sphere(3, 0.0), ConfigError);
  CHECK_THROWS_AS(AmbientSpace::sphere(3, -1.0), ConfigError);
}

TEST_CASE("euclidean curvature operator vanishes") {
  const AmbientSpace e = AmbientSpace::euclidean(5);
  for (int t = 0; t < 5; ++t) {
    const VectorXd r = curvature_operator(e, random_vector(5), random_vector(5), random_vector(5),
                                          random_vector(5));
    CHECK(r.norm() == 0.0);
  }
}

TEST_CASE("unit sphere: R(X,Y)Y = X for orthonormal X, Y") {
  const AmbientSpace s = AmbientSpace::sphere(3, 1.0);
  VectorXd p(4), x(4), y(4);
  p << 0, 0, 0, 1;
  x << 1, 0, 0, 0;
  y << 0, 1, 0, 0;
  CHECK((curvature_operator(s, p, x, y, y) - x).norm() < 1e-15);
  CHECK((curvature_operator(s, p, x, y, x) + y).norm() < 1e-15);
}

TEST_CASE("curvature operator symmetries on random tangent inputs") {
  const AmbientSpace s = AmbientSpace::sphere(4, 1.7);
  for (int t = 0; t < 10; ++t) {
    VectorXd p = random_vector(5);
    p *= 1.7 / p.norm();
    const VectorXd x = tangent_at(p), y = tangent_at(p), z = tangent_at(p), w = tangent_at(p);
    const VectorXd rxy = curvature_operator(s, p, x, y, z);
    const VectorXd ryx = curvature_operator(s, p, y, x, z);
    CHECK((rxy + ryx).norm() < 1e-13);
    const double a = rxy.dot(w);
    const double b = curvature_operator(s, p, x, y, w).dot(z);
    CHECK(a == doctest::Approx(-b).epsilon(1e-12));
    // sectional curvature 1/r^2
    const VectorXd e1 = x / x.norm();
    VectorXd e2 = y - y.dot(e1) * e1;
    e2 /= e2.norm();
    CHECK(curvature_operator(s, p, e1, e2, e2).dot(e1) == doctest::Approx(1 / (1.7 * 1.7)));
  }
}

TEST_CASE("curvature operator rejects non-tangent input on the sphere") {
  const AmbientSpace s = AmbientSpace::sphere(3, 1.0);
  VectorXd p(4), x(4);
  p << 1, 0, 0, 0;
  x << 1, 1, 0, 0;
  CHECK_THROWS_AS(curvature_operator(s, p, x, x, x), std::invalid_argument);
  CHECK_THROWS_AS(curvature_operator(s, p, VectorXd::Zero(3), x, x), std::invalid_argument);
}

TEST_CASE("tangent/normal split") {
  const AmbientSpace e = AmbientSpace::euclidean(4);
  const VectorXd p = random_vector(4), t1 = random_vector(4), t2 = random_vector(4);

  SUBCASE("tangent input") {
    const VectorXd w = 0.3 * t1 - 2.0 * t2;
    const auto [tan, nor] = split_tangent_normal(e, p, t1, t2, w);
    CHECK((tan - w).norm() < 1e-13);
    CHECK(nor.norm() < 1e-13);
  }
  SUBCASE("normal input") {
    // Gram-Schmidt oracle for the normal direction
    const VectorXd q1 = t1 / t1.norm();
    VectorXd q2 = t2 - t2.dot(q1) * q1;
    q2 /= q2.norm();
    VectorXd w = random_vector(4);
    w -= w.dot(q1) * q1 + w.dot(q2) * q2;
    const auto [tan, nor] = split_tangent_normal(e, p, t1, t2, w);
    CHECK(tan.norm() < 1e-13);
    CHECK((nor - w).norm() < 1e-13);
  }
  SUBCASE("random input reconstructs") {
    for (int t = 0; t < 10; ++t) {
      const VectorXd w = random_vector(4);
      const auto [tan, nor] = split_tangent_normal(e, p, t1, t2, w);
      CHECK((w - tan - nor).norm() <= 1e-12);
      CHECK(std::abs(nor.dot(t1)) < 1e-12);
      CHECK(std::abs(nor.dot(t2)) < 1e-12);
    }
  }
  SUBCASE("degenerate basis") {
    CHECK_THROWS_AS(split_tangent_normal(e, p, t1, 2.0 * t1, t2), NumericalError);
  }
}

TEST_CASE("sphere split keeps both parts tangent to the sphere") {
  const AmbientSpace s = AmbientSpace::sphere(3, 2.0);
  VectorXd p = random_vector(4);
  p *= 2.0 / p.norm();
  const VectorXd t1 = tangent_at(p), t2 = tangent_at(p), w = tangent_at(p);
  const auto [tan, nor] = split_tangent_normal(s, p, t1, t2, w);
  CHECK(std::abs(tan.dot(p)) < 1e-12);
  CHECK(std::abs(nor.dot(p)) < 1e-12);
  CHECK((w - tan - nor).norm() < 1e-12);
  // a radial input has no part tangent to the sphere
  const auto [tr, nr] = split_tangent_normal(s, p, t1, t2, p);
  CHECK(tr.norm() < 1e-12);
  CHECK(nr.norm() < 1e-12);
}

TEST_CASE("field curvature operator matches the pointwise one") {
  const ParamGrid g = build_grid({0, 1}, {0, 1}, 4, 4, false, false);
  const AmbientSpace s = AmbientSpace::sphere(3, 1.0);
  AmbientField x, y, z;
  for (int k = 0; k < 4; ++k) {
    x.c.push_back(Field::from_values(g, std::vector<double>(g.size(), k == 0 ? 1.0 : 0.0)));
    y.c.push_back(Field::from_values(g, std::vector<double>(g.size(), k == 1 ? 1.0 : 0.0)));
    z.c.push_back(Field::from_values(g, std::vector<double>(g.size(), k == 1 ? 2.0 : 0.0)));
  }
  const AmbientField r = curvature_operator(s, x, y, z);
  for (std::size_t n = 0; n < g.size(); ++n) CHECK((r.at(n) - 2.0 * x.at(n)).norm() < 1e-15);
}
