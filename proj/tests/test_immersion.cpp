#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "bicons/corpus.hpp"
#include "bicons/immersion.hpp"
#include "support.hpp"

using namespace bicons;
using namespace testing;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;

// Values at node 0 come from the symbolic oracle in tests/oracle.

namespace {

// Small open grid whose first node sits at (u0, v0).
ParamGrid at(double u0, double v0) { return build_grid({u0, u0 + 0.2}, {v0, v0 + 0.2}, 5, 5, false, false); }

double value0(const Field& f) { return f.value(0); }

}  // namespace

TEST_CASE("plane") {
  const SurfaceGeometry geo = compute_geometry(make_surface(builtin_surface("plane"), at(0.1, 0.4)));
  CHECK(max_diff(geo.metric().g().t11, [](double, double) { return 1.0; }) == 0.0);
  CHECK(max_abs(geo.metric().g().t12) == 0.0);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(max_abs(geo.second_fundamental_form().b11[k]) == 0.0);
    CHECK(max_abs(geo.second_fundamental_form().b12[k]) == 0.0);
  }
  CHECK(max_abs(geo.mean_curvature2()) == 0.0);
  CHECK(max_abs(geo.gauss_curvature()) == 0.0);
}

TEST_CASE("sphere of radius 2 in the spherical chart") {
  const SurfaceGeometry geo = compute_geometry(make_sphere(2.0, at(0.5, 1.0)));
  // g = diag(r^2 sin^2 v, r^2)
  CHECK(value0(geo.metric().g().t11) == Approx(2.8322936730942847).epsilon(1e-14));
  CHECK(value0(geo.metric().g().t12) == Approx(0.0).epsilon(1e-14));
  CHECK(value0(geo.metric().g().t22) == Approx(4.0).epsilon(1e-14));
  CHECK(max_diff(sqrt(geo.mean_curvature2()), [](double, double) { return 0.5; }) < 1e-13);
  CHECK(max_diff(geo.gauss_curvature(), [](double, double) { return 0.25; }) < 1e-13);
  // A_H = |H|^2 g
  CHECK(max_diff(geo.shape_operator_H().t11, 0.25 * geo.metric().g().t11) < 1e-13);
  CHECK(max_abs(geo.shape_operator_H().t12) < 1e-13);
  CHECK(mean_curvature_normality(geo) < 1e-13);
  // Gauss equation against the intrinsic curvature
  CHECK(max_diff(gauss_curvature(geo.metric()), geo.gauss_curvature()) < 1e-12);
}

TEST_CASE("helix times line in R^4") {
  SUBCASE("k = 1, tau = 0.5") {
    const SurfaceGeometry geo = compute_geometry(make_helix_line_r4(1.0, 0.5, 0.0, at(1.3, 0.2)));
    CHECK(max_diff(geo.metric().g().t11, [](double, double) { return 1.0; }) < 1e-14);
    CHECK(max_abs(geo.metric().g().t12) < 1e-14);
    CHECK(max_diff(geo.metric().g().t22, [](double, double) { return 1.0; }) < 1e-14);
    CHECK(value0(sqrt(geo.mean_curvature2())) == Approx(0.5).epsilon(1e-14));
    CHECK(max_abs(geo.gauss_curvature()) < 1e-14);
    // B(d_u, d_u) = k N, the rest vanish
    const NormalForm& b = geo.second_fundamental_form();
    CHECK(value0(dot(b.b11, b.b11)) == Approx(1.0).epsilon(1e-14));
    CHECK(value0(dot(b.b12, b.b12)) < 1e-28);
    CHECK(value0(dot(b.b22, b.b22)) < 1e-28);
    // A_H = diag(k^2 / 2, 0)
    CHECK(max_diff(geo.shape_operator_H().t11, [](double, double) { return 0.5; }) < 1e-14);
    CHECK(max_abs(geo.shape_operator_H().t22) < 1e-14);
    // |nabla-perp_u H| = k tau / 2, along the binormal: orthogonal to H
    const AmbientField& du = geo.normal_derivative_H(0);
    CHECK(value0(sqrt(dot(du, du))) == Approx(0.25).epsilon(1e-13));
    CHECK(max_abs(dot(du, geo.mean_curvature())) < 1e-14);
    CHECK(max_abs(dot(du, geo.xu())) < 1e-14);
    CHECK(max_abs(dot(du, geo.xv())) < 1e-14);
    CHECK(max_abs(dot(geo.normal_derivative_H(1), geo.normal_derivative_H(1))) < 1e-28);
  }
  SUBCASE("k = 2, tau = 0.3") {
    const SurfaceGeometry geo = compute_geometry(make_helix_line_r4(2.0, 0.3, 0.0, at(1.3, 0.2)));
    CHECK(value0(sqrt(geo.mean_curvature2())) == Approx(1.0).epsilon(1e-14));
    CHECK(max_diff(geo.shape_operator_H().t11, [](double, double) { return 2.0; }) < 1e-13);
    const AmbientField& du = geo.normal_derivative_H(0);
    CHECK(value0(sqrt(dot(du, du))) == Approx(0.3).epsilon(1e-13));
  }
  SUBCASE("planar curve: tau = 0 gives parallel mean curvature") {
    const SurfaceGeometry geo = compute_geometry(make_helix_line_r4(1.0, 0.0, 0.0, at(1.3, 0.2)));
    CHECK(max_abs(dot(geo.normal_derivative_H(0), geo.normal_derivative_H(0))) < 1e-28);
  }
}

TEST_CASE("warped cylinder") {
  const BuiltinSurface s = builtin_surface("cylinder", {{"warp", 0.1}});
  const SurfaceGeometry geo = compute_geometry(make_surface(s, at(0.7, 0.4)));
  CHECK(value0(geo.metric().g().t11) == Approx(1.172906961943976).epsilon(1e-14));
  CHECK(value0(geo.metric().g().t22) == Approx(1.172906961943976).epsilon(1e-14));
  CHECK(std::abs(value0(geo.metric().g().t12)) < 1e-15);
  CHECK(geo.metric().isothermal(1e-13));
  CHECK(max_diff(sqrt(geo.mean_curvature2()), [](double, double) { return 0.5; }) < 1e-13);
  CHECK(max_abs(geo.gauss_curvature()) < 1e-13);
}

TEST_CASE("graphs over the unit square") {
  SUBCASE("z = u^2 - v^3") {
    const SurfaceGeometry geo = compute_geometry(make_graph("u2_minus_v3", at(0.2, -0.3)));
    CHECK(value0(geo.mean_curvature2()) == Approx(2.3912067506016905).epsilon(1e-13));
    CHECK(value0(geo.gauss_curvature()) == Approx(2.368354972411592).epsilon(1e-13));
    const TangentField grad = gradient(geo.mean_curvature2());
    CHECK(value0(grad.u) == Approx(-6.056400267669425).epsilon(1e-12));
    CHECK(value0(grad.v) == Approx(-4.402200098057239).epsilon(1e-12));
    CHECK(max_diff(gauss_curvature(geo.metric()), geo.gauss_curvature()) < 1e-11);
  }
  SUBCASE("paraboloid") {
    const SurfaceGeometry geo = compute_geometry(make_graph("paraboloid", at(0.2, -0.3)));
    CHECK(value0(geo.mean_curvature2()) == Approx(1.8082993147689168).epsilon(1e-13));
    CHECK(value0(geo.gauss_curvature()) == Approx(1.7313019390581716).epsilon(1e-13));
    const TangentField grad = gradient(geo.mean_curvature2());
    CHECK(value0(grad.u) == Approx(-3.414165790624688).epsilon(1e-12));
    CHECK(value0(grad.v) == Approx(5.121248685937032).epsilon(1e-12));
  }
}

TEST_CASE("product torus") {
  const ParamGrid g = build_grid({0, 2 * kPi}, {0, 4 * kPi}, 12, 12, true, true);
  SUBCASE("in R^4") {
    const SurfaceGeometry geo = compute_geometry(make_product_torus(1.0, 2.0, g));
    CHECK(max_diff(sqrt(geo.mean_curvature2()), [](double, double) { return 0.5590169943749475; }) < 1e-14);
    CHECK(max_diff(geo.shape_operator_H().t11, [](double, double) { return 0.5; }) < 1e-14);
    CHECK(max_diff(geo.shape_operator_H().t22, [](double, double) { return 0.125; }) < 1e-14);
    CHECK(max_abs(geo.gauss_curvature()) < 1e-14);
  }
  SUBCASE("in S^3(sqrt 5)") {
    const BuiltinSurface s = builtin_surface("product_torus", {{"r1", 1.0}, {"r2", 2.0}, {"ambient", "sphere"}});
    const SurfaceGeometry geo = compute_geometry(make_surface(s, g));
    CHECK(max_diff(sqrt(geo.mean_curvature2()), [](double, double) { return 0.33541019662496846; }) < 1e-14);
    CHECK(max_diff(geo.shape_operator_H().t11, [](double, double) { return 0.3; }) < 1e-14);
    CHECK(max_diff(geo.shape_operator_H().t22, [](double, double) { return -0.075; }) < 1e-14);
    CHECK(max_abs(geo.gauss_curvature()) < 1e-14);
    // H is tangent to the sphere
    AmbientField pos = geo.jet().x;
    CHECK(max_abs(dot(geo.mean_curvature(), pos)) < 1e-14);
  }
}

TEST_CASE("trace identity and normality over the corpus") {
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    const BuiltinSurface s = builtin_surface(name);
    const SurfaceGeometry geo = compute_geometry(make_surface(s, default_grid(s, 12, 13)));
    // trace_g A_H = 2|H|^2
    CHECK(max_diff(trace(geo.shape_operator_H(), geo.metric()), 2.0 * geo.mean_curvature2()) < 1e-12);
    CHECK(mean_curvature_normality(geo) < 1e-12);
    // tangent vectors have no normal part
    const AmbientField n = normal_part(geo.xu(), geo);
    CHECK(max_abs(dot(n, n)) < 1e-24);
  }
}

TEST_CASE("finite-difference geometry converges at second order") {
  const BuiltinSurface s = builtin_surface("cylinder", {{"warp", 0.1}});
  std::vector<double> err;
  for (int n : {33, 65, 129}) {
    const ParamGrid g = default_grid(s, n - 1, n);
    const SurfaceGeometry fd = compute_geometry(make_surface(s, g, JetSource::finite_difference));
    err.push_back(max_diff(sqrt(fd.mean_curvature2()), [](double, double) { return 0.5; }));
  }
  CHECK(order(err[0], err[1]) > 1.8);
  CHECK(order(err[1], err[2]) > 1.8);
}

TEST_CASE("shape operator rejects a tangent direction") {
  const SurfaceGeometry geo = compute_geometry(make_sphere(1.0, at(0.5, 1.0)));
  CHECK_THROWS_AS(shape_operator(geo, geo.xu()), std::invalid_argument);
  const SymTensor ah = shape_operator(geo, geo.mean_curvature());
  CHECK(max_diff(ah.t11, geo.shape_operator_H().t11) < 1e-14);
}

TEST_CASE("immersion validation") {
  const ParamGrid g = at(0.0, 0.0);
  auto coord = [&](const JetFn& f) { return analytic(g, f); };
  const JetFn u_ = [](const Jet& u, const Jet&) { return u; };
  const JetFn v_ = [](const Jet&, const Jet& v) { return v; };
  const JetFn zero = [](const Jet& u, const Jet&) { return 0.0 * u; };

  CHECK_THROWS_AS(make_immersion(AmbientSpace::euclidean(4), {{coord(u_), coord(v_), coord(zero)}}),
                  ConfigError);
  CHECK_THROWS_AS(make_immersion(AmbientSpace::sphere(2, 1.0), {{coord(u_), coord(v_), coord(zero)}}),
                  ConfigError);
  // X = (u, u, 0) has rank one everywhere
  const ImmersionJet bad = make_immersion(AmbientSpace::euclidean(3), {{coord(u_), coord(u_), coord(zero)}});
  CHECK_THROWS_AS(compute_geometry(bad), NumericalError);
  CHECK_THROWS_AS(induced_metric(partial(bad.x, Axis::u), partial(bad.x, Axis::v)), NumericalError);
}

TEST_CASE("subsampled immersion keeps analytic jets") {
  const ImmersionJet j = make_sphere(1.0, build_grid({0, 2 * kPi}, {0.3, kPi - 0.3}, 16, 17, true, false));
  const ImmersionJet c = subsample(j, 2);
  CHECK(c.grid.nu() == 8);
  CHECK(c.grid.nv() == 9);
  CHECK(c.source == JetSource::analytic);
  CHECK(max_diff(compute_geometry(c).gauss_curvature(), [](double, double) { return 1.0; }) < 1e-13);
}
