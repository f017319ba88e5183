#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "bicons/mu_solver.hpp"
#include "support.hpp"

using namespace bicons;
using namespace testing;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;

namespace {

ParamGrid torus(int n) { return build_grid({0, 2 * kPi}, {0, 2 * kPi}, n, n, true, true); }

Field constant(const ParamGrid& g, double c) {
  return Field::from_values(g, std::vector<double>(g.size(), c));
}

Field perturbed(const ParamGrid& g, double c, double amp) {
  return sampled(g, [=](const Jet& u, const Jet& v) { return c * (1.0 + amp * sin(u) * cos(v)); });
}

}  // namespace

TEST_CASE("constant root") {
  CHECK(constant_root(1.0, 0.0) == 2.0);
  CHECK(constant_root(1.0, 3.0) == 4.0);
  CHECK(constant_root(0.5, 0.75) == Approx(1.0));
  CHECK_THROWS_AS(constant_root(1.0, -1.0), ConfigError);
  CHECK_THROWS_AS(constant_root(1.0, -2.0), ConfigError);
}

TEST_CASE("residual on constant fields") {
  const ParamGrid g = torus(8);
  const MuProblem p = make_mu_problem(g, 1.0, 0.0, constant(g, 1.0));
  // R = 2 mu (K^N + H^2 - mu^2 / (4 H^2))
  CHECK(max_abs(mu_residual(constant(g, 2.0), p)) == 0.0);
  CHECK(max_diff(mu_residual(constant(g, 1.0), p), [](double, double) { return 1.5; }) < 1e-15);
  const MuProblem q = make_mu_problem(g, 0.7, 1.3, constant(g, 1.0));
  CHECK(max_abs(mu_residual(constant(g, constant_root(0.7, 1.3)), q)) < 1e-14);
  CHECK_THROWS_AS(mu_residual(constant(g, 0.0), p), NumericalError);
  CHECK_THROWS_AS(mu_residual(constant(g, -1.0), p), NumericalError);
}

TEST_CASE("residual of a non-constant field") {
  // mu = 2 + eps sin x: -mu mu'' + mu'^2 = eps sin x (2 + eps sin x) + eps^2 cos^2 x
  std::vector<double> err;
  for (int n : {32, 64}) {
    const ParamGrid g = torus(n);
    const MuProblem p = make_mu_problem(g, 1.0, 0.0, constant(g, 1.0));
    const double eps = 0.1;
    const Field mu = sampled(g, [=](const Jet& u, const Jet&) { return 2.0 + eps * sin(u); });
    err.push_back(max_diff(mu_residual(mu, p), [=](double x, double) {
      const double m = 2.0 + eps * std::sin(x);
      return eps * std::sin(x) * m + eps * eps * std::cos(x) * std::cos(x) +
             2.0 * m * (1.0 - m * m / 4.0);
    }));
  }
  CHECK(order(err[0], err[1]) > 1.8);
}

TEST_CASE("problem validation") {
  const ParamGrid g = torus(8);
  CHECK_THROWS_AS(validate(make_mu_problem(g, 0.0, 0.0, constant(g, 1.0))), ConfigError);
  CHECK_THROWS_AS(validate(make_mu_problem(g, -1.0, 0.0, constant(g, 1.0))), ConfigError);
  CHECK_THROWS_AS(validate(make_mu_problem(g, 1.0, 0.0, constant(g, -1.0))), ConfigError);
  const ParamGrid open = build_grid({0, 1}, {0, 1}, 8, 8, false, false);
  CHECK_THROWS_AS(validate(make_mu_problem(open, 1.0, 0.0, constant(open, 1.0))), ConfigError);
  CHECK_THROWS_AS(solve_mu(make_mu_problem(open, 1.0, 0.0, constant(open, 1.0))), ConfigError);
}

TEST_CASE("Newton solve") {
  SUBCASE("already at the root") {
    const ParamGrid g = torus(16);
    const MuSolution s = solve_mu(make_mu_problem(g, 1.0, 0.0, constant(g, 2.0)));
    CHECK(s.converged);
    CHECK(s.iterations == 0);
    CHECK(s.status == "converged");
  }
  SUBCASE("perturbed start converges quadratically to the constant root") {
    const ParamGrid g = torus(64);
    const MuSolution s = solve_mu(make_mu_problem(g, 1.0, 0.0, perturbed(g, 2.0, 0.1)));
    CHECK(s.converged);
    CHECK(s.iterations <= 12);
    CHECK(s.history.back() <= 1e-10);
    CHECK_FALSE(s.least_norm_used);
    for (std::size_t i = 1; i < s.history.size(); ++i) CHECK(s.history[i] < s.history[i - 1]);
    CHECK(s.step_lengths.size() == static_cast<std::size_t>(s.iterations));
    for (double m : s.mu.values()) CHECK(m > 0.0);
    const Field gc = gauss_consistency(s);
    CHECK(max_abs(gc) <= 1e-9);
  }
  SUBCASE("other mean and ambient curvature") {
    const ParamGrid g = torus(32);
    const double root = constant_root(0.8, 0.5);
    const MuSolution s = solve_mu(make_mu_problem(g, 0.8, 0.5, perturbed(g, root, 0.05)));
    CHECK(s.converged);
    for (double m : s.mu.values()) CHECK(m == Approx(root).epsilon(1e-9));
  }
  SUBCASE("iteration cap") {
    const ParamGrid g = torus(32);
    NewtonOptions o;
    o.max_iter = 1;
    const MuSolution s = solve_mu(make_mu_problem(g, 1.0, 0.0, perturbed(g, 2.0, 0.3)), o);
    CHECK_FALSE(s.converged);
    CHECK(s.status == "max_iter exceeded");
    CHECK_THROWS_AS(reconstruct_geometry(s), NumericalError);
  }
  SUBCASE("K^N + H^2 < 0 has no positive constant root") {
    // outcome is recorded, not asserted: the solver must terminate cleanly
    const ParamGrid g = torus(16);
    MuSolution s;
    try {
      s = solve_mu(make_mu_problem(g, 1.0, -2.0, constant(g, 1.0)));
    } catch (const SingularJacobianError& e) {
      s = e.partial();
    }
    CHECK_FALSE(s.converged);
    CHECK_FALSE(s.status.empty());
    MESSAGE("K^N = -2: status '" << s.status << "' after " << s.iterations << " iterations");
  }
}

TEST_CASE("solution is equivariant under grid translations") {
  const ParamGrid g = torus(32);
  const Field a = perturbed(g, 2.0, 0.1);
  std::vector<double> shifted(g.size());
  for (int j = 0; j < g.nv(); ++j)
    for (int i = 0; i < g.nu(); ++i) shifted[g.node((i + 5) % g.nu(), (j + 3) % g.nv())] = a.value(g.node(i, j));
  const MuSolution s1 = solve_mu(make_mu_problem(g, 1.0, 0.0, a));
  const MuSolution s2 = solve_mu(make_mu_problem(g, 1.0, 0.0, Field::from_values(g, shifted)));
  REQUIRE(s1.converged);
  REQUIRE(s2.converged);
  CHECK(s1.iterations == s2.iterations);
  for (int j = 0; j < g.nv(); ++j)
    for (int i = 0; i < g.nu(); ++i)
      CHECK(s2.mu.value(g.node((i + 5) % g.nu(), (j + 3) % g.nv())) ==
            Approx(s1.mu.value(g.node(i, j))).epsilon(1e-12));
}

TEST_CASE("geometry reconstruction") {
  const ParamGrid g = torus(16);
  const MuSolution s = solve_mu(make_mu_problem(g, 1.0, 0.0, constant(g, 2.0)));
  const MuReconstruction r = reconstruct_geometry(s);
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(r.chart.rho.value(n) == Approx(-0.5 * std::log(2.0)).epsilon(1e-15));
    CHECK(r.metric.t11.value(n) == Approx(0.5).epsilon(1e-15));
    CHECK(r.a_h.t11.value(n) == Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(r.a_h.t22.value(n)) < 1e-15);
    CHECK(r.lambda1.value(n) == Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(r.lambda2.value(n)) < 1e-15);
  }

  const ParamGrid h = torus(32);
  const MuSolution p = solve_mu(make_mu_problem(h, 1.2, 0.3, perturbed(h, constant_root(1.2, 0.3), 0.2)));
  REQUIRE(p.converged);
  const MuReconstruction q = reconstruct_geometry(p);
  const Metric m = Metric::conformal(q.chart);
  // lambda1 - lambda2 = mu, lambda1 + lambda2 = 2|H|^2 = trace_g A_H
  CHECK(max_diff(q.lambda1 - q.lambda2, p.mu) < 1e-13);
  CHECK(max_diff(q.lambda1 + q.lambda2, [](double, double) { return 2.88; }) < 1e-13);
  CHECK(max_diff(trace(q.a_h, m), [](double, double) { return 2.88; }) < 1e-12);
}
