// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bicons/report.hpp"

using namespace bicons;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double linf(const GeometryReport& r, const std::string& name) {
  const ResidualEntry* e = r.residual(name);
  if (!e) throw std::runtime_error("missing residual " + name);
  return e->linf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

RunConfig builtin_config(const std::string& name, const json& params, Command cmd) {
  RunConfig c;
  c.command = cmd;
  c.surface.builtin = name;
  c.surface.params = params;
  return c;
}

// Estimated order of a convergence row: +inf when exact.
double row_order(const GeometryReport& conv, const std::string& name) {
  for (const auto& row : conv.sections.at(0).second["rows"]) {
    if (row["name"] != name) continue;
    if (row["estimated_order"].is_string()) return INFINITY;
    return row["estimated_order"].get<double>();
  }
  throw std::runtime_error("missing convergence row " + name);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string order_text(double p) { return std::isinf(p) ? "exact" : fmt(p); }

const std::vector<std::pair<std::string, json>> kCorpus = {
    {"sphere", {{"r", 1.5}}},
    {"cylinder", {{"warp", 0.1}}},
    {"helix_line_r4", {{"k", 1.0}, {"tau", 0.5}}},
    {"product_torus", {{"r1", 1.0}, {"r2", 2.0}}},
    {"product_torus", {{"r1", 1.0}, {"r2", 2.0}, {"ambient", "sphere"}}},
};

const std::array<std::string, 4> kConditions = {"div_s2", "grad_h2", "hopf_ah_holomorphicity",
                                                "codazzi_ah"};

GeometryReport verify_builtin(const std::string& name, const json& params, int nu, int nv,
                              JetSource src = JetSource::analytic) {
  const BuiltinSurface s = builtin_surface(name, params);
  return verify_surface(make_surface(s, default_grid(s, nu, nv), src), name);
}

// --- criteria ---------------------------------------------------------------

void a1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const BuiltinSurface s = builtin_surface("helix_line_r4", {{"k", 1.0}, {"tau", 0.5}});
  const ImmersionJet jet = make_surface(s, default_grid(s, 128, 128));
  const SurfaceGeometry geo = compute_geometry(jet);
  const GeometryReport r = verify_surface(jet, "helix_line_r4");
  const double elapsed = seconds_since(t0);

  // B(d_u, d_u) = k N and H = (k/2) N: |B_11| = 1, B_11 = 2H, |H| = 1/2
  double b_err = 0.0, h_err = 0.0;
  const NormalForm& b = geo.second_fundamental_form();
  for (std::size_t n = 0; n < jet.grid.size(); ++n) {
    b_err = std::max(b_err, std::abs(b.b11.at(n).norm() - 1.0));
    b_err = std::max(b_err, (b.b11.at(n) - 2.0 * geo.mean_curvature().at(n)).norm());
    b_err = std::max({b_err, b.b12.at(n).norm(), b.b22.at(n).norm()});
    h_err = std::max(h_err, std::abs(geo.mean_curvature().at(n).norm() - 0.5));
  }
  const PrincipalCurvatures pc =
      principal_curvatures(geo.shape_operator_H(), geo.metric(), geo.mean_curvature2(), 1e-8);
  double l_err = 0.0;
  for (std::size_t n = 0; n < pc.lambda1.size(); ++n)
    l_err = std::max({l_err, std::abs(pc.lambda1[n] - 0.5), std::abs(pc.lambda2[n])});
  const double nabla = linf(r, "nabla_ah");
  double four = 0.0;
  for (const char* name : {"div_s2", "bicons_trace_form", "bicons_grad_form", "bicons_div_form"})
    four = std::max(four, linf(r, name));

  o.detail << "B err " << fmt(b_err) << ", |H| err " << fmt(h_err) << ", lambda err " << fmt(l_err)
           << ", |nabla A_H| " << fmt(nabla) << ", conditions " << fmt(four) << ", " << fmt(elapsed) << " s";
  o.require(b_err <= 1e-10, "B = kN");
  o.require(h_err <= 1e-10, "H = (k/2)N");
  o.require(l_err <= 1e-10, "eigenvalues {1/2, 0}");
  o.require(nabla <= 1e-10, "|nabla A_H| <= 1e-10");
  o.require(four <= 1e-10, "conditions <= 1e-10");
  o.require(elapsed < 5.0, "runtime < 5 s");
}

void a2(Outcome& o) {
  int pairs = 0;
  double worst_implied = 0.0;
  for (const auto& [name, params] : kCorpus) {
    const GeometryReport r = verify_builtin(name, params, 32, 33);
    std::array<double, 4> v{};
    for (int i = 0; i < 4; ++i) v[i] = linf(r, kConditions[i]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        if (!(v[i] <= 1e-8 && v[j] <= 1e-8)) continue;
        ++pairs;
        for (int k = 0; k < 4; ++k)
          if (k != i && k != j) worst_implied = std::max(worst_implied, v[k]);
      }
  }
  o.require(pairs > 0, "at least one pair of conditions holds");
  o.require(worst_implied <= 1e-7, "implied residuals <= 1e-7 (analytic)");

  RunConfig c = builtin_config("cylinder", {{"warp", 0.1}}, Command::convergence);
  c.surface.sampling = Sampling::tabulated;
  c.grid_counts = std::array<int, 2>{32, 33};
  c.levels = 3;
  const GeometryReport conv = run_convergence(c);
  double worst_order = INFINITY;
  for (const auto& k : kConditions) worst_order = std::min(worst_order, row_order(conv, k));
  o.detail << pairs << " pairs, worst implied " << fmt(worst_implied)
           << "; tabulated cylinder 32^2->128^2 min order " << order_text(worst_order);
  o.require(worst_order >= 1.8, "FD order >= 1.8");
}

void a3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig c;
  c.command = Command::solve_mu;
  c.mu.h_norm = 1.0;
  c.mu.ambient_curvature = 0.0;
  c.mu.initial_scale = 2.0;
  c.mu.perturbation = 0.1;
  c.grid_counts = std::array<int, 2>{64, 64};
  const MuProblem p = build_mu_problem(c);
  const MuSolution s = solve_mu(p, c.newton);
  const double elapsed = seconds_since(t0);
  double dev = 0.0;
  for (double m : s.mu.values()) dev = std::max(dev, std::abs(m - 2.0));
  const double gauss = s.converged ? max_abs(gauss_consistency(s).values()) : INFINITY;
  o.detail << s.iterations << " iterations, residual " << fmt(s.history.back()) << ", |mu - 2| "
           << fmt(dev) << ", Gauss " << fmt(gauss) << ", " << fmt(elapsed) << " s";
  o.require(s.converged, "converged");
  o.require(s.history.back() <= 1e-10, "residual <= 1e-10");
  o.require(s.iterations <= 12, "<= 12 iterations");
  o.require(dev <= 1e-8, "mu = 2");
  o.require(gauss <= 1e-9, "Gauss consistency <= 1e-9");
  o.require(elapsed < 10.0, "runtime < 10 s");
}

void a4(Outcome& o) {
  double worst = 0.0;
  for (const auto& [name, params] : std::vector<std::pair<std::string, json>>{
           {"sphere", {{"r", 1.5}}}, {"cylinder", {{"warp", 0.1}}}, {"helix_line_r4", {}}}) {
    const BuiltinSurface s = builtin_surface(name, params);
    const SurfaceGeometry geo = compute_geometry(make_surface(s, default_grid(s, 32, 33)));
    worst = std::max(worst, max_abs(simons_residual(geo).values()));
  }
  double worst_order = INFINITY;
  for (const auto& [name, params] : std::vector<std::pair<std::string, json>>{
           {"sphere", {{"r", 1.5}}}, {"cylinder", {{"warp", 0.1}}}}) {
    RunConfig c = builtin_config(name, params, Command::convergence);
    c.surface.sampling = Sampling::fd;
    c.grid_counts = std::array<int, 2>{32, 33};
    worst_order = std::min(worst_order, row_order(run_convergence(c), "simons"));
  }
  o.detail << "analytic " << fmt(worst) << ", FD min order " << order_text(worst_order);
  o.require(worst <= 1e-9, "pointwise <= 1e-9");
  o.require(worst_order >= 1.8, "FD order >= 1.8");
}

void a5(Outcome& o) {
  double gap = 0.0;
  for (const char* ambient : {"euclidean", "sphere"}) {
    const BuiltinSurface s =
        builtin_surface("product_torus", {{"r1", 1.0}, {"r2", 2.0}, {"ambient", ambient}});
    const IntegralCheck ic = integral_formula_check(compute_geometry(make_surface(s, default_grid(s, 32, 32))));
    gap = std::max(gap, std::abs(ic.shape_operator_gap));
  }
  double pos_min = INFINITY;
  for (const std::string& name : builtin_names()) {
    const BuiltinSurface s = builtin_surface(name);
    const GeometryReport r = verify_surface(make_surface(s, default_grid(s, 32, 33)), name);
    pos_min = std::min(pos_min, *r.summary("positivity_min"));
  }
  for (const auto& [name, params] : kCorpus)
    pos_min = std::min(pos_min, *verify_builtin(name, params, 32, 33).summary("positivity_min"));
  o.detail << "|LHS - RHS| " << fmt(gap) << ", min positivity " << fmt(pos_min);
  o.require(gap <= 1e-9, "integral formula <= 1e-9");
  o.require(pos_min >= -1e-12, "positivity >= -1e-12");
}

void a6(Outcome& o) {
  const double r = 3.0;
  std::vector<double> err;
  for (int n : {33, 65, 129}) {
    const ParamGrid g = build_grid({0, 2 * kPi}, {-1.2, 1.2}, 16, n, true, false);
    const Field rho = Field::from_function(
        g, [&](const Jet&, const Jet& v) { return std::log(r) - log(cosh(v)); },
        JetSource::finite_difference);
    std::vector<double> e = gauss_curvature_conformal(rho).values();
    for (double& x : e) x -= 1.0 / (r * r);
    err.push_back(max_abs(e));
  }
  const double p = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));

  std::mt19937 rng(20240521);
  std::uniform_real_distribution<double> hd(0.2, 3.0), kd(-2.0, 3.0);
  double worst = 0.0;
  int pairs = 0;
  const ParamGrid g = build_grid({0, 2 * kPi}, {0, 2 * kPi}, 8, 8, true, true);
  while (pairs < 10) {
    const double h = hd(rng), kn = kd(rng);
    if (kn + h * h <= 0.0) continue;
    ++pairs;
    const double root = constant_root(h, kn);
    const Field mu = Field::from_values(g, std::vector<double>(g.size(), root));
    const MuProblem prob = make_mu_problem(g, h, kn, mu);
    // relative to the size of the reaction term
    const double scale = 2.0 * root * (std::abs(kn) + h * h + root * root / (4.0 * h * h));
    worst = std::max(worst, max_abs(mu_residual(mu, prob).values()) / scale);
  }
  o.detail << "Mercator K error " << fmt(err[2]) << " at order " << fmt(p) << ", worst relative root residual "
           << fmt(worst) << " over " << pairs << " pairs";
  o.require(p >= 1.8, "Mercator O(h^2)");
  o.require(worst <= 1e-14, "root residual at round-off");
}

void a7(Outcome& o) {
  const std::vector<std::string> pointwise = {"div_t_grad_alpha", "div_s2_routes", "norm_s2",
                                              "norm_nabla_s2"};
  double worst = 0.0;
  for (const auto& [name, params] : kCorpus) {
    const GeometryReport r = verify_builtin(name, params, 32, 33);
    for (const auto& k : pointwise) worst = std::max(worst, linf(r, k));
    if (const ResidualEntry* e = r.residual("weitzenbock_integrated")) worst = std::max(worst, e->linf);
  }
  const GeometryReport graph = verify_builtin("graph", json::object(), 33, 33);
  for (const auto& k : pointwise) worst = std::max(worst, linf(graph, k));

  // FD orders on a generic surface
  RunConfig c = builtin_config("graph", json::object(), Command::convergence);
  c.surface.sampling = Sampling::fd;
  c.grid_counts = std::array<int, 2>{33, 33};
  const GeometryReport conv = run_convergence(c);
  double worst_order = INFINITY;
  for (const auto& k : pointwise) worst_order = std::min(worst_order, row_order(conv, k));

  // integrated pairing on a curved doubly periodic chart with FD jets
  auto pairing = [](int n) {
    const ParamGrid g = build_grid({0, 2 * kPi}, {0, 2 * kPi}, n, n, true, true);
    auto f = [&](const std::function<Jet(const Jet&, const Jet&)>& fn) {
      return Field::from_function(g, fn, JetSource::finite_difference);
    };
    const Metric m = Metric::conformal({f([](const Jet& u, const Jet& v) { return 0.3 * sin(u) * cos(v); })});
    const SymTensor t{f([](const Jet& u, const Jet& v) { return 2.0 + sin(u) * cos(2.0 * v); }),
                      f([](const Jet& u, const Jet& v) { return 0.5 * cos(u + v); }),
                      f([](const Jet& u, const Jet&) { return 1.0 + 0.3 * sin(2.0 * u); })};
    const SymTensor s{f([](const Jet& u, const Jet& v) { return cos(v) + 0.0 * u; }),
                      f([](const Jet& u, const Jet& v) { return sin(u) * sin(v); }),
                      f([](const Jet& u, const Jet& v) { return 1.0 + cos(u - v); })};
    return weitzenbock_pairing_residual(t, s, m);
  };
  const double w32 = pairing(32), w64 = pairing(64), w128 = pairing(128);
  const double wp = std::min(std::log2(w32 / w64), std::log2(w64 / w128));
  worst_order = std::min(worst_order, wp);

  o.detail << "analytic " << fmt(worst) << ", FD min order " << order_text(worst_order)
           << " (integrated pairing " << fmt(wp) << ")";
  o.require(worst <= 1e-9, "analytic <= 1e-9");
  o.require(worst_order >= 1.8, "FD order >= 1.8");
}

void a8(Outcome& o) {
  const BuiltinSurface s = builtin_surface("graph", {{"expression", "u2_minus_v3"}});
  std::vector<double> div;
  bool any_bicons = false;
  for (int n : {33, 65, 129}) {
    const GeometryReport r = verify_surface(make_surface(s, default_grid(s, n, n), JetSource::finite_difference), "graph");
    div.push_back(linf(r, "div_s2"));
    any_bicons = any_bicons || r.flag("is_biconservative").value_or(true);
  }
  double spread = 0.0;
  for (std::size_t i = 1; i < div.size(); ++i) spread = std::max(spread, std::abs(div[i] / div[i - 1] - 1.0));
  const SpaceFormTarget ah = derive_spaceform_target(0.5, 0.0, TargetMode::shape_operator);
  const SpaceFormTarget s2 = derive_spaceform_target(0.5, 0.0, TargetMode::stress);
  o.detail << "Div S2 " << fmt(div[0]) << " -> " << fmt(div[1]) << " -> " << fmt(div[2]) << " (max change "
           << fmt(100 * spread) << "%), c_AH = " << ah.curvature << ", c_S2 = " << s2.curvature;
  o.require(!any_bicons, "graph not biconservative");
  o.require(spread <= 0.2, "Div S2 stable within 20%");
  o.require(ah.curvature == 0.0, "c = 0 (A_H mode)");
  o.require(s2.curvature == 0.75, "c = 3k^4/4 (S2 mode)");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
