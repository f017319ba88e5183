#include "bicons/biconservative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bicons {

SymTensor stress_bienergy(const SymTensor& a_h, const Field& h2, const Metric& m) {
  return (-2.0 * h2) * m.g() + 4.0 * a_h;
}

namespace {

TangentField zero_covector(const Field& like) {
  return {constant_like(like, 0.0), constant_like(like, 0.0)};
}

}  // namespace

BiconservativityTerms biconservativity_terms(const SurfaceGeometry& geo) {
  const Metric& m = geo.metric();
  const SymTensor& a_h = geo.shape_operator_H();
  const Field& h2 = geo.mean_curvature2();
  const SymTensor& gi = m.inverse();
  const NormalForm& b = geo.second_fundamental_form();

  BiconservativityTerms t;
  const DivergenceResult ds = divergence(stress_bienergy(a_h, h2, m), m);
  t.div_s2 = ds.value;
  t.div_s2_frame = ds.frame_route;
  t.div_ah = divergence_trace(covariant_derivative(a_h, m), m);
  t.grad_h2 = gradient(h2);

  t.normal_trace = zero_covector(t.div_ah.u);
  for (int k = 0; k < 2; ++k) {
    Field s = constant_like(t.div_ah.u, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s += gi(i, j) * dot(b(j, k), geo.normal_derivative_H(i));
    t.normal_trace[k] = std::move(s);
  }

  t.curvature_trace = zero_covector(t.div_ah.u);
  if (geo.space().curvature() != 0.0) {
    for (int k = 0; k < 2; ++k) {
      Field s = constant_like(t.div_ah.u, 0.0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const AmbientField r = curvature_operator(geo.space(), geo.tangent(i),
                                                    geo.mean_curvature(), geo.tangent(j));
          s += gi(i, j) * dot(r, geo.tangent(k));
        }
      t.curvature_trace[k] = std::move(s);
    }
  }
  return t;
}

BiconservativityResiduals biconservativity_residuals(const BiconservativityTerms& t) {
  BiconservativityResiduals r;
  r.div_s2 = t.div_s2;
  r.trace_form = t.normal_trace + t.div_ah + t.curvature_trace;
  r.grad_form = t.grad_h2 + 2.0 * t.normal_trace + 2.0 * t.curvature_trace;
  r.div_form = 2.0 * t.div_ah - t.grad_h2;
  r.div_s2_split = t.div_s2 - (4.0 * t.div_ah - 2.0 * t.grad_h2);
  r.div_ah_split = t.div_ah - t.grad_h2 - t.normal_trace - t.curvature_trace;
  return r;
}

BiconservativityResiduals biconservativity_residuals(const SurfaceGeometry& geo) {
  return biconservativity_residuals(biconservativity_terms(geo));
}

// ---------------------------------------------------------------------------

PrincipalCurvatures principal_curvatures(const SymTensor& a, const Metric& m, const Field& h2,
                                         double eps_pu) {
  const OrthonormalFrame f = orthonormal_frame(m);
  const std::size_t n = a.t11.size();
  PrincipalCurvatures pc;
  pc.lambda1.resize(n);
  pc.lambda2.resize(n);
  pc.mu.resize(n);
  pc.pseudoumbilical.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e1[2] = {f.e1u.value(i), f.e1v.value(i)};
    const double e2[2] = {f.e2u.value(i), f.e2v.value(i)};
    const double c[2][2] = {{a.t11.value(i), a.t12.value(i)}, {a.t12.value(i), a.t22.value(i)}};
    auto form = [&](const double* x, const double* y) {
      double s = 0.0;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) s += x[p] * y[q] * c[p][q];
      return s;
    };
    const double a11 = form(e1, e1), a12 = form(e1, e2), a22 = form(e2, e2);
    const double mean = 0.5 * (a11 + a22);
    const double gap = std::hypot(a11 - a22, 2.0 * a12);
    pc.lambda1[i] = mean + 0.5 * gap;
    pc.lambda2[i] = mean - 0.5 * gap;
    pc.mu[i] = gap;
    pc.pseudoumbilical[i] = gap <= eps_pu * (1.0 + h2.value(i)) ? 1 : 0;
  }
  return pc;
}

PrincipalCurvatures principal_curvatures(const std::array<Field, 4>& mixed, const Metric& m,
                                         const Field& h2, double eps_pu, double sym_tol) {
  const SymTensor& g = m.g();
  // lowered L_ij = g_ik a^k_j with mixed = {a^1_1, a^1_2, a^2_1, a^2_2}
  const Field l11 = g.t11 * mixed[0] + g.t12 * mixed[2];
  const Field l12 = g.t11 * mixed[1] + g.t12 * mixed[3];
  const Field l21 = g.t12 * mixed[0] + g.t22 * mixed[2];
  const Field l22 = g.t12 * mixed[1] + g.t22 * mixed[3];
  for (std::size_t n = 0; n < l12.size(); ++n) {
    const double scale = 1.0 + std::abs(l11.value(n)) + std::abs(l22.value(n)) +
                         std::abs(l12.value(n)) + std::abs(l21.value(n));
    if (std::abs(l12.value(n) - l21.value(n)) > sym_tol * scale)
      throw std::invalid_argument("principal_curvatures: operator not g-symmetric at node " +
                                  std::to_string(n));
  }
  return principal_curvatures(SymTensor{l11, 0.5 * (l12 + l21), l22}, m, h2, eps_pu);
}

// ---------------------------------------------------------------------------

Field simons_residual(const SurfaceGeometry& geo) {
  const Metric& m = geo.metric();
  const Field& h2 = geo.mean_curvature2();
  const SymTensor s2 = stress_bienergy(geo.shape_operator_H(), h2, m);
  const Field& k = geo.gauss_curvature();
  const Field alpha = 4.0 * h2;
  const Field s2n = norm2(s2, m);
  const TangentField ga = gradient(alpha);
  const Field lhs = 0.5 * laplacian(s2n, m);
  const Field alpha2 = alpha * alpha;
  const Field rhs = -2.0 * (k * s2n) + divergence(apply(s2, ga, m), m) + k * alpha2 +
                    0.5 * laplacian(alpha2, m) + norm2(ga, m) -
                    norm2(covariant_derivative(s2, m), m);
  return lhs - rhs;
}

IntegralCheck integral_formula_check(const SurfaceGeometry& geo) {
  if (!geo.grid().doubly_periodic())
    throw ConfigError("integral formulas require a doubly periodic (closed) surface");
  const Metric& m = geo.metric();
  const Field& h2 = geo.mean_curvature2();
  const Field& k = geo.gauss_curvature();
  const SymTensor& a_h = geo.shape_operator_H();
  const SymTensor s2 = stress_bienergy(a_h, h2, m);
  const Field alpha = 4.0 * h2;
  const std::vector<double> w = area_weights(m);
  auto integral = [&](const Field& f) { return integrate(f.values(), w, geo.grid()); };

  const Field ah2 = norm2(a_h, m);
  const Field h4 = h2 * h2;
  IntegralCheck c;
  c.shape_operator_gap =
      integral(norm2(covariant_derivative(a_h, m), m) + 2.0 * (k * (ah2 - 2.0 * h4))) -
      2.5 * integral(norm2(gradient(h2), m));
  const Field s2n = norm2(s2, m);
  const Field alpha2 = alpha * alpha;
  c.stress_gap = integral(norm2(covariant_derivative(s2, m), m) + 2.0 * (k * (s2n - 0.5 * alpha2))) -
                 integral(norm2(gradient(alpha), m));
  c.positivity = (2.0 * s2n - alpha2).values();
  return c;
}

// ---------------------------------------------------------------------------

SpaceFormTarget derive_spaceform_target(double lambda1, double lambda2, TargetMode mode,
                                        double gauss_curvature, double tol) {
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2))
    throw ConfigError("space-form target: non-finite principal curvatures");
  if (lambda1 < lambda2) throw ConfigError("space-form target: expected lambda1 >= lambda2");
  const double h2 = 0.5 * (lambda1 + lambda2);
  const double h4 = h2 * h2;
  const double mu = lambda1 - lambda2;
  SpaceFormTarget t{};
  switch (mode) {
    case TargetMode::shape_operator:
      t.curvature = 0.25 * mu * mu - h4;
      t.mean_curvature = h2;
      t.gauss_gap = t.curvature + lambda1 * lambda2 - gauss_curvature;
      break;
    case TargetMode::stress: {
      t.curvature = 4.0 * (mu * mu - h4);
      t.mean_curvature = 2.0 * h2;
      const double s1 = 4.0 * lambda1 - 2.0 * h2, s2 = 4.0 * lambda2 - 2.0 * h2;
      t.gauss_gap = t.curvature + s1 * s2 - gauss_curvature;
      break;
    }
    case TargetMode::umbilical_shape_operator:
    case TargetMode::umbilical_stress: {
      if (mu > tol * (1.0 + std::abs(h2)))
        throw ConfigError("space-form target: umbilical mode needs a pseudoumbilical surface");
      if (std::abs(gauss_curvature) > tol)
        throw ConfigError("space-form target: umbilical mode needs K = 0");
      const bool stress = mode == TargetMode::umbilical_stress;
      t.curvature = (stress ? -4.0 : -1.0) * h4;
      t.mean_curvature = (stress ? 2.0 : 1.0) * h2;
      t.gauss_gap = t.curvature + t.mean_curvature * t.mean_curvature - gauss_curvature;
      break;
    }
  }
  return t;
}

namespace {

std::pair<double, double> masked_range(const std::vector<double>& v, const NodeMask& mask) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t n = 0; n < v.size(); ++n) {
    if (!mask[n]) continue;
    lo = std::min(lo, v[n]);
    hi = std::max(hi, v[n]);
  }
  return {lo, hi};
}

}  // namespace

SpaceFormTarget derive_spaceform_target(const PrincipalCurvatures& pc, const Field& k,
                                        const NodeMask& mask, TargetMode mode, double tol) {
  const auto [l1lo, l1hi] = masked_range(pc.lambda1, mask);
  const auto [l2lo, l2hi] = masked_range(pc.lambda2, mask);
  const auto [klo, khi] = masked_range(k.values(), mask);
  if (l1hi - l1lo > tol || l2hi - l2lo > tol)
    throw ConfigError("space-form target: principal curvatures are not constant");
  if (khi - klo > tol) throw ConfigError("space-form target: Gauss curvature is not constant");
  return derive_spaceform_target(0.5 * (l1lo + l1hi), 0.5 * (l2lo + l2hi), mode,
                                 0.5 * (klo + khi), tol);
}

// ---------------------------------------------------------------------------

const ResidualEntry* GeometryReport::residual(const std::string& name) const {
  for (const auto& r : residuals)
    if (r.name == name) return &r;
  return nullptr;
}

std::optional<double> GeometryReport::summary(const std::string& name) const {
  for (const auto& [k, v] : summaries)
    if (k == name) return v;
  return std::nullopt;
}

std::optional<bool> GeometryReport::flag(const std::string& name) const {
  for (const auto& [k, v] : flags)
    if (k == name) return v;
  return std::nullopt;
}

bool GeometryReport::passed() const { return flag("identities_hold").value_or(false); }

// ---------------------------------------------------------------------------

namespace {

// When a residual is expected to vanish.
enum class Role {
  identity,         // on every surface
  condition,        // diagnostic, never asserted
  if_bicons,        // on biconservative surfaces
  if_parallel,      // when nabla A_H = 0
};

struct Raw {
  std::string name, key;
  int dim;  // curvature dimension, scales the tolerance
  Role role;
  std::vector<double> pointwise;  // empty for integrated scalars
  double scalar = 0.0;
  double l2 = 0.0, linf = 0.0;
};

struct Evaluation {
  std::vector<Raw> raws;
  double kappa = 0.0;
  double area = 0.0;
  bool isothermal = false;
  PrincipalCurvatures pc;
  NodeMask mask;
  std::vector<double> h2, k, dh_u, dh_v, positivity;
  std::optional<Field> k_field;

  const Raw* find(const std::string& name) const {
    for (const auto& r : raws)
      if (r.name == name) return &r;
    return nullptr;
  }
};

std::vector<double> abs_values(const Field& f) {
  std::vector<double> v = f.values();
  for (auto& x : v) x = std::abs(x);
  return v;
}

std::vector<double> root_values(const Field& f) {
  std::vector<double> v = f.values();
  for (auto& x : v) x = std::sqrt(std::max(0.0, x));
  return v;
}

std::vector<double> scaled(std::vector<double> v, const Field& s) {
  for (std::size_t n = 0; n < v.size(); ++n) v[n] *= s.value(n);
  return v;
}

Evaluation evaluate(const ImmersionJet& jet, double margin_u, double margin_v, double eps_pu) {
  const bool analytic = jet.source == JetSource::analytic;
  const SurfaceGeometry geo = compute_geometry(jet);
  const Metric& m = geo.metric();
  const ParamGrid& grid = geo.grid();
  const SymTensor& a_h = geo.shape_operator_H();
  const Field& h2 = geo.mean_curvature2();
  const SymTensor s2 = stress_bienergy(a_h, h2, m);
  const Field alpha = 4.0 * h2;
  const Field& kext = geo.gauss_curvature();

  Evaluation e;
  e.mask = analytic ? full_mask(grid) : interior_mask(grid, margin_u, margin_v);
  auto add = [&](const char* name, const char* key, int dim, Role role, std::vector<double> v) {
    e.raws.push_back({name, key, dim, role, std::move(v), 0.0, 0.0, 0.0});
  };
  auto add_scalar = [&](const char* name, const char* key, int dim, Role role, double v) {
    e.raws.push_back({name, key, dim, role, {}, v, 0.0, 0.0});
  };

  // curvature scale: |B| plus the ambient curvature radius
  {
    const NormalForm& b = geo.second_fundamental_form();
    const SymTensor& gi = m.inverse();
    Field b2 = constant_like(h2, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q) b2 += (gi(i, p) * gi(j, q)) * dot(b(i, j), b(p, q));
    double kap = 0.0;
    for (std::size_t n = 0; n < b2.size(); ++n)
      if (e.mask[n]) kap = std::max(kap, std::sqrt(std::max(0.0, b2.value(n))));
    e.kappa = kap + std::sqrt(geo.space().curvature());
  }

  // --- basic geometry
  {
    std::vector<double> normal(grid.size(), 0.0);
    for (int i = 0; i < 2; ++i) {
      const Field d = dot(geo.mean_curvature(), geo.tangent(i));
      const Field len = dot(geo.tangent(i), geo.tangent(i));
      for (std::size_t n = 0; n < normal.size(); ++n)
        normal[n] += std::abs(d.value(n)) / std::sqrt(len.value(n));
    }
    add("mean_curvature_normality", "geometry.h_normal", 1, Role::identity, std::move(normal));
  }
  add("trace_shape_operator_H", "geometry.trace_ah", 2, Role::identity,
      abs_values(trace(a_h, m) - 2.0 * h2));
  add("gauss_equation", "geometry.gauss_equation", 2, Role::identity,
      abs_values(kext - gauss_curvature(m)));

  // --- biconservativity
  const BiconservativityTerms terms = biconservativity_terms(geo);
  const BiconservativityResiduals res = biconservativity_residuals(terms);
  add("div_s2", "bicons.div_s2", 3, Role::condition, pointwise_norm(res.div_s2, m));
  add("bicons_trace_form", "bicons.trace_form", 3, Role::condition,
      pointwise_norm(res.trace_form, m));
  add("bicons_grad_form", "bicons.grad_form", 3, Role::condition, pointwise_norm(res.grad_form, m));
  add("bicons_div_form", "bicons.div_form", 3, Role::condition, pointwise_norm(res.div_form, m));
  add("div_s2_split", "identity.div_s2_split", 3, Role::identity,
      pointwise_norm(res.div_s2_split, m));
  add("div_s2_routes", "identity.div_routes", 3, Role::identity,
      pointwise_norm(terms.div_s2 - terms.div_s2_frame, m));
  add("div_ah_split", "identity.div_ah_split", 3, Role::identity,
      pointwise_norm(res.div_ah_split, m));

  // --- norm identities
  const TensorDerivative ds2 = covariant_derivative(s2, m);
  const TensorDerivative dah = covariant_derivative(a_h, m);
  const Field h4 = h2 * h2;
  const Field s2n = norm2(s2, m), ahn = norm2(a_h, m);
  add("trace_s2", "identity.trace_s2", 2, Role::identity, abs_values(trace(s2, m) - alpha));
  add("norm_s2", "identity.norm_s2", 4, Role::identity,
      abs_values(s2n - (16.0 * ahn - 24.0 * h4)));
  add("norm_nabla_s2", "identity.norm_nabla_s2", 6, Role::identity,
      abs_values(norm2(ds2, m) - (16.0 * norm2(dah, m) - 24.0 * norm2(terms.grad_h2, m))));
  const Field positivity = 2.0 * s2n - alpha * alpha;
  add("positivity_split", "identity.positivity_split", 4, Role::identity,
      abs_values(positivity - 32.0 * (ahn - 2.0 * h4)));
  {
    std::vector<double> neg = positivity.values();
    for (auto& x : neg) x = std::max(0.0, -x);
    add("positivity_violation", "integral.positivity", 4, Role::identity, std::move(neg));
  }

  // --- tensor identities on S_2
  add("weitzenbock", "identity.weitzenbock", 6, Role::identity,
      abs_values(weitzenbock_pointwise_residual(s2, s2, m)));
  if (grid.doubly_periodic())
    add_scalar("weitzenbock_integrated", "identity.weitzenbock_integrated", 6, Role::identity,
               weitzenbock_pairing_residual(s2, s2, m));
  add("div_t_grad_alpha", "identity.div_t_grad_alpha", 6, Role::identity,
      abs_values(div_T_grad_alpha_residual(s2, alpha, m)));
  add("rough_laplacian_s2", "identity.rough_laplacian_s2", 4, Role::if_bicons,
      pointwise_norm(trace_nabla2_residual(s2, m), m));
  add("div_s2_grad_alpha", "identity.div_s2_grad_alpha", 6, Role::if_bicons,
      abs_values(divergence(apply(s2, gradient(alpha), m), m) - inner(s2, hessian(alpha, m), m)));
  add("simons", "identity.simons", 6, Role::if_bicons, abs_values(simons_residual(geo)));

  // --- equivalence matrix
  add("grad_h2", "equivalence.grad_h2", 3, Role::condition, pointwise_norm(terms.grad_h2, m));
  add("hopf_ah_holomorphicity", "equivalence.hopf", 3, Role::condition,
      pointwise_norm(gradient(trace(a_h, m)) - 2.0 * terms.div_ah, m));
  e.isothermal = m.isothermal(analytic ? 1e-8 : 1e-3);
  if (e.isothermal) {
    const HolomorphicityResidual hr = holomorphicity_residual(a_h, m);
    const Field dre = hr.direct.re - hr.closed_form.re, dim = hr.direct.im - hr.closed_form.im;
    add("hopf_ah_dzbar", "equivalence.hopf_dzbar", 3, Role::condition,
        root_values(hr.direct.re * hr.direct.re + hr.direct.im * hr.direct.im));
    add("hopf_routes", "identity.hopf_routes", 3, Role::identity,
        root_values(dre * dre + dim * dim));
  }
  const Field inv_area = 1.0 / m.sqrt_det();
  add("codazzi_ah", "equivalence.codazzi_ah", 3, Role::condition,
      scaled(pointwise_norm(codazzi_defect(dah), m), inv_area));

  // --- parallel shape operator
  {
    std::vector<double> v = norm2(dah, m).values();
    for (auto& x : v) x = std::sqrt(std::max(0.0, x));
    add("nabla_ah", "parallel.nabla_ah", 3, Role::condition, std::move(v));
  }
  {
    const SymTensor& gi = m.inverse();
    const AmbientField& du = geo.normal_derivative_H(0);
    const AmbientField& dv = geo.normal_derivative_H(1);
    const Field q = gi.t11 * dot(du, du) + 2.0 * (gi.t12 * dot(du, dv)) + gi.t22 * dot(dv, dv);
    std::vector<double> v = q.values();
    for (auto& x : v) x = std::sqrt(std::max(0.0, x));
    add("normal_connection_h", "geometry.normal_connection_h", 2, Role::condition, std::move(v));
    e.dh_u = dot(du, du).values();
    e.dh_v = dot(dv, dv).values();
    for (std::size_t n = 0; n < e.dh_u.size(); ++n) {
      e.dh_u[n] = std::sqrt(e.dh_u[n] / m.g().t11.value(n));
      e.dh_v[n] = std::sqrt(e.dh_v[n] / m.g().t22.value(n));
    }

    const NormalForm& b = geo.second_fundamental_form();
    TangentField comm = zero_covector(terms.div_ah.u);
    const bool curved = geo.space().curvature() != 0.0;
    const AmbientField rh = curved ? curvature_operator(geo.space(), geo.xu(), geo.xv(),
                                                        geo.mean_curvature())
                                   : AmbientField{};
    for (int k = 0; k < 2; ++k) {
      Field c = dot(b(1, k), du) - dot(b(0, k), dv);
      if (curved) c -= dot(rh, geo.tangent(k));
      comm[k] = std::move(c);
    }
    add("shape_commutator", "parallel.shape_commutator", 3, Role::if_parallel,
        scaled(pointwise_norm(comm, m), inv_area));
    add("trace_balance", "parallel.trace_balance", 3, Role::if_parallel,
        pointwise_norm(terms.normal_trace + terms.curvature_trace, m));
  }

  // --- principal curvatures
  e.pc = principal_curvatures(a_h, m, h2, eps_pu);
  {
    const auto [l1lo, l1hi] = masked_range(e.pc.lambda1, e.mask);
    const auto [l2lo, l2hi] = masked_range(e.pc.lambda2, e.mask);
    add_scalar("lambda_spread", "parallel.lambda_constant", 2, Role::if_parallel,
               std::max(l1hi - l1lo, l2hi - l2lo));
    const auto [mulo, muhi] = masked_range(e.pc.mu, e.mask);
    const auto [klo, khi] = masked_range(kext.values(), e.mask);
    add_scalar("pseudoumbilical_or_flat", "parallel.pseudoumbilical_or_flat", 2, Role::if_parallel,
               std::min(muhi, std::max(std::abs(klo), std::abs(khi))));
    (void)mulo;
  }

  // --- integral formulas
  if (grid.doubly_periodic()) {
    const IntegralCheck ic = integral_formula_check(geo);
    add_scalar("integral_ah", "integral.ah", 6, Role::if_bicons, std::abs(ic.shape_operator_gap));
    add_scalar("integral_s2", "integral.s2", 6, Role::if_bicons, std::abs(ic.stress_gap));
  }

  // --- norms
  const std::vector<double> w = area_weights(m);
  {
    std::vector<double> inside(grid.size());
    for (std::size_t n = 0; n < inside.size(); ++n) inside[n] = e.mask[n] ? 1.0 : 0.0;
    e.area = integrate(inside, w, grid);
  }
  for (auto& r : e.raws) {
    if (r.pointwise.empty()) {
      r.l2 = r.linf = std::abs(r.scalar);
    } else {
      r.l2 = l2(r.pointwise, w, grid, e.mask);
      r.linf = linf(r.pointwise, e.mask);
    }
  }
  e.h2 = h2.values();
  e.k = kext.values();
  e.k_field = kext;
  e.positivity = positivity.values();
  return e;
}

nlohmann::ordered_json axis_json(double lo, double hi, int n, bool periodic) {
  return nlohmann::ordered_json::array({lo, hi, n, periodic});
}

}  // namespace

GeometryReport verify_surface(const ImmersionJet& jet, const std::string& surface_id,
                              const VerifyOptions& options) {
  const bool analytic = jet.source == JetSource::analytic;
  const ParamGrid& grid = jet.grid;
  const double margin_u = options.margin ? (*options.margin)[0] : 8.0 * grid.hu();
  const double margin_v = options.margin ? (*options.margin)[1] : 8.0 * grid.hv();
  const double eps_pu = analytic ? 1e-8 : 1e-4;

  const Evaluation fine = evaluate(jet, margin_u, margin_v, eps_pu);
  if (std::count(fine.mask.begin(), fine.mask.end(), 1) == 0)
    throw ConfigError("grid too coarse: the boundary margin leaves no interior nodes");

  std::optional<Evaluation> coarse;
  std::string probe = "none (analytic jets)";
  if (!analytic) {
    if (options.tol_fd) {
      probe = "fixed tolerance";
    } else {
      try {
        coarse = evaluate(subsample(jet, 2), margin_u, margin_v, eps_pu);
        probe = "coarse grid at twice the spacing";
      } catch (const ConfigError&) {
        probe = "unavailable (grid cannot be halved); fallback tolerance";
      }
    }
  }

  // tolerance per residual
  std::map<std::string, double> tol, trunc;
  for (const auto& r : fine.raws) {
    const double scale = std::pow(1.0 + fine.kappa, r.dim) * (r.pointwise.empty() ? 1.0 + fine.area : 1.0);
    if (analytic) {
      tol[r.name] = options.tol_analytic * scale;
      trunc[r.name] = 0.0;
    } else if (options.tol_fd) {
      tol[r.name] = *options.tol_fd;
      trunc[r.name] = *options.tol_fd / 10.0;
    } else if (coarse && coarse->find(r.name)) {
      const double t = std::abs(coarse->find(r.name)->linf - r.linf) / 3.0;
      trunc[r.name] = t;
      tol[r.name] = 10.0 * t + 1e-9 * scale;
    } else {
      tol[r.name] = 1e-3 * scale;
      trunc[r.name] = 1e-4 * scale;
    }
  }
  auto value = [&](const std::string& name) { return fine.find(name)->linf; };
  auto passes = [&](const std::string& name) { return value(name) <= tol.at(name); };

  GeometryReport rep;
  const bool bicons = passes("div_s2");
  const bool parallel = passes("nabla_ah");

  // equivalence matrix: biconservative, |H| constant, Hopf holomorphic, Codazzi
  const std::array<std::string, 4> eq = {"div_s2", "grad_h2", "hopf_ah_holomorphicity",
                                         "codazzi_ah"};
  std::array<bool, 4> eq_pass{};
  double implied = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (analytic) {
      eq_pass[i] = value(eq[i]) <= options.equivalence_pass;
    } else {
      eq_pass[i] = passes(eq[i]);
      implied = std::max(implied, trunc.at(eq[i]));
    }
  }
  const double implied_tol = analytic ? options.equivalence_implied : 10.0 * implied + 1e-9 * std::pow(1.0 + fine.kappa, 3);
  bool matrix_ok = true;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (!(eq_pass[i] && eq_pass[j])) continue;
      bool all = true;
      for (int k = 0; k < 4; ++k) all = all && value(eq[k]) <= implied_tol;
      table.push_back({{"given", nlohmann::ordered_json::array({eq[i], eq[j]})}, {"implied_hold", all}});
      matrix_ok = matrix_ok && all;
    }

  std::vector<std::string> failed;
  for (const auto& r : fine.raws) {
    bool asserted = false;
    switch (r.role) {
      case Role::identity: asserted = true; break;
      case Role::condition: asserted = false; break;
      case Role::if_bicons: asserted = bicons; break;
      case Role::if_parallel: asserted = parallel; break;
    }
    if (asserted && !(r.linf <= tol.at(r.name))) failed.push_back(r.name);
    rep.residuals.push_back({r.name, r.key, r.l2, r.linf, asserted, r.linf <= tol.at(r.name)});
  }

  const bool lambda_const = passes("lambda_spread");
  const bool witness = !(lambda_const && bicons) || parallel;
  if (!witness) failed.push_back("constant_lambda_witness");
  if (!matrix_ok) failed.push_back("equivalence_matrix");

  // pseudoumbilical nodes carry a vanishing positivity quantity
  double pu_positivity = 0.0;
  std::size_t pu_count = 0, mask_count = 0;
  for (std::size_t n = 0; n < fine.mask.size(); ++n) {
    if (!fine.mask[n]) continue;
    ++mask_count;
    if (fine.pc.pseudoumbilical[n]) {
      ++pu_count;
      pu_positivity = std::max(pu_positivity, std::abs(fine.positivity[n]));
    }
  }
  const double pu_tol = analytic ? 1e-8 * std::pow(1.0 + fine.kappa, 4) : 1e-3 * std::pow(1.0 + fine.kappa, 4);
  const bool positivity_ok = passes("positivity_violation") && pu_positivity <= pu_tol;

  // --- summaries
  auto range = [&](const std::vector<double>& v) { return masked_range(v, fine.mask); };
  std::vector<double> hnorm = fine.h2;
  for (auto& x : hnorm) x = std::sqrt(std::max(0.0, x));
  const auto [hlo, hhi] = range(hnorm);
  const auto [l1lo, l1hi] = range(fine.pc.lambda1);
  const auto [l2lo, l2hi] = range(fine.pc.lambda2);
  const auto [mulo, muhi] = range(fine.pc.mu);
  const auto [klo, khi] = range(fine.k);
  const auto [dulo, duhi] = range(fine.dh_u);
  const auto [dvlo, dvhi] = range(fine.dh_v);
  const auto [plo, phi] = range(fine.positivity);
  (void)dulo; (void)dvlo; (void)phi;
  rep.summaries = {{"h_min", hlo},
                   {"h_max", hhi},
                   {"lambda1_min", l1lo},
                   {"lambda1_max", l1hi},
                   {"lambda2_min", l2lo},
                   {"lambda2_max", l2hi},
                   {"mu_min", mulo},
                   {"mu_max", muhi},
                   {"K_min", klo},
                   {"K_max", khi},
                   {"pseudoumbilical_fraction",
                    mask_count ? static_cast<double>(pu_count) / static_cast<double>(mask_count) : 0.0},
                   {"normal_connection_h_u_max", duhi},
                   {"normal_connection_h_v_max", dvhi},
                   {"positivity_min", plo},
                   {"area", fine.area},
                   {"curvature_scale", fine.kappa}};
  if (lambda_const) {
    const double tol_const = analytic ? 1e-8 : std::max(tol.at("lambda_spread"), 1e-12);
    for (auto [mode, tag] : {std::pair{TargetMode::shape_operator, "spaceform_ah"},
                             std::pair{TargetMode::stress, "spaceform_s2"}}) {
      try {
        const SpaceFormTarget t =
            derive_spaceform_target(fine.pc, *fine.k_field, fine.mask, mode, tol_const);
        rep.summaries.push_back({std::string(tag) + "_c", t.curvature});
        rep.summaries.push_back({std::string(tag) + "_h", t.mean_curvature});
        rep.summaries.push_back({std::string(tag) + "_gauss_gap", t.gauss_gap});
      } catch (const ConfigError&) {
        // K not constant over the grid: no target
      }
    }
  }

  // --- flags
  rep.flags = {{"is_CMC", passes("grad_h2")},
               {"is_biconservative", bicons},
               {"is_PMC", passes("normal_connection_h")},
               {"AH_parallel", parallel},
               {"lambda_constant", lambda_const},
               {"is_isothermal", fine.isothermal},
               {"simons_hypothesis_met", bicons},
               {"equivalence_consistent", matrix_ok},
               {"constant_lambda_witness", witness},
               {"positivity_holds", positivity_ok},
               {"identities_hold", failed.empty()}};

  // --- meta
  auto& meta = rep.meta;
  meta["surface"] = surface_id;
  meta["ambient"] = {{"kind", jet.space.is_sphere() ? "sphere" : "euclidean"},
                     {"dim", jet.space.dim()},
                     {"radius", jet.space.is_sphere() ? jet.space.radius() : 0.0}};
  meta["grid"] = {{"u", axis_json(grid.u_min(), grid.u_max(), grid.nu(), grid.periodic_u())},
                  {"v", axis_json(grid.v_min(), grid.v_max(), grid.nv(), grid.periodic_v())}};
  meta["jets"] = to_string(jet.source);
  meta["laplacian"] = "geometer (-div grad)";
  meta["boundary_margin"] =
      analytic ? nlohmann::ordered_json::array({0.0, 0.0})
               : nlohmann::ordered_json::array({grid.periodic_u() ? 0.0 : margin_u,
                                                grid.periodic_v() ? 0.0 : margin_v});
  meta["tolerance_source"] = probe;
  nlohmann::ordered_json tj = nlohmann::ordered_json::object();
  for (const auto& r : fine.raws) tj[r.name] = tol.at(r.name);
  meta["tolerances"] = tj;
  meta["equivalence_implied_tol"] = implied_tol;
  meta["equivalence_table"] = table;
  if (!fine.isothermal) meta["skipped"] = nlohmann::ordered_json::array({"hopf_ah_dzbar (chart not isothermal)"});
  if (!grid.doubly_periodic()) {
    auto& sk = meta["skipped"];
    if (sk.is_null()) sk = nlohmann::ordered_json::array();
    sk.push_back("integral formulas (grid not doubly periodic)");
  }
  meta["failed_assertions"] = failed;

  if (options.dump_fields) {
    rep.fields.push_back({"h_norm", hnorm});
    rep.fields.push_back({"gauss_curvature", fine.k});
    rep.fields.push_back({"lambda1", fine.pc.lambda1});
    rep.fields.push_back({"lambda2", fine.pc.lambda2});
    rep.fields.push_back({"mu", fine.pc.mu});
    rep.fields.push_back({"div_s2", fine.find("div_s2")->pointwise});
  }
  return rep;
}

}  // namespace bicons
