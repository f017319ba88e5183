#include "bicons/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bicons {

SymTensor operator+(const SymTensor& a, const SymTensor& b) {
  return {a.t11 + b.t11, a.t12 + b.t12, a.t22 + b.t22};
}
SymTensor operator-(const SymTensor& a, const SymTensor& b) {
  return {a.t11 - b.t11, a.t12 - b.t12, a.t22 - b.t22};
}
SymTensor operator*(const Field& s, const SymTensor& a) { return {s * a.t11, s * a.t12, s * a.t22}; }
SymTensor operator*(double s, const SymTensor& a) { return {s * a.t11, s * a.t12, s * a.t22}; }

Field constant_like(const Field& like, double c) {
  return Field(like.grid(), like.source(), like.order(), c);
}

Christoffel christoffel_isothermal(const Field& rho) {
  const Field rx = partial(rho, Axis::u);
  const Field ry = partial(rho, Axis::v);
  Christoffel g;
  g(0, 0, 0) = rx;
  g(1, 0, 1) = rx;
  g(0, 1, 1) = -rx;
  g(1, 1, 1) = ry;
  g(0, 0, 1) = ry;
  g(1, 0, 0) = -ry;
  return g;
}

// ---------------------------------------------------------------------------

Metric::Metric(SymTensor g, Christoffel gamma) : g_(std::move(g)), gamma_(std::move(gamma)) {
  det_ = g_.t11 * g_.t22 - g_.t12 * g_.t12;
  for (std::size_t n = 0; n < det_.size(); ++n) {
    const double d = det_.value(n);
    if (!(d > 0.0) || !std::isfinite(d))
      throw NumericalError("metric: degenerate or non-finite at node " + std::to_string(n));
  }
  const Field inv_det = 1.0 / det_;
  inv_ = {g_.t22 * inv_det, -(g_.t12 * inv_det), g_.t11 * inv_det};
  sqrt_det_ = sqrt(det_);
}

Metric Metric::from_first_kind(const SymTensor& g, const Christoffel& first) {
  const Field det = g.t11 * g.t22 - g.t12 * g.t12;
  for (std::size_t n = 0; n < det.size(); ++n)
    if (!(det.value(n) > 0.0))
      throw NumericalError("metric: degenerate at node " + std::to_string(n));
  const Field inv_det = 1.0 / det;
  const SymTensor inv{g.t22 * inv_det, -(g.t12 * inv_det), g.t11 * inv_det};
  Christoffel second;
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        second(l, i, j) = inv(l, 0) * first(0, i, j) + inv(l, 1) * first(1, i, j);
  return Metric(g, second);
}

Metric Metric::from_components(const SymTensor& g) {
  const std::array<SymTensor, 2> dg = {
      SymTensor{partial(g.t11, Axis::u), partial(g.t12, Axis::u), partial(g.t22, Axis::u)},
      SymTensor{partial(g.t11, Axis::v), partial(g.t12, Axis::v), partial(g.t22, Axis::v)}};
  Christoffel first;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        first(k, i, j) = 0.5 * (dg[i](j, k) + dg[j](i, k) - dg[k](i, j));
  return from_first_kind(g, first);
}

Metric Metric::conformal(const ConformalChart& chart) {
  const Field e2 = exp(2.0 * chart.rho);
  const Field zero = constant_like(e2, 0.0);
  return Metric(SymTensor{e2, zero, e2}, christoffel_isothermal(chart.rho));
}

Metric Metric::subsampled(int factor) const {
  SymTensor g{subsample(g_.t11, factor), subsample(g_.t12, factor), subsample(g_.t22, factor)};
  Christoffel c;
  for (std::size_t s = 0; s < c.data.size(); ++s) c.data[s] = subsample(gamma_.data[s], factor);
  return Metric(std::move(g), std::move(c));
}

bool Metric::isothermal(double rel_tol) const {
  for (std::size_t n = 0; n < det_.size(); ++n) {
    const double a = g_.t11.value(n), b = g_.t22.value(n), c = g_.t12.value(n);
    const double scale = 0.5 * (std::abs(a) + std::abs(b));
    if (std::abs(a - b) > rel_tol * scale || std::abs(c) > rel_tol * scale) return false;
  }
  return true;
}

OrthonormalFrame orthonormal_frame(const Metric& m) {
  const SymTensor& g = m.g();
  const Field s11 = sqrt(g.t11);
  const Field inv_sd = 1.0 / m.sqrt_det();
  return {1.0 / s11, constant_like(s11, 0.0), -(g.t12 / s11) * inv_sd, s11 * inv_sd};
}

// ---------------------------------------------------------------------------

Field trace(const SymTensor& t, const Metric& m) {
  const SymTensor& gi = m.inverse();
  return gi.t11 * t.t11 + 2.0 * (gi.t12 * t.t12) + gi.t22 * t.t22;
}

namespace {

SymTensor raise_both(const SymTensor& t, const Metric& m) {
  const SymTensor& gi = m.inverse();
  const Field m11 = gi.t11 * t.t11 + gi.t12 * t.t12;
  const Field m12 = gi.t11 * t.t12 + gi.t12 * t.t22;
  const Field m21 = gi.t12 * t.t11 + gi.t22 * t.t12;
  const Field m22 = gi.t12 * t.t12 + gi.t22 * t.t22;
  return {m11 * gi.t11 + m12 * gi.t12, m11 * gi.t12 + m12 * gi.t22, m21 * gi.t12 + m22 * gi.t22};
}

Field contract_raised(const SymTensor& up, const SymTensor& s) {
  return up.t11 * s.t11 + 2.0 * (up.t12 * s.t12) + up.t22 * s.t22;
}

}  // namespace

Field inner(const SymTensor& t, const SymTensor& s, const Metric& m) {
  return contract_raised(raise_both(t, m), s);
}

Field norm2(const SymTensor& t, const Metric& m) { return inner(t, t, m); }

TangentField raise(const TangentField& w, const Metric& m) {
  const SymTensor& gi = m.inverse();
  return {gi.t11 * w.u + gi.t12 * w.v, gi.t12 * w.u + gi.t22 * w.v};
}

Field inner(const TangentField& a, const TangentField& b, const Metric& m) {
  const TangentField up = raise(a, m);
  return up.u * b.u + up.v * b.v;
}

Field norm2(const TangentField& w, const Metric& m) { return inner(w, w, m); }

TangentField apply(const SymTensor& t, const TangentField& w, const Metric& m) {
  const TangentField up = raise(w, m);
  return {t.t11 * up.u + t.t12 * up.v, t.t12 * up.u + t.t22 * up.v};
}

// ---------------------------------------------------------------------------

TensorDerivative covariant_derivative(const SymTensor& t, const Metric& m) {
  TensorDerivative d;
  for (int k = 0; k < 2; ++k) {
    const Axis ax = k == 0 ? Axis::u : Axis::v;
    Field c[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        Field x = partial(t(i, j), ax);
        for (int l = 0; l < 2; ++l) {
          x -= m.gamma(l, k, i) * t(l, j);
          x -= m.gamma(l, k, j) * t(i, l);
        }
        c[i][j] = std::move(x);
      }
    }
    d.along[k] = SymTensor{c[0][0], c[0][1], c[1][1]};
  }
  return d;
}

Field inner(const TensorDerivative& a, const TensorDerivative& b, const Metric& m) {
  const SymTensor& gi = m.inverse();
  return gi.t11 * inner(a.along[0], b.along[0], m) +
         gi.t12 * (inner(a.along[0], b.along[1], m) + inner(a.along[1], b.along[0], m)) +
         gi.t22 * inner(a.along[1], b.along[1], m);
}

Field norm2(const TensorDerivative& d, const Metric& m) {
  const SymTensor& gi = m.inverse();
  return gi.t11 * norm2(d.along[0], m) + 2.0 * (gi.t12 * inner(d.along[0], d.along[1], m)) +
         gi.t22 * norm2(d.along[1], m);
}

TangentField codazzi_defect(const TensorDerivative& d) {
  return {d.along[0](1, 0) - d.along[1](0, 0), d.along[0](1, 1) - d.along[1](0, 1)};
}

TangentField codazzi_defect(const SymTensor& t, const Metric& m) {
  return codazzi_defect(covariant_derivative(t, m));
}

TangentField divergence_trace(const TensorDerivative& d, const Metric& m) {
  const SymTensor& gi = m.inverse();
  TangentField out;
  for (int j = 0; j < 2; ++j) {
    Field s = gi(0, 0) * d.along[0](0, j);
    s += gi(0, 1) * d.along[0](1, j);
    s += gi(1, 0) * d.along[1](0, j);
    s += gi(1, 1) * d.along[1](1, j);
    out[j] = std::move(s);
  }
  return out;
}

namespace {

// Divergence as grad t - Z, with Z assembled from
// Z_12 = (nabla_{X_1} T)(X_2) - (nabla_{X_2} T)(X_1) in the orthonormal frame
// obtained by Gram-Schmidt from (d_u, d_v).
TangentField divergence_frame(const SymTensor& t, const TensorDerivative& d, const Metric& m) {
  const SymTensor& g = m.g();
  const OrthonormalFrame f = orthonormal_frame(m);
  const Field &e1u = f.e1u, &e1v = f.e1v, &e2u = f.e2u, &e2v = f.e2v;
  const Field* e1[2] = {&e1u, &e1v};
  const Field* e2[2] = {&e2u, &e2v};

  // (nabla_X T)(Y) as a covector: X^k Y^i (nabla_k T)_ij
  auto derivative_applied = [&](const Field* const x[2], const Field* const y[2]) {
    TangentField r;
    for (int j = 0; j < 2; ++j) {
      Field s = constant_like(d.along[0](0, j), 0.0);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i) s += (*x[k]) * (*y[i]) * d.along[k](i, j);
      r[j] = std::move(s);
    }
    return r;
  };
  const TangentField z12 = derivative_applied(e1, e2) - derivative_applied(e2, e1);
  const Field z12_e1 = z12.u * e1u + z12.v * e1v;
  const Field z12_e2 = z12.u * e2u + z12.v * e2v;
  // lowered frame vectors
  const TangentField e1_flat{g.t11 * e1u + g.t12 * e1v, g.t12 * e1u + g.t22 * e1v};
  const TangentField e2_flat{g.t11 * e2u + g.t12 * e2v, g.t12 * e2u + g.t22 * e2v};
  const TangentField z{z12_e2 * e1_flat.u - z12_e1 * e2_flat.u,
                       z12_e2 * e1_flat.v - z12_e1 * e2_flat.v};
  return gradient(trace(t, m)) - z;
}

double gap_linf(const TangentField& a, const TangentField& b, const Metric& m) {
  return linf(pointwise_norm(a - b, m), full_mask(m.grid()));
}

}  // namespace

DivergenceResult divergence(const SymTensor& t, const Metric& m) {
  const TensorDerivative d = covariant_derivative(t, m);
  DivergenceResult r;
  r.value = divergence_trace(d, m);
  r.frame_route = divergence_frame(t, d, m);
  r.route_gap = gap_linf(r.value, r.frame_route, m);
  const double scale = 1.0 + linf(pointwise_norm(r.value, m), full_mask(m.grid())) +
                       linf(pointwise_norm(t, m), full_mask(m.grid()));
  if (t.t11.analytic()) {
    if (!(r.route_gap <= 1e-8 * scale))
      throw ConsistencyError("divergence: routes disagree by " + std::to_string(r.route_gap));
    return r;
  }
  // FD: compare against the gap observed at twice the spacing.
  double coarse_gap = -1.0;
  try {
    const Metric mc = m.subsampled(2);
    const SymTensor tc{subsample(t.t11, 2), subsample(t.t12, 2), subsample(t.t22, 2)};
    const TensorDerivative dc = covariant_derivative(tc, mc);
    coarse_gap = gap_linf(divergence_trace(dc, mc), divergence_frame(tc, dc, mc), mc);
  } catch (const ConfigError&) {
    // grid cannot be coarsened; no truncation estimate available
  }
  if (coarse_gap >= 0.0 && !(r.route_gap <= 10.0 * coarse_gap + 1e-10 * scale))
    throw ConsistencyError("divergence: route gap " + std::to_string(r.route_gap) +
                           " exceeds 10x the coarse-grid gap " + std::to_string(coarse_gap));
  return r;
}

Field divergence(const TangentField& w, const Metric& m) {
  const SymTensor& gi = m.inverse();
  Field s = constant_like(w.u, 0.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Field c = partial(w[j], i == 0 ? Axis::u : Axis::v);
      c -= m.gamma(0, i, j) * w.u;
      c -= m.gamma(1, i, j) * w.v;
      s += gi(i, j) * c;
    }
  }
  return s;
}

TangentField gradient(const Field& f) { return {partial(f, Axis::u), partial(f, Axis::v)}; }

SymTensor hessian(const Field& f, const Metric& m) {
  const Field fu = partial(f, Axis::u), fv = partial(f, Axis::v);
  auto comp = [&](const Field& second, int i, int j) {
    return second - m.gamma(0, i, j) * fu - m.gamma(1, i, j) * fv;
  };
  return {comp(partial2(f, Axis::u), 0, 0), comp(partial_uv(f), 0, 1),
          comp(partial2(f, Axis::v), 1, 1)};
}

Field laplacian(const Field& f, const Metric& m) { return -trace(hessian(f, m), m); }

SymTensor rough_laplacian(const SymTensor& t, const Metric& m) {
  const TensorDerivative d = covariant_derivative(t, m);
  const SymTensor& gi = m.inverse();
  Field out[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      Field acc;
      for (int k = 0; k < 2; ++k) {
        const Axis ak = k == 0 ? Axis::u : Axis::v;
        for (int l = 0; l < 2; ++l) {
          // (nabla^2 T)(d_k, d_l; d_i, d_j)
          Field x = partial(d.along[l](i, j), ak);
          for (int p = 0; p < 2; ++p) {
            x -= m.gamma(p, k, l) * d.along[p](i, j);
            x -= m.gamma(p, k, i) * d.along[l](p, j);
            x -= m.gamma(p, k, j) * d.along[l](i, p);
          }
          Field term = gi(k, l) * x;
          if (acc.empty()) acc = std::move(term);
          else acc += term;
        }
      }
      out[i][j] = -acc;
    }
  }
  return {out[0][0], out[0][1], out[1][1]};
}

Field gauss_curvature(const Metric& m) {
  Field r[2];
  for (int a = 0; a < 2; ++a) {
    Field x = partial(m.gamma(a, 1, 1), Axis::u) - partial(m.gamma(a, 0, 1), Axis::v);
    for (int p = 0; p < 2; ++p) {
      x += m.gamma(p, 1, 1) * m.gamma(a, 0, p);
      x -= m.gamma(p, 0, 1) * m.gamma(a, 1, p);
    }
    r[a] = std::move(x);
  }
  return (m.g().t11 * r[0] + m.g().t12 * r[1]) / m.det();
}

Field gauss_curvature_conformal(const Field& rho) {
  return -(exp(-2.0 * rho) * euclid_laplacian(rho));
}

// ---------------------------------------------------------------------------

namespace {

void require_isothermal(const Metric& m) {
  const double tol = m.source() == JetSource::analytic ? 1e-8 : 5e-2;
  if (!m.isothermal(tol)) throw ConfigError("Hopf function requires an isothermal chart");
}

}  // namespace

ComplexField hopf_differential(const SymTensor& t, const Metric& m) {
  require_isothermal(m);
  return {0.25 * (t.t11 - t.t22), -0.5 * t.t12};
}

HolomorphicityResidual holomorphicity_residual(const SymTensor& t, const Metric& m) {
  const ComplexField h = hopf_differential(t, m);
  HolomorphicityResidual r;
  r.direct.re = 0.5 * (partial(h.re, Axis::u) - partial(h.im, Axis::v));
  r.direct.im = 0.5 * (partial(h.im, Axis::u) + partial(h.re, Axis::v));
  const Field tr = trace(t, m);
  const TangentField div = divergence_trace(covariant_derivative(t, m), m);
  const Field conf = 0.125 * (0.5 * (m.g().t11 + m.g().t22));
  r.closed_form.re = conf * (2.0 * div.u - partial(tr, Axis::u));
  r.closed_form.im = conf * (partial(tr, Axis::v) - 2.0 * div.v);
  return r;
}

// ---------------------------------------------------------------------------

Field weitzenbock_pointwise_residual(const SymTensor& t, const SymTensor& s, const Metric& m) {
  const TensorDerivative dt = covariant_derivative(t, m);
  const TensorDerivative ds = covariant_derivative(s, m);
  const TangentField z{inner(dt.along[0], s, m), inner(dt.along[1], s, m)};
  return inner(rough_laplacian(t, m), s, m) - inner(dt, ds, m) + divergence(z, m);
}

double weitzenbock_pairing_residual(const SymTensor& t, const SymTensor& s, const Metric& m) {
  if (!m.grid().doubly_periodic())
    throw ConfigError("integrated pairing identity requires a doubly periodic grid");
  const std::vector<double> w = area_weights(m);
  const double lhs = integrate(inner(rough_laplacian(t, m), s, m).values(), w, m.grid());
  const double rhs =
      integrate(inner(covariant_derivative(t, m), covariant_derivative(s, m), m).values(), w,
                m.grid());
  return std::abs(lhs - rhs);
}

Field div_T_grad_alpha_residual(const SymTensor& t, const Field& alpha, const Metric& m) {
  const TangentField da = gradient(alpha);
  const TangentField div_t = divergence_trace(covariant_derivative(t, m), m);
  return divergence(apply(t, da, m), m) - inner(div_t, da, m) - inner(t, hessian(alpha, m), m);
}

SymTensor trace_nabla2_residual(const SymTensor& t, const Metric& m) {
  const Field k = gauss_curvature(m);
  const Field tr = trace(t, m);
  const Field lap_t = laplacian(tr, m);
  const SymTensor lhs = -1.0 * rough_laplacian(t, m);
  const SymTensor rhs =
      (2.0 * k) * t - (tr * k + lap_t) * m.g() - hessian(tr, m);
  return lhs - rhs;
}

std::vector<double> pointwise_norm(const TangentField& w, const Metric& m) {
  std::vector<double> v = norm2(w, m).values();
  for (auto& x : v) x = std::sqrt(std::max(0.0, x));
  return v;
}

std::vector<double> pointwise_norm(const SymTensor& t, const Metric& m) {
  std::vector<double> v = norm2(t, m).values();
  for (auto& x : v) x = std::sqrt(std::max(0.0, x));
  return v;
}

std::vector<double> area_weights(const Metric& m) { return m.sqrt_det().values(); }

}  // namespace bicons
