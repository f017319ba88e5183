#include "bicons/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bicons {

ImmersionJet make_immersion(const AmbientSpace& space, AmbientField x) {
  if (static_cast<int>(x.dim()) != space.coordinate_count())
    throw ConfigError("immersion: expected " + std::to_string(space.coordinate_count()) +
                      " coordinates, got " + std::to_string(x.dim()));
  const ParamGrid grid = x[0].grid();
  const JetSource source = x[0].source();
  for (const auto& c : x.c) {
    if (!(c.grid() == grid) || c.source() != source)
      throw ConfigError("immersion: coordinates disagree on grid or derivative source");
    for (std::size_t n = 0; n < c.size(); ++n)
      if (!std::isfinite(c.value(n)))
        throw ConfigError("immersion: non-finite position at node " + std::to_string(n));
  }
  if (space.is_sphere()) {
    const double r2 = space.radius() * space.radius();
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const double d = x.at(n).squaredNorm();
      if (std::abs(d - r2) > 1e-6 * r2)
        throw ConfigError("immersion: node " + std::to_string(n) + " is off the ambient sphere");
    }
  }
  return {grid, space, std::move(x), source};
}

ImmersionJet subsample(const ImmersionJet& jet, int factor) {
  AmbientField x;
  for (const auto& c : jet.x.c) x.c.push_back(subsample(c, factor));
  const ParamGrid g = x[0].grid();
  return {g, jet.space, std::move(x), jet.source};
}

SymTensor induced_metric(const AmbientField& xu, const AmbientField& xv) {
  SymTensor g{dot(xu, xu), dot(xu, xv), dot(xv, xv)};
  for (std::size_t n = 0; n < g.t11.size(); ++n) {
    const double a = g.t11.value(n), b = g.t12.value(n), c = g.t22.value(n);
    if (!(a * c - b * b > 1e-14 * a * c))
      throw NumericalError("immersion degenerate at node " + std::to_string(n));
  }
  return g;
}

namespace {

AmbientField normal_part(const AmbientField& w, const AmbientField& x, const AmbientField& xu,
                         const AmbientField& xv, const Metric& m, const AmbientSpace& space) {
  const TangentField cov{dot(w, xu), dot(w, xv)};
  const TangentField up = raise(cov, m);
  AmbientField r = w - (up.u * xu + up.v * xv);
  if (space.is_sphere()) {
    const double inv_r2 = 1.0 / (space.radius() * space.radius());
    r = r - (inv_r2 * dot(w, x)) * x;
  }
  return r;
}

}  // namespace

AmbientField normal_part(const AmbientField& w, const SurfaceGeometry& geo) {
  return normal_part(w, geo.jet().x, geo.xu(), geo.xv(), geo.metric(), geo.space());
}

SurfaceGeometry compute_geometry(const ImmersionJet& jet) {
  SurfaceGeometry s(jet);
  const AmbientField& x = jet.x;
  s.xu_ = partial(x, Axis::u);
  s.xv_ = partial(x, Axis::v);
  const SymTensor g = induced_metric(s.xu_, s.xv_);

  const AmbientField xuu = partial2(x, Axis::u);
  const AmbientField xuv = partial_uv(x);
  const AmbientField xvv = partial2(x, Axis::v);
  const AmbientField* second[3] = {&xuu, &xuv, &xvv};
  auto xij = [&](int i, int j) -> const AmbientField& { return *second[i + j]; };

  // Gamma_{k,ij} = <X_ij, X_k>; the position term of the sphere is normal
  // to X_k and drops out.
  Christoffel first;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) first(k, i, j) = dot(xij(i, j), s.tangent(k));
  s.metric_.emplace(Metric::from_first_kind(g, first));
  const Metric& m = *s.metric_;

  s.b_ = {normal_part(xuu, x, s.xu_, s.xv_, m, jet.space),
          normal_part(xuv, x, s.xu_, s.xv_, m, jet.space),
          normal_part(xvv, x, s.xu_, s.xv_, m, jet.space)};

  const SymTensor& gi = m.inverse();
  s.h_ = 0.5 * (gi.t11 * s.b_.b11 + (2.0 * gi.t12) * s.b_.b12 + gi.t22 * s.b_.b22);
  s.h2_ = dot(s.h_, s.h_);
  s.a_h_ = {dot(s.b_.b11, s.h_), dot(s.b_.b12, s.h_), dot(s.b_.b22, s.h_)};

  for (int i = 0; i < 2; ++i)
    s.dh_[i] = normal_part(partial(s.h_, i == 0 ? Axis::u : Axis::v), x, s.xu_, s.xv_, m,
                           jet.space);

  s.k_ = jet.space.curvature() +
         (dot(s.b_.b11, s.b_.b22) - dot(s.b_.b12, s.b_.b12)) / m.det();
  return s;
}

SymTensor shape_operator(const SurfaceGeometry& geo, const AmbientField& xi) {
  const double tol = geo.source() == JetSource::analytic ? 1e-8 : 1e-6;
  const Field a = dot(xi, geo.xu()), b = dot(xi, geo.xv());
  const Field nxi = dot(xi, xi);
  const Field nu = dot(geo.xu(), geo.xu()), nv = dot(geo.xv(), geo.xv());
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double len = std::sqrt(nxi.value(n));
    const double defect = std::abs(a.value(n)) / std::sqrt(nu.value(n)) +
                          std::abs(b.value(n)) / std::sqrt(nv.value(n));
    if (defect > tol * (1.0 + len))
      throw std::invalid_argument("shape_operator: field not normal at node " + std::to_string(n));
  }
  const NormalForm& bf = geo.second_fundamental_form();
  return {dot(bf.b11, xi), dot(bf.b12, xi), dot(bf.b22, xi)};
}

double mean_curvature_normality(const SurfaceGeometry& geo) {
  const AmbientField& h = geo.mean_curvature();
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Field d = dot(h, geo.tangent(i));
    const Field nt = dot(geo.tangent(i), geo.tangent(i));
    for (std::size_t n = 0; n < d.size(); ++n) {
      const double nh = std::sqrt(geo.mean_curvature2().value(n));
      if (nh == 0.0) continue;
      worst = std::max(worst, std::abs(d.value(n)) / (nh * std::sqrt(nt.value(n))));
    }
  }
  return worst;
}

}  // namespace bicons
