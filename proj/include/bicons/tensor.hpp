#pragma once

// Intrinsic calculus for symmetric 2-tensors on a surface chart.
//
// Tensors are stored covariantly ((0,2) components T_ij); the (1,1) operator
// is T^i_j = g^ik T_kj and is never materialised. Tangent fields are stored
// by their covariant components (see TangentField).
//
// Sign conventions: laplacian() is the geometer's operator -div grad, and
// rough_laplacian() is -trace nabla^2. euclid_laplacian() in grid.hpp is the
// analyst's flat operator.

#include <array>

#include "bicons/grid.hpp"

namespace bicons {

struct SymTensor {
  Field t11, t12, t22;

  const Field& operator()(int i, int j) const {
    return i == 0 ? (j == 0 ? t11 : t12) : (j == 0 ? t12 : t22);
  }
  const ParamGrid& grid() const { return t11.grid(); }
};

SymTensor operator+(const SymTensor& a, const SymTensor& b);
SymTensor operator-(const SymTensor& a, const SymTensor& b);
SymTensor operator*(const Field& s, const SymTensor& a);
SymTensor operator*(double s, const SymTensor& a);

/// Gamma^k_ij, symmetric in (i, j).
struct Christoffel {
  std::array<Field, 6> data;  // k*3 + {00, 01, 11}

  static int slot(int k, int i, int j) { return k * 3 + i + j; }
  const Field& operator()(int k, int i, int j) const { return data[slot(k, i, j)]; }
  Field& operator()(int k, int i, int j) { return data[slot(k, i, j)]; }
};

/// g = e^{2 rho} (dx^2 + dy^2).
struct ConformalChart {
  Field rho;
};

/// Christoffel symbols of an isothermal chart:
/// G^1_11 = G^2_12 = -G^1_22 = rho_x and G^2_22 = G^1_12 = -G^2_11 = rho_y.
Christoffel christoffel_isothermal(const Field& rho);

/// Riemannian metric of a chart with its inverse and connection.
class Metric {
 public:
  /// Connection from derivatives of the components.
  static Metric from_components(const SymTensor& g);
  /// Connection supplied as Christoffel symbols of the first kind
  /// first_kind(k, i, j) = Gamma_{k,ij} = <nabla_{d_i} d_j, d_k>.
  static Metric from_first_kind(const SymTensor& g, const Christoffel& first_kind);
  static Metric conformal(const ConformalChart& chart);

  const SymTensor& g() const { return g_; }
  const SymTensor& inverse() const { return inv_; }
  const Field& det() const { return det_; }
  const Field& sqrt_det() const { return sqrt_det_; }
  const Christoffel& christoffel() const { return gamma_; }
  const Field& gamma(int k, int i, int j) const { return gamma_(k, i, j); }
  const ParamGrid& grid() const { return g_.grid(); }
  JetSource source() const { return g_.t11.source(); }

  /// Restriction of all stored fields to every factor-th node.
  Metric subsampled(int factor) const;

  /// g_11 = g_22 and g_12 = 0 within rel_tol at every node.
  bool isothermal(double rel_tol) const;

 private:
  Metric(SymTensor g, Christoffel gamma);
  SymTensor g_, inv_;
  Field det_, sqrt_det_;
  Christoffel gamma_;
};

/// Contravariant components of the orthonormal frame obtained by
/// Gram-Schmidt from (d_u, d_v), starting from d_u.
struct OrthonormalFrame {
  Field e1u, e1v, e2u, e2v;
};
OrthonormalFrame orthonormal_frame(const Metric& m);

// --- algebra ---------------------------------------------------------------

Field trace(const SymTensor& t, const Metric& m);
/// <T, S> = g^ia g^jb T_ij S_ab.
Field inner(const SymTensor& t, const SymTensor& s, const Metric& m);
Field norm2(const SymTensor& t, const Metric& m);
/// Contravariant components of a tangent field.
TangentField raise(const TangentField& w, const Metric& m);
Field inner(const TangentField& a, const TangentField& b, const Metric& m);
Field norm2(const TangentField& w, const Metric& m);
/// Covector of T(W): T_jk W^k.
TangentField apply(const SymTensor& t, const TangentField& w, const Metric& m);

// --- derivatives -----------------------------------------------------------

/// (nabla_{d_k} T)_ij for k = u, v.
struct TensorDerivative {
  std::array<SymTensor, 2> along;
};

TensorDerivative covariant_derivative(const SymTensor& t, const Metric& m);
/// |nabla T|^2 = g^kl <nabla_k T, nabla_l T>.
Field norm2(const TensorDerivative& d, const Metric& m);
Field inner(const TensorDerivative& a, const TensorDerivative& b, const Metric& m);

/// (nabla_{d_u} T)(d_v) - (nabla_{d_v} T)(d_u); zero iff T is Codazzi.
TangentField codazzi_defect(const SymTensor& t, const Metric& m);
TangentField codazzi_defect(const TensorDerivative& d);

struct DivergenceResult {
  TangentField value;         // trace of nabla T
  TangentField frame_route;   // grad t - Z, Z built in an orthonormal frame
  double route_gap = 0.0;     // L-inf of |value - frame_route|_g
};

/// Div T by two routes; throws ConsistencyError when they disagree beyond
/// 10x the truncation level observed on the once-coarsened grid (FD fields)
/// or beyond 1e-8 relative (analytic fields).
DivergenceResult divergence(const SymTensor& t, const Metric& m);
/// Trace route only.
TangentField divergence_trace(const TensorDerivative& d, const Metric& m);
/// Divergence of a tangent field.
Field divergence(const TangentField& w, const Metric& m);

TangentField gradient(const Field& f);
SymTensor hessian(const Field& f, const Metric& m);
/// Geometer's Laplacian -div grad f.
Field laplacian(const Field& f, const Metric& m);

/// Delta^R T = -trace nabla^2 T.
SymTensor rough_laplacian(const SymTensor& t, const Metric& m);

/// Intrinsic Gaussian curvature from the connection.
Field gauss_curvature(const Metric& m);
/// K = -e^{-2 rho} (rho_xx + rho_yy).
Field gauss_curvature_conformal(const Field& rho);

// --- Hopf function -----------------------------------------------------------

struct ComplexField {
  Field re, im;
};

/// <T(d_z), d_z> = (T_11 - T_22 - 2i T_12) / 4 on an isothermal chart.
ComplexField hopf_differential(const SymTensor& t, const Metric& m);

struct HolomorphicityResidual {
  ComplexField direct;       // d_zbar of the Hopf function, differentiated directly
  ComplexField closed_form;  // (e^{2 rho}/8)(-t_x + 2<Div T,d_x> + i(t_y - 2<Div T,d_y>))
};

HolomorphicityResidual holomorphicity_residual(const SymTensor& t, const Metric& m);

// --- integral and pointwise identities ----------------------------------------

/// <Delta^R T, S> - <nabla T, nabla S> + Div Z with Z = <nabla_{X_i} T, S> X_i.
Field weitzenbock_pointwise_residual(const SymTensor& t, const SymTensor& s, const Metric& m);

/// |integral <Delta^R T, S> - integral <nabla T, nabla S>| over a doubly
/// periodic grid.
double weitzenbock_pairing_residual(const SymTensor& t, const SymTensor& s, const Metric& m);

/// Div(T(grad a)) - <Div T, grad a> - <T, Hess a>.
Field div_T_grad_alpha_residual(const SymTensor& t, const Field& alpha, const Metric& m);

/// trace nabla^2 T - (2KT - tKg - (Delta t) g - Hess t). Vanishes whenever
/// Div T = 0.
SymTensor trace_nabla2_residual(const SymTensor& t, const Metric& m);

/// Pointwise |w|_g as plain node values.
std::vector<double> pointwise_norm(const TangentField& w, const Metric& m);
std::vector<double> pointwise_norm(const SymTensor& t, const Metric& m);
/// Area weights sqrt(det g) as node values.
std::vector<double> area_weights(const Metric& m);

/// Constant field (value c) sharing grid, source and order with `like`.
Field constant_like(const Field& like, double c);

}  // namespace bicons
