#pragma once

// Extrinsic geometry of an immersed surface X(u, v) in R^n or S^n(r).

#include <array>
#include <optional>
#include <string>

#include "bicons/ambient.hpp"
#include "bicons/tensor.hpp"

namespace bicons {

/// Position of the immersion with its derivative source. Analytic positions
/// carry jets (derivatives up to the jet order); finite-difference positions
/// carry node values only.
struct ImmersionJet {
  ParamGrid grid;
  AmbientSpace space;
  AmbientField x;
  JetSource source;
};

/// Validates coordinate count, grid agreement, finiteness and (for the
/// sphere) that the points lie on the sphere.
ImmersionJet make_immersion(const AmbientSpace& space, AmbientField x);

/// Restriction to every factor-th node; analytic jets are kept.
ImmersionJet subsample(const ImmersionJet& jet, int factor);

/// Normal-valued symmetric bilinear form, components at (i, j).
struct NormalForm {
  AmbientField b11, b12, b22;
  const AmbientField& operator()(int i, int j) const {
    return i == 0 ? (j == 0 ? b11 : b12) : (j == 0 ? b12 : b22);
  }
};

class SurfaceGeometry {
 public:
  const ImmersionJet& jet() const { return jet_; }
  const ParamGrid& grid() const { return jet_.grid; }
  const AmbientSpace& space() const { return jet_.space; }
  JetSource source() const { return jet_.source; }

  const AmbientField& xu() const { return xu_; }
  const AmbientField& xv() const { return xv_; }
  const AmbientField& tangent(int i) const { return i == 0 ? xu_ : xv_; }
  const Metric& metric() const { return *metric_; }
  const NormalForm& second_fundamental_form() const { return b_; }
  const AmbientField& mean_curvature() const { return h_; }
  /// |H|^2
  const Field& mean_curvature2() const { return h2_; }
  /// <B(d_i, d_j), H>, stored covariantly.
  const SymTensor& shape_operator_H() const { return a_h_; }
  /// nabla-perp_{d_u} H and nabla-perp_{d_v} H.
  const AmbientField& normal_derivative_H(int i) const { return dh_[i]; }
  /// Gauss equation: c + (<B_11, B_22> - |B_12|^2) / det g.
  const Field& gauss_curvature() const { return k_; }

  friend SurfaceGeometry compute_geometry(const ImmersionJet& jet);

 private:
  explicit SurfaceGeometry(ImmersionJet jet) : jet_(std::move(jet)) {}
  ImmersionJet jet_;
  AmbientField xu_, xv_;
  std::optional<Metric> metric_;
  NormalForm b_;
  AmbientField h_;
  Field h2_;
  SymTensor a_h_;
  std::array<AmbientField, 2> dh_;
  Field k_;
};

SurfaceGeometry compute_geometry(const ImmersionJet& jet);

/// g_ij = <X_i, X_j>; throws NumericalError naming the first degenerate node.
SymTensor induced_metric(const AmbientField& xu, const AmbientField& xv);

/// W minus its tangential part, and (for the sphere) minus its component
/// along the position vector.
AmbientField normal_part(const AmbientField& w, const SurfaceGeometry& geo);

/// <B(d_i, d_j), xi>. Throws std::invalid_argument when xi is not normal.
SymTensor shape_operator(const SurfaceGeometry& geo, const AmbientField& xi);

/// Largest |<H, X_i>| / (|H| |X_i|) over the grid (0 where H vanishes).
double mean_curvature_normality(const SurfaceGeometry& geo);

}  // namespace bicons
