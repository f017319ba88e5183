#pragma once

// Stress-bienergy tensor, biconservativity residuals and the derived
// identity suite for surfaces, plus the verification report.

#include <array>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bicons/immersion.hpp"

namespace bicons {

/// S_2 = -2|H|^2 g + 4 A_H (covariant).
SymTensor stress_bienergy(const SymTensor& a_h, const Field& h2, const Metric& m);

/// Building blocks of the biconservativity conditions, as covectors.
struct BiconservativityTerms {
  TangentField div_s2;           // trace route
  TangentField div_s2_frame;     // grad t - Z route
  TangentField div_ah;
  TangentField grad_h2;
  TangentField normal_trace;     // trace A_{nabla-perp H}: g^ij <B(d_j, .), nabla-perp_i H>
  TangentField curvature_trace;  // trace (R(., H).)^T
};

BiconservativityTerms biconservativity_terms(const SurfaceGeometry& geo);

/// The four equivalent conditions, each a covector that vanishes exactly
/// when the surface is biconservative.
struct BiconservativityResiduals {
  TangentField div_s2;      // Div S_2
  TangentField trace_form;  // trace A_{nabla-perp H} + trace nabla A_H + trace (R(., H).)^T
  TangentField grad_form;   // grad|H|^2 + 2 trace A_{nabla-perp H} + 2 trace (R(., H).)^T
  TangentField div_form;    // 2 trace nabla A_H - grad|H|^2
  /// Div S_2 - (-2 grad|H|^2 + 4 Div A_H); vanishes on every surface.
  TangentField div_s2_split;
  /// Div A_H - grad|H|^2 - trace A_{nabla-perp H} - trace (R(., H).)^T;
  /// vanishes on every surface (Codazzi equation).
  TangentField div_ah_split;
};

BiconservativityResiduals biconservativity_residuals(const BiconservativityTerms& t);
BiconservativityResiduals biconservativity_residuals(const SurfaceGeometry& geo);

/// Eigenvalues of the g-symmetric operator of A_H as plain node values.
struct PrincipalCurvatures {
  std::vector<double> lambda1, lambda2, mu;
  NodeMask pseudoumbilical;
};

/// Pseudoumbilical nodes: mu <= eps_pu (1 + |H|^2).
PrincipalCurvatures principal_curvatures(const SymTensor& a_h, const Metric& m, const Field& h2,
                                         double eps_pu);
/// Variant taking the mixed (1,1) components a^i_j; throws
/// std::invalid_argument when g a is not symmetric within `sym_tol`.
PrincipalCurvatures principal_curvatures(const std::array<Field, 4>& mixed, const Metric& m,
                                         const Field& h2, double eps_pu, double sym_tol);

/// (1/2) Delta|S_2|^2 minus the right-hand side of the Simons-type formula,
/// with alpha = |tau|^2 = 4|H|^2 and the geometer's Laplacian.
Field simons_residual(const SurfaceGeometry& geo);

struct IntegralCheck {
  double shape_operator_gap;  // int(|nabla A_H|^2 + 2K(|A_H|^2 - 2|H|^4)) - 5/2 int |grad|H|^2|^2
  double stress_gap;          // int(|nabla S_2|^2 + 2K(|S_2|^2 - alpha^2/2)) - int |grad alpha|^2
  std::vector<double> positivity;  // 2|S_2|^2 - alpha^2 per node
};

/// Doubly periodic grids only (ConfigError otherwise).
IntegralCheck integral_formula_check(const SurfaceGeometry& geo);

enum class TargetMode { shape_operator, stress, umbilical_shape_operator, umbilical_stress };

struct SpaceFormTarget {
  double curvature;       // c
  double mean_curvature;  // |H| of the target surface
  double gauss_gap;       // c + det(target shape operator) - K
};

/// Constant principal curvatures lambda1 >= lambda2. Umbilical modes need
/// lambda1 = lambda2 and K = 0 within tol; violations throw ConfigError.
SpaceFormTarget derive_spaceform_target(double lambda1, double lambda2, TargetMode mode,
                                        double gauss_curvature = 0.0, double tol = 1e-10);
/// Field version: lambda1, lambda2 and K must be constant over `mask`
/// within tol (ConfigError otherwise).
SpaceFormTarget derive_spaceform_target(const PrincipalCurvatures& pc, const Field& k,
                                        const NodeMask& mask, TargetMode mode, double tol);

// --- verification report ----------------------------------------------------

struct ResidualEntry {
  std::string name;
  std::string paper_ref;  // identity key, see the README index
  double l2 = 0.0;
  double linf = 0.0;
  /// Held to its tolerance in this run (identities, and conditional
  /// identities whose hypothesis holds). Not serialized.
  bool asserted = false;
  /// Within its tolerance in this run.
  bool holds = false;
};

struct GeometryReport {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<ResidualEntry> residuals;
  std::vector<std::pair<std::string, double>> summaries;
  std::vector<std::pair<std::string, bool>> flags;
  /// Named node fields, present on request.
  std::vector<std::pair<std::string, std::vector<double>>> fields;
  /// Extra top-level blocks (Newton history, convergence tables).
  std::vector<std::pair<std::string, nlohmann::ordered_json>> sections;

  const ResidualEntry* residual(const std::string& name) const;
  std::optional<double> summary(const std::string& name) const;
  std::optional<bool> flag(const std::string& name) const;
  /// Every enabled assertion holds (flag "identities_hold").
  bool passed() const;
};

struct VerifyOptions {
  double tol_analytic = 1e-10;
  /// Fixed absolute tolerance for finite-difference jets; when unset the
  /// tolerance comes from the coarse-grid probe.
  std::optional<double> tol_fd;
  /// Width of the excluded band at open boundaries (parameter units, u then
  /// v) for finite-difference jets; default 8 spacings per axis.
  std::optional<std::array<double, 2>> margin;
  /// Equivalence-matrix thresholds for analytic jets.
  double equivalence_pass = 1e-8;
  double equivalence_implied = 1e-7;
  bool dump_fields = false;
};

/// Runs the whole check suite on an immersion.
GeometryReport verify_surface(const ImmersionJet& jet, const std::string& surface_id,
                              const VerifyOptions& options = {});

}  // namespace bicons
