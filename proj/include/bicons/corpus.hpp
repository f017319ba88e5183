#pragma once

// Built-in analytic surfaces and tabulated-surface ingestion.

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bicons/immersion.hpp"

namespace bicons {

/// Parameter range of one grid axis.
struct AxisDefault {
  double min, max;
  bool periodic;
};

/// Closed-form properties of a builtin, used as test oracles.
struct ExpectedValues {
  std::optional<double> mean_curvature_norm;  // |H|
  std::optional<double> gauss_curvature;
  std::optional<double> lambda1, lambda2;
  bool biconservative = false;
  bool pmc = false;
  bool parallel_ah = false;
  bool isothermal = false;
};

struct BuiltinSurface {
  std::string name;
  nlohmann::json params;  // after defaults were applied
  AmbientSpace space;
  AxisDefault u, v;
  ExpectedValues expected;
  /// Ambient coordinates as jets of (u, v).
  std::function<std::vector<Jet>(const Jet&, const Jet&)> position;
};

/// Names of all builtins in registry order.
const std::vector<std::string>& builtin_names();

/// Resolves a builtin by name. Unknown names or parameters and invalid
/// values (non-positive radii, k <= 0) throw ConfigError.
BuiltinSurface builtin_surface(const std::string& name, const nlohmann::json& params = {});

/// Default grid of a builtin with the given node counts.
ParamGrid default_grid(const BuiltinSurface& s, int nu, int nv);

/// Samples a builtin on `grid`. A periodic axis must span exactly one
/// period of the builtin.
ImmersionJet make_surface(const BuiltinSurface& s, const ParamGrid& grid,
                          JetSource source = JetSource::analytic);

ImmersionJet make_helix_line_r4(double k, double tau, double a, const ParamGrid& grid,
                                JetSource source = JetSource::analytic);
ImmersionJet make_sphere(double r, const ParamGrid& grid, JetSource source = JetSource::analytic);
ImmersionJet make_cylinder(double r, const ParamGrid& grid, JetSource source = JetSource::analytic);
ImmersionJet make_product_torus(double r1, double r2, const ParamGrid& grid,
                                JetSource source = JetSource::analytic);
ImmersionJet make_graph(const std::string& expression, const ParamGrid& grid,
                        JetSource source = JetSource::analytic);

/// Positions listed node by node (u index fastest), finite-difference jets.
/// Wrong row count or component count throws ConfigError; coincident
/// neighbouring nodes or a degenerate metric throw NumericalError.
ImmersionJet load_tabulated(const AmbientSpace& space, const ParamGrid& grid,
                            const std::vector<std::vector<double>>& positions);

/// Node-by-node positions of an immersion (for writing surface files).
std::vector<std::vector<double>> tabulate(const ImmersionJet& jet);

}  // namespace bicons
