#pragma once

// Run configuration, orchestration of the three commands and deterministic
// report serialization.

#include <array>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bicons/biconservative.hpp"
#include "bicons/corpus.hpp"
#include "bicons/mu_solver.hpp"

namespace bicons {

enum class Command { verify, solve_mu, convergence };
enum class Format { json, csv };

const char* to_string(Command c);
Command parse_command(const std::string& s);
Format parse_format(const std::string& s);

struct AxisSpec {
  double min = 0.0, max = 1.0;
  int n = 0;
  bool periodic = false;
};

/// How a builtin is sampled: exact jets, finite differences of the sampled
/// positions, or a round trip through a position table.
enum class Sampling { analytic, fd, tabulated };

struct SurfaceSpec {
  std::optional<AmbientSpace> ambient;
  std::optional<AxisSpec> u, v;
  std::string builtin;  // empty for tabulated input
  nlohmann::json params = nlohmann::json::object();
  /// Unset: analytic for verify, fd for convergence.
  std::optional<Sampling> sampling;
  std::vector<std::vector<double>> positions;
};

struct MuSpec {
  double h_norm = 1.0;
  double ambient_curvature = 0.0;
  std::vector<double> ambient_curvature_values;  // overrides the constant
  /// mu_0 = scale (1 + perturbation sin x sin y); scale defaults to the
  /// constant root.
  std::optional<double> initial_scale;
  double perturbation = 0.1;
  std::vector<double> initial_values;  // overrides the formula
};

struct RunConfig {
  Command command = Command::verify;
  SurfaceSpec surface;
  MuSpec mu;
  /// Node-count override (--grid NUxNV) and periodicity override.
  std::optional<std::array<int, 2>> grid_counts;
  std::optional<std::array<bool, 2>> periodic;
  VerifyOptions verify;
  NewtonOptions newton;
  int levels = 3;
  std::string output;  // empty: standard output
  Format format = Format::json;
};

/// Parses a config / surface-file document; unknown keys and malformed
/// values throw ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Surface of a config after overrides, with its display name.
struct BuiltSurface {
  ImmersionJet jet;
  std::string id;
  nlohmann::ordered_json params;
};
BuiltSurface build_surface(const RunConfig& config);

/// Problem of a solve-mu config (default grid [0, 2 pi)^2, 64 x 64).
MuProblem build_mu_problem(const RunConfig& config);

GeometryReport run_verify(const RunConfig& config);
/// Verifies at `levels` successive refinements (levels >= 3) with one
/// boundary margin fixed by the coarsest level; adds a "convergence" section
/// with estimated orders p = log2(r(h) / r(h/2)).
GeometryReport run_convergence(const RunConfig& config);
GeometryReport run_solve_mu(const RunConfig& config);

/// Orders below this fail a convergence run.
inline constexpr double kRequiredOrder = 1.8;

/// Exit code of a finished run: 0 when every enabled assertion passes, 2
/// otherwise, 4 for a solve that did not converge.
int exit_code(const RunConfig& config, const GeometryReport& report);

nlohmann::ordered_json to_json(const GeometryReport& report);
/// JSON text with doubles at 17 significant digits; non-finite values are
/// written as null.
std::string dump_json(const nlohmann::ordered_json& doc);
std::string to_csv(const GeometryReport& report);
std::string render(const GeometryReport& report, Format format);
/// Writes to `path`, or standard output when empty; I/O failures throw
/// std::runtime_error.
void emit_report(const GeometryReport& report, Format format, const std::string& path);

}  // namespace bicons
