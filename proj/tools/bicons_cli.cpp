// Command-line front end over the C interface.
//
//   bicons verify --surface helix_line_r4 --grid 129x129
//   bicons solve-mu --H 1 --KN 0 --grid 64x64
//   bicons convergence --surface cylinder --param warp=0.1 --levels 3
//
// Exit codes: 0 pass, 2 assertion failure, 3 configuration error,
// 4 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "bicons/bicons.h"

namespace {

constexpr int kConfigExit = 3;
constexpr int kNumericalExit = 4;

struct Options {
  std::string config;
  std::string surface;
  std::string grid;
  std::string periodic;
  std::string output;
  std::string format;
  std::string jets;
  std::vector<std::string> params;
  std::optional<double> tol_analytic, tol_fd, h_norm, kn;
  std::optional<int> levels;
  bool dump_fields = false;
};

int status_exit(bc_status s) {
  switch (s) {
    case BC_OK: return 0;
    case BC_NUMERICAL_ERROR: return kNumericalExit;
    case BC_INTERNAL_ERROR: return 1;
    default: return kConfigExit;
  }
}

int report_error(bc_status s) {
  std::fprintf(stderr, "error: %s\n", bc_last_error());
  return status_exit(s);
}

bool parse_grid(const std::string& text, int& nu, int& nv) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) return false;
  try {
    std::size_t a = 0, b = 0;
    nu = std::stoi(text.substr(0, x), &a);
    nv = std::stoi(text.substr(x + 1), &b);
    return a == x && b == text.size() - x - 1;
  } catch (const std::exception&) {
    return false;
  }
}

// "u,v", "u", "v" or "none"
bool parse_periodic(const std::string& text, int& pu, int& pv) {
  pu = pv = 0;
  if (text == "none") return true;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item == "u") pu = 1;
    else if (item == "v") pv = 1;
    else return false;
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return true;
}

int run(const std::string& command, const Options& o) {
  bc_config* cfg = nullptr;
  bc_status s = o.config.empty() ? bc_config_new(&cfg) : bc_config_from_file(o.config.c_str(), &cfg);
  if (s != BC_OK) return report_error(s);

  auto apply = [&]() -> bc_status {
    bc_status st = bc_config_set_command(cfg, command.c_str());
    if (st != BC_OK) return st;
    if (!o.surface.empty() && (st = bc_config_set_surface(cfg, o.surface.c_str())) != BC_OK) return st;
    for (const auto& p : o.params) {
      const auto eq = p.find('=');
      double value = 0.0;
      try {
        if (eq == std::string::npos) throw std::invalid_argument(p);
        std::size_t used = 0;
        value = std::stod(p.substr(eq + 1), &used);
        if (used != p.size() - eq - 1) throw std::invalid_argument(p);
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: --param expects key=number, got '%s'\n", p.c_str());
        return BC_CONFIG_ERROR;
      }
      if ((st = bc_config_set_param(cfg, p.substr(0, eq).c_str(), value)) != BC_OK) return st;
    }
    if (!o.jets.empty() && (st = bc_config_set_jets(cfg, o.jets.c_str())) != BC_OK) return st;
    if (!o.grid.empty()) {
      int nu = 0, nv = 0;
      if (!parse_grid(o.grid, nu, nv)) {
        std::fprintf(stderr, "error: --grid expects NUxNV, got '%s'\n", o.grid.c_str());
        return BC_CONFIG_ERROR;
      }
      if ((st = bc_config_set_grid(cfg, nu, nv)) != BC_OK) return st;
    }
    if (!o.periodic.empty()) {
      int pu = 0, pv = 0;
      if (!parse_periodic(o.periodic, pu, pv)) {
        std::fprintf(stderr, "error: --periodic expects u,v / u / v / none\n");
        return BC_CONFIG_ERROR;
      }
      if ((st = bc_config_set_periodic(cfg, pu, pv)) != BC_OK) return st;
    }
    if (o.tol_analytic && (st = bc_config_set_tol_analytic(cfg, *o.tol_analytic)) != BC_OK) return st;
    if (o.tol_fd && (st = bc_config_set_tol_fd(cfg, *o.tol_fd)) != BC_OK) return st;
    if (o.h_norm && (st = bc_config_set_mean_curvature(cfg, *o.h_norm)) != BC_OK) return st;
    if (o.kn && (st = bc_config_set_ambient_curvature(cfg, *o.kn)) != BC_OK) return st;
    if (o.levels && (st = bc_config_set_levels(cfg, *o.levels)) != BC_OK) return st;
    if (o.dump_fields && (st = bc_config_set_dump_fields(cfg, 1)) != BC_OK) return st;
    if (!o.format.empty() && (st = bc_config_set_format(cfg, o.format.c_str())) != BC_OK) return st;
    if (!o.output.empty() && (st = bc_config_set_output(cfg, o.output.c_str())) != BC_OK) return st;
    return BC_OK;
  };

  int code = 0;
  bc_report* rep = nullptr;
  if ((s = apply()) != BC_OK) {
    if (*bc_last_error()) std::fprintf(stderr, "error: %s\n", bc_last_error());
    code = status_exit(s);
  } else if ((s = bc_run(cfg, &rep)) != BC_OK) {
    code = report_error(s);
  } else if ((s = bc_emit(cfg, rep)) != BC_OK) {
    code = report_error(s);
  } else {
    code = bc_exit_code(cfg, rep);
  }
  bc_report_free(rep);
  bc_config_free(cfg);
  return code;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "JSON config or surface file");
  app->add_option("--output", o.output, "report path (default: standard output)");
  app->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--grid", o.grid, "node counts NUxNV");
  app->add_option("--periodic", o.periodic, "periodic axes: u,v / u / v / none");
  app->add_flag("--dump-fields", o.dump_fields, "include node fields in the report");
}

void add_surface(CLI::App* app, Options& o) {
  app->add_option("--surface", o.surface, "builtin surface name");
  app->add_option("--param", o.params, "builtin parameter key=value (repeatable)");
  app->add_option("--jets", o.jets, "analytic, fd or tabulated")
      ->check(CLI::IsMember({"analytic", "fd", "tabulated"}));
  app->add_option("--tol-analytic", o.tol_analytic, "tolerance for analytic jets");
  app->add_option("--tol-fd", o.tol_fd, "fixed tolerance for finite-difference jets");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for biconservative surfaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bc_version()));

  Options verify, solve, conv;
  CLI::App* v = app.add_subcommand("verify", "run the check suite on one surface");
  add_common(v, verify);
  add_surface(v, verify);

  CLI::App* m = app.add_subcommand("solve-mu", "solve the conformal-factor equation");
  add_common(m, solve);
  m->add_option("--H", solve.h_norm, "mean curvature norm |H| > 0");
  m->add_option("--KN", solve.kn, "constant ambient sectional curvature");

  CLI::App* c = app.add_subcommand("convergence", "grid-refinement study of every residual");
  add_common(c, conv);
  add_surface(c, conv);
  c->add_option("--levels", conv.levels, "refinement levels (>= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }
  if (v->parsed()) return run("verify", verify);
  if (m->parsed()) return run("solve-mu", solve);
  return run("convergence", conv);
}
