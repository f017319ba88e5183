#include "bicons/bicons.h"

#include <cmath>
#include <cstring>
#include <string>

#include "bicons/report.hpp"

struct bc_config {
  bicons::RunConfig config;
};
struct bc_surface {
  bicons::ImmersionJet jet;
  std::string id;
};
struct bc_report {
  bicons::GeometryReport report;
};
struct bc_mu_solution {
  bicons::MuSolution solution;
};

namespace {

thread_local std::string last_error;

bc_status fail(bc_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
bc_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const bicons::ConfigError& e) {
    return fail(BC_CONFIG_ERROR, e.what());
  } catch (const bicons::NumericalError& e) {
    return fail(BC_NUMERICAL_ERROR, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(BC_CONFIG_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BC_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BC_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(BC_INTERNAL_ERROR, e.what());
  }
}

#define BC_REQUIRE(ptr)                                                   \
  do {                                                                    \
    if (!(ptr)) return fail(BC_INVALID_ARGUMENT, #ptr " must not be NULL"); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* bc_version(void) { return "1.0.0"; }
const char* bc_last_error(void) { return last_error.c_str(); }
void bc_string_free(char* s) { delete[] s; }

// --- config -----------------------------------------------------------------

bc_status bc_config_new(bc_config** out) {
  BC_REQUIRE(out);
  return guarded([&] {
    *out = new bc_config{};
    return BC_OK;
  });
}

bc_status bc_config_from_json(const char* text, bc_config** out) {
  BC_REQUIRE(text);
  BC_REQUIRE(out);
  return guarded([&] {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw bicons::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    *out = new bc_config{bicons::parse_config(doc)};
    return BC_OK;
  });
}

bc_status bc_config_from_file(const char* path, bc_config** out) {
  BC_REQUIRE(path);
  BC_REQUIRE(out);
  return guarded([&] {
    *out = new bc_config{bicons::load_config(path)};
    return BC_OK;
  });
}

void bc_config_free(bc_config* c) { delete c; }

bc_status bc_config_set_command(bc_config* c, const char* command) {
  BC_REQUIRE(c);
  BC_REQUIRE(command);
  return guarded([&] {
    c->config.command = bicons::parse_command(command);
    return BC_OK;
  });
}

bc_status bc_config_set_surface(bc_config* c, const char* builtin) {
  BC_REQUIRE(c);
  BC_REQUIRE(builtin);
  return guarded([&] {
    auto& s = c->config.surface;
    if (s.builtin != builtin) s.params = nlohmann::json::object();
    s.builtin = builtin;
    s.positions.clear();
    return BC_OK;
  });
}

bc_status bc_config_set_param(bc_config* c, const char* key, double value) {
  BC_REQUIRE(c);
  BC_REQUIRE(key);
  return guarded([&] {
    c->config.surface.params[key] = value;
    return BC_OK;
  });
}

bc_status bc_config_set_jets(bc_config* c, const char* mode) {
  BC_REQUIRE(c);
  BC_REQUIRE(mode);
  return guarded([&] {
    const std::string m = mode;
    if (m == "analytic") c->config.surface.sampling = bicons::Sampling::analytic;
    else if (m == "fd") c->config.surface.sampling = bicons::Sampling::fd;
    else if (m == "tabulated") c->config.surface.sampling = bicons::Sampling::tabulated;
    else throw bicons::ConfigError("jets must be analytic, fd or tabulated");
    return BC_OK;
  });
}

bc_status bc_config_set_grid(bc_config* c, int nu, int nv) {
  BC_REQUIRE(c);
  if (nu < 4 || nv < 4) return fail(BC_CONFIG_ERROR, "grid sizes must be >= 4");
  c->config.grid_counts = std::array<int, 2>{nu, nv};
  return BC_OK;
}

bc_status bc_config_set_periodic(bc_config* c, int periodic_u, int periodic_v) {
  BC_REQUIRE(c);
  c->config.periodic = std::array<bool, 2>{periodic_u != 0, periodic_v != 0};
  return BC_OK;
}

bc_status bc_config_set_tol_analytic(bc_config* c, double tol) {
  BC_REQUIRE(c);
  if (!(tol > 0.0) || !std::isfinite(tol)) return fail(BC_CONFIG_ERROR, "tolerance must be positive");
  c->config.verify.tol_analytic = tol;
  return BC_OK;
}

bc_status bc_config_set_tol_fd(bc_config* c, double tol) {
  BC_REQUIRE(c);
  if (!(tol > 0.0) || !std::isfinite(tol)) return fail(BC_CONFIG_ERROR, "tolerance must be positive");
  c->config.verify.tol_fd = tol;
  return BC_OK;
}

bc_status bc_config_set_mean_curvature(bc_config* c, double h_norm) {
  BC_REQUIRE(c);
  if (!(h_norm > 0.0) || !std::isfinite(h_norm)) return fail(BC_CONFIG_ERROR, "|H| must be positive");
  c->config.mu.h_norm = h_norm;
  return BC_OK;
}

bc_status bc_config_set_ambient_curvature(bc_config* c, double kn) {
  BC_REQUIRE(c);
  if (!std::isfinite(kn)) return fail(BC_CONFIG_ERROR, "K^N must be finite");
  c->config.mu.ambient_curvature = kn;
  c->config.mu.ambient_curvature_values.clear();
  return BC_OK;
}

bc_status bc_config_set_levels(bc_config* c, int levels) {
  BC_REQUIRE(c);
  if (levels < 1) return fail(BC_CONFIG_ERROR, "levels must be positive");
  c->config.levels = levels;
  return BC_OK;
}

bc_status bc_config_set_dump_fields(bc_config* c, int on) {
  BC_REQUIRE(c);
  c->config.verify.dump_fields = on != 0;
  return BC_OK;
}

bc_status bc_config_set_format(bc_config* c, const char* format) {
  BC_REQUIRE(c);
  BC_REQUIRE(format);
  return guarded([&] {
    c->config.format = bicons::parse_format(format);
    return BC_OK;
  });
}

bc_status bc_config_set_output(bc_config* c, const char* path) {
  BC_REQUIRE(c);
  BC_REQUIRE(path);
  c->config.output = path;
  return BC_OK;
}

bc_status bc_config_get_output(const bc_config* c, char** path) {
  BC_REQUIRE(c);
  BC_REQUIRE(path);
  *path = copy_string(c->config.output);
  return BC_OK;
}

bc_status bc_run(const bc_config* c, bc_report** out) {
  BC_REQUIRE(c);
  BC_REQUIRE(out);
  return guarded([&] {
    switch (c->config.command) {
      case bicons::Command::verify: *out = new bc_report{bicons::run_verify(c->config)}; break;
      case bicons::Command::solve_mu: *out = new bc_report{bicons::run_solve_mu(c->config)}; break;
      case bicons::Command::convergence:
        *out = new bc_report{bicons::run_convergence(c->config)};
        break;
    }
    return BC_OK;
  });
}

bc_status bc_emit(const bc_config* c, const bc_report* r) {
  BC_REQUIRE(c);
  BC_REQUIRE(r);
  try {
    last_error.clear();
    bicons::emit_report(r->report, c->config.format, c->config.output);
    return BC_OK;
  } catch (const std::exception& e) {
    return fail(BC_IO_ERROR, e.what());
  }
}

int bc_exit_code(const bc_config* c, const bc_report* r) {
  if (!c || !r) return BC_INVALID_ARGUMENT;
  return bicons::exit_code(c->config, r->report);
}

// --- surfaces ---------------------------------------------------------------

bc_status bc_surface_builtin(const char* name, const char* params_json, int nu, int nv,
                             const char* jets, bc_surface** out) {
  BC_REQUIRE(name);
  BC_REQUIRE(jets);
  BC_REQUIRE(out);
  return guarded([&] {
    bicons::RunConfig c;
    c.surface.builtin = name;
    if (params_json && *params_json) {
      try {
        c.surface.params = nlohmann::json::parse(params_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw bicons::ConfigError(std::string("params are not valid JSON: ") + e.what());
      }
    }
    bc_config tmp{c};
    if (bc_config_set_jets(&tmp, jets) != BC_OK) throw bicons::ConfigError(last_error);
    if (bc_config_set_grid(&tmp, nu, nv) != BC_OK) throw bicons::ConfigError(last_error);
    bicons::BuiltSurface s = bicons::build_surface(tmp.config);
    *out = new bc_surface{std::move(s.jet), s.id};
    return BC_OK;
  });
}

bc_status bc_surface_tabulated(const char* kind, int dim, double radius, double u_min,
                               double u_max, int nu, int periodic_u, double v_min, double v_max,
                               int nv, int periodic_v, const double* positions, size_t count,
                               size_t components, bc_surface** out) {
  BC_REQUIRE(kind);
  BC_REQUIRE(positions);
  BC_REQUIRE(out);
  return guarded([&] {
    const std::string k = kind;
    bicons::AmbientSpace space = k == "sphere" ? bicons::AmbientSpace::sphere(dim, radius)
                                 : k == "euclidean"
                                     ? bicons::AmbientSpace::euclidean(dim)
                                     : throw bicons::ConfigError("kind must be euclidean or sphere");
    if (nu < 4 || nv < 4) throw bicons::ConfigError("grid sizes must be >= 4");
    const bicons::ParamGrid grid =
        bicons::build_grid({u_min, u_max}, {v_min, v_max}, nu, nv, periodic_u != 0, periodic_v != 0);
    std::vector<std::vector<double>> rows(count);
    for (size_t n = 0; n < count; ++n)
      rows[n].assign(positions + n * components, positions + (n + 1) * components);
    *out = new bc_surface{bicons::load_tabulated(space, grid, rows), "tabulated"};
    return BC_OK;
  });
}

size_t bc_surface_node_count(const bc_surface* s) { return s ? s->jet.grid.size() : 0; }

bc_status bc_surface_positions(const bc_surface* s, double* out, size_t capacity) {
  BC_REQUIRE(s);
  BC_REQUIRE(out);
  const std::size_t dim = s->jet.x.dim();
  if (capacity < s->jet.grid.size() * dim)
    return fail(BC_INVALID_ARGUMENT, "buffer too small for the position table");
  for (std::size_t n = 0; n < s->jet.grid.size(); ++n)
    for (std::size_t k = 0; k < dim; ++k) out[n * dim + k] = s->jet.x[static_cast<int>(k)].value(n);
  return BC_OK;
}

bc_status bc_surface_verify(const bc_surface* s, double tol_analytic, bc_report** out) {
  BC_REQUIRE(s);
  BC_REQUIRE(out);
  return guarded([&] {
    bicons::VerifyOptions o;
    if (tol_analytic > 0.0) o.tol_analytic = tol_analytic;
    *out = new bc_report{bicons::verify_surface(s->jet, s->id, o)};
    return BC_OK;
  });
}

void bc_surface_free(bc_surface* s) { delete s; }

// --- reports ----------------------------------------------------------------

size_t bc_report_residual_count(const bc_report* r) { return r ? r->report.residuals.size() : 0; }

bc_status bc_report_residual_at(const bc_report* r, size_t index, const char** name, double* l2,
                                double* linf) {
  BC_REQUIRE(r);
  if (index >= r->report.residuals.size()) return fail(BC_NOT_FOUND, "residual index out of range");
  const auto& e = r->report.residuals[index];
  if (name) *name = e.name.c_str();
  if (l2) *l2 = e.l2;
  if (linf) *linf = e.linf;
  return BC_OK;
}

bc_status bc_report_residual(const bc_report* r, const char* name, double* l2, double* linf) {
  BC_REQUIRE(r);
  BC_REQUIRE(name);
  const auto* e = r->report.residual(name);
  if (!e) return fail(BC_NOT_FOUND, std::string("no residual named ") + name);
  if (l2) *l2 = e->l2;
  if (linf) *linf = e->linf;
  return BC_OK;
}

bc_status bc_report_summary(const bc_report* r, const char* name, double* value) {
  BC_REQUIRE(r);
  BC_REQUIRE(name);
  BC_REQUIRE(value);
  const auto v = r->report.summary(name);
  if (!v) return fail(BC_NOT_FOUND, std::string("no summary named ") + name);
  *value = *v;
  return BC_OK;
}

bc_status bc_report_flag(const bc_report* r, const char* name, int* value) {
  BC_REQUIRE(r);
  BC_REQUIRE(name);
  BC_REQUIRE(value);
  const auto v = r->report.flag(name);
  if (!v) return fail(BC_NOT_FOUND, std::string("no flag named ") + name);
  *value = *v ? 1 : 0;
  return BC_OK;
}

bc_status bc_report_render(const bc_report* r, const char* format, char** text) {
  BC_REQUIRE(r);
  BC_REQUIRE(format);
  BC_REQUIRE(text);
  return guarded([&] {
    *text = copy_string(bicons::render(r->report, bicons::parse_format(format)));
    return BC_OK;
  });
}

void bc_report_free(bc_report* r) { delete r; }

// --- mu solver --------------------------------------------------------------

bc_status bc_mu_solve(double h_norm, double kn, int n, double perturbation, double tol,
                      int max_iter, bc_mu_solution** out) {
  BC_REQUIRE(out);
  return guarded([&] {
    bicons::RunConfig c;
    c.command = bicons::Command::solve_mu;
    c.mu.h_norm = h_norm;
    c.mu.ambient_curvature = kn;
    c.mu.perturbation = perturbation;
    c.grid_counts = std::array<int, 2>{n, n};
    const bicons::MuProblem p = bicons::build_mu_problem(c);
    bicons::NewtonOptions o;
    if (tol > 0.0) o.tol = tol;
    if (max_iter > 0) o.max_iter = max_iter;
    *out = new bc_mu_solution{bicons::solve_mu(p, o)};
    return BC_OK;
  });
}

int bc_mu_converged(const bc_mu_solution* s) { return s && s->solution.converged ? 1 : 0; }
int bc_mu_iterations(const bc_mu_solution* s) { return s ? s->solution.iterations : -1; }
double bc_mu_final_residual(const bc_mu_solution* s) {
  return s && !s->solution.history.empty() ? s->solution.history.back() : NAN;
}
size_t bc_mu_node_count(const bc_mu_solution* s) { return s ? s->solution.mu.size() : 0; }

bc_status bc_mu_values(const bc_mu_solution* s, double* out, size_t capacity) {
  BC_REQUIRE(s);
  BC_REQUIRE(out);
  if (capacity < s->solution.mu.size()) return fail(BC_INVALID_ARGUMENT, "buffer too small");
  for (std::size_t n = 0; n < s->solution.mu.size(); ++n) out[n] = s->solution.mu.value(n);
  return BC_OK;
}

bc_status bc_mu_gauss_consistency(const bc_mu_solution* s, double* linf) {
  BC_REQUIRE(s);
  BC_REQUIRE(linf);
  return guarded([&] {
    const bicons::Field g = bicons::gauss_consistency(s->solution);
    double m = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) m = std::max(m, std::abs(g.value(n)));
    *linf = m;
    return BC_OK;
  });
}

void bc_mu_free(bc_mu_solution* s) { delete s; }

}  // extern "C"
