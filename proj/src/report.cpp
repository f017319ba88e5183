#include "bicons/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace bicons {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* to_string(Command c) {
  switch (c) {
    case Command::verify: return "verify";
    case Command::solve_mu: return "solve-mu";
    case Command::convergence: return "convergence";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  if (s == "verify") return Command::verify;
  if (s == "solve-mu") return Command::solve_mu;
  if (s == "convergence") return Command::convergence;
  throw ConfigError("unknown command '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw ConfigError("unknown format '" + s + "' (json or csv)");
}

namespace {

const char* to_string(Sampling s) {
  switch (s) {
    case Sampling::analytic: return "analytic";
    case Sampling::fd: return "fd";
    case Sampling::tabulated: return "tabulated";
  }
  return "?";
}

Sampling parse_sampling(const std::string& s) {
  if (s == "analytic") return Sampling::analytic;
  if (s == "fd") return Sampling::fd;
  if (s == "tabulated") return Sampling::tabulated;
  throw ConfigError("surface.jets must be analytic, fd or tabulated");
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + " must be finite");
  return x;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

AxisSpec parse_axis(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4 || !j[3].is_boolean())
    throw ConfigError(where + " must be [min, max, n, periodic]");
  AxisSpec a{number(j[0], where), number(j[1], where), integer(j[2], where), j[3].get<bool>()};
  if (!(a.min < a.max)) throw ConfigError(where + ": min must be below max");
  if (a.n < 4) throw ConfigError(where + ": grid sizes must be >= 4");
  return a;
}

AmbientSpace parse_ambient(const json& j) {
  only_keys(j, "ambient", {"kind", "dim", "radius"});
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("ambient.kind missing");
  const std::string kind = j["kind"].get<std::string>();
  if (!j.contains("dim")) throw ConfigError("ambient.dim missing");
  const int dim = integer(j["dim"], "ambient.dim");
  if (dim < 3) throw ConfigError("ambient.dim must be >= 3");
  if (kind == "euclidean") {
    if (j.contains("radius") && !j["radius"].is_null())
      throw ConfigError("ambient.radius only applies to the sphere");
    return AmbientSpace::euclidean(dim);
  }
  if (kind == "sphere") {
    const double r = j.contains("radius") ? number(j["radius"], "ambient.radius") : 1.0;
    if (!(r > 0.0)) throw ConfigError("ambient.radius must be positive");
    return AmbientSpace::sphere(dim, r);
  }
  throw ConfigError("ambient.kind must be euclidean or sphere");
}

bool same_space(const AmbientSpace& a, const AmbientSpace& b) {
  return a.kind() == b.kind() && a.dim() == b.dim() &&
         (!a.is_sphere() || std::abs(a.radius() - b.radius()) <= 1e-12 * b.radius());
}

ojson axis_json(const ParamGrid& g, Axis a) {
  const bool u = a == Axis::u;
  return ojson::array({u ? g.u_min() : g.v_min(), u ? g.u_max() : g.v_max(), g.count(a),
                       g.periodic(a)});
}

ojson grid_json(const ParamGrid& g) {
  return {{"u", axis_json(g, Axis::u)}, {"v", axis_json(g, Axis::v)}};
}

ParamGrid make_grid(AxisSpec u, AxisSpec v, const RunConfig& c) {
  if (c.grid_counts) {
    u.n = (*c.grid_counts)[0];
    v.n = (*c.grid_counts)[1];
  }
  if (c.periodic) {
    u.periodic = (*c.periodic)[0];
    v.periodic = (*c.periodic)[1];
  }
  if (u.n < 4 || v.n < 4) throw ConfigError("grid sizes must be >= 4");
  return build_grid({u.min, u.max}, {v.min, v.max}, u.n, v.n, u.periodic, v.periodic);
}

AxisSpec default_axis(const AxisDefault& d) {
  return {d.min, d.max, d.periodic ? 64 : 65, d.periodic};
}

Sampling sampling_of(const RunConfig& c) {
  if (c.surface.sampling) return *c.surface.sampling;
  return c.command == Command::convergence ? Sampling::fd : Sampling::analytic;
}

ImmersionJet sample(const BuiltinSurface& s, const ParamGrid& grid, Sampling mode) {
  switch (mode) {
    case Sampling::analytic: return make_surface(s, grid, JetSource::analytic);
    case Sampling::fd: return make_surface(s, grid, JetSource::finite_difference);
    case Sampling::tabulated:
      return load_tabulated(s.space, grid, tabulate(make_surface(s, grid, JetSource::analytic)));
  }
  throw ConfigError("unknown sampling");
}

ojson with_command(const ojson& meta, Command c, const ojson& params) {
  ojson out = ojson::object();
  out["command"] = to_string(c);
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    out[it.key()] = it.value();
    if (it.key() == "surface") out["params"] = params;
  }
  return out;
}

std::pair<double, double> min_max(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

// --- JSON text ----------------------------------------------------------

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostringstream& os, const ojson& j, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) { os << "{}"; return; }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ojson(it.key()).dump() << ": ";
        write(os, it.value(), depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) { os << "[]"; return; }
      const bool flat = std::none_of(j.begin(), j.end(), [](const ojson& e) { return e.is_structured(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case ojson::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

// --- configuration ------------------------------------------------------

RunConfig parse_config(const json& doc) {
  only_keys(doc, "config", {"command", "ambient", "grid", "surface", "mu", "tolerances", "newton",
                            "levels", "output", "format", "dump_fields"});
  RunConfig c;
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) throw ConfigError("command must be a string");
    c.command = parse_command(doc["command"].get<std::string>());
  }
  if (doc.contains("ambient")) c.surface.ambient = parse_ambient(doc["ambient"]);
  if (doc.contains("grid")) {
    only_keys(doc["grid"], "grid", {"u", "v"});
    if (!doc["grid"].contains("u") || !doc["grid"].contains("v"))
      throw ConfigError("grid needs both u and v");
    c.surface.u = parse_axis(doc["grid"]["u"], "grid.u");
    c.surface.v = parse_axis(doc["grid"]["v"], "grid.v");
  }
  if (doc.contains("surface")) {
    const json& s = doc["surface"];
    only_keys(s, "surface", {"builtin", "params", "jets", "positions"});
    if (s.contains("builtin") == s.contains("positions"))
      throw ConfigError("surface needs exactly one of builtin or positions");
    if (s.contains("builtin")) {
      if (!s["builtin"].is_string()) throw ConfigError("surface.builtin must be a string");
      c.surface.builtin = s["builtin"].get<std::string>();
      if (s.contains("params")) {
        if (!s["params"].is_object()) throw ConfigError("surface.params must be an object");
        c.surface.params = s["params"];
      }
      if (s.contains("jets")) {
        if (!s["jets"].is_string()) throw ConfigError("surface.jets must be a string");
        c.surface.sampling = parse_sampling(s["jets"].get<std::string>());
      }
    } else {
      if (s.contains("params") || s.contains("jets"))
        throw ConfigError("surface.params and surface.jets only apply to builtins");
      if (!s["positions"].is_array()) throw ConfigError("surface.positions must be an array");
      for (const auto& row : s["positions"]) c.surface.positions.push_back(numbers(row, "surface.positions"));
    }
  }
  if (doc.contains("mu")) {
    const json& m = doc["mu"];
    only_keys(m, "mu", {"H", "KN", "initial"});
    if (m.contains("H")) c.mu.h_norm = number(m["H"], "mu.H");
    if (m.contains("KN")) {
      if (m["KN"].is_array()) c.mu.ambient_curvature_values = numbers(m["KN"], "mu.KN");
      else c.mu.ambient_curvature = number(m["KN"], "mu.KN");
    }
    if (m.contains("initial")) {
      const json& i = m["initial"];
      if (i.is_array()) {
        c.mu.initial_values = numbers(i, "mu.initial");
      } else {
        only_keys(i, "mu.initial", {"scale", "perturbation"});
        if (i.contains("scale")) c.mu.initial_scale = number(i["scale"], "mu.initial.scale");
        if (i.contains("perturbation"))
          c.mu.perturbation = number(i["perturbation"], "mu.initial.perturbation");
      }
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    only_keys(t, "tolerances", {"analytic", "fd", "margin"});
    if (t.contains("analytic")) c.verify.tol_analytic = number(t["analytic"], "tolerances.analytic");
    if (t.contains("fd")) c.verify.tol_fd = number(t["fd"], "tolerances.fd");
    if (t.contains("margin")) {
      const auto m = numbers(t["margin"], "tolerances.margin");
      if (m.size() != 2 || m[0] < 0 || m[1] < 0)
        throw ConfigError("tolerances.margin must be [u, v] with non-negative entries");
      c.verify.margin = std::array<double, 2>{m[0], m[1]};
    }
    if (!(c.verify.tol_analytic > 0) || (c.verify.tol_fd && !(*c.verify.tol_fd > 0)))
      throw ConfigError("tolerances must be positive");
  }
  if (doc.contains("newton")) {
    const json& n = doc["newton"];
    only_keys(n, "newton", {"tol", "max_iter"});
    if (n.contains("tol")) c.newton.tol = number(n["tol"], "newton.tol");
    if (n.contains("max_iter")) c.newton.max_iter = integer(n["max_iter"], "newton.max_iter");
    if (!(c.newton.tol > 0) || c.newton.max_iter < 0) throw ConfigError("invalid newton options");
  }
  if (doc.contains("levels")) {
    c.levels = integer(doc["levels"], "levels");
    if (c.levels < 1) throw ConfigError("levels must be positive");
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output must be a string");
    c.output = doc["output"].get<std::string>();
  }
  if (doc.contains("format")) {
    if (!doc["format"].is_string()) throw ConfigError("format must be a string");
    c.format = parse_format(doc["format"].get<std::string>());
  }
  if (doc.contains("dump_fields")) {
    if (!doc["dump_fields"].is_boolean()) throw ConfigError("dump_fields must be a boolean");
    c.verify.dump_fields = doc["dump_fields"].get<bool>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

BuiltSurface build_surface(const RunConfig& c) {
  const SurfaceSpec& s = c.surface;
  if (s.builtin.empty()) {
    if (s.positions.empty()) throw ConfigError("no surface given (builtin or positions)");
    if (!s.ambient || !s.u || !s.v) throw ConfigError("tabulated surfaces need ambient and grid");
    if (c.grid_counts && ((*c.grid_counts)[0] != s.u->n || (*c.grid_counts)[1] != s.v->n))
      throw ConfigError("a tabulated surface cannot be resampled to another grid");
    const ParamGrid grid = make_grid(*s.u, *s.v, c);
    return {load_tabulated(*s.ambient, grid, s.positions), "tabulated", ojson::object()};
  }
  const BuiltinSurface b = builtin_surface(s.builtin, s.params);
  if (s.ambient && !same_space(*s.ambient, b.space))
    throw ConfigError("ambient does not match builtin '" + b.name + "'");
  const ParamGrid grid = make_grid(s.u.value_or(default_axis(b.u)), s.v.value_or(default_axis(b.v)), c);
  ojson params = ojson::object();
  for (const auto& [k, v] : b.params.items()) params[k] = v;
  return {sample(b, grid, sampling_of(c)), b.name, params};
}

MuProblem build_mu_problem(const RunConfig& c) {
  const AxisSpec def{0.0, 2.0 * M_PI, 64, true};
  const ParamGrid grid = make_grid(c.surface.u.value_or(def), c.surface.v.value_or(def), c);
  if (!grid.doubly_periodic()) throw ConfigError("solve-mu needs a doubly periodic grid");
  const MuSpec& m = c.mu;
  if (!(m.h_norm > 0.0)) throw ConfigError("|H| must be positive");

  std::vector<double> kn = m.ambient_curvature_values;
  if (kn.empty()) kn.assign(grid.size(), m.ambient_curvature);
  if (kn.size() != grid.size()) throw ConfigError("mu.KN has the wrong number of nodes");

  std::vector<double> mu0 = m.initial_values;
  if (mu0.empty()) {
    double scale = 0.0;
    if (m.initial_scale) {
      scale = *m.initial_scale;
    } else {
      if (!m.ambient_curvature_values.empty())
        throw ConfigError("mu.initial.scale is required with a non-constant K^N");
      scale = constant_root(m.h_norm, m.ambient_curvature);
    }
    mu0.resize(grid.size());
    for (int j = 0; j < grid.nv(); ++j)
      for (int i = 0; i < grid.nu(); ++i)
        mu0[grid.node(i, j)] =
            scale * (1.0 + m.perturbation * std::sin(grid.u(i)) * std::sin(grid.v(j)));
  }
  if (mu0.size() != grid.size()) throw ConfigError("mu.initial has the wrong number of nodes");
  MuProblem p{grid, m.h_norm, Field::from_values(grid, std::move(kn)),
              Field::from_values(grid, std::move(mu0))};
  validate(p);
  return p;
}

// --- runs ---------------------------------------------------------------

GeometryReport run_verify(const RunConfig& c) {
  const BuiltSurface s = build_surface(c);
  GeometryReport rep = verify_surface(s.jet, s.id, c.verify);
  rep.meta = with_command(rep.meta, Command::verify, s.params);
  return rep;
}

GeometryReport run_convergence(const RunConfig& c) {
  if (c.levels < 3) throw ConfigError("convergence needs levels >= 3");
  if (c.surface.builtin.empty()) throw ConfigError("convergence needs a builtin surface");
  const BuiltinSurface b = builtin_surface(c.surface.builtin, c.surface.params);
  if (c.surface.ambient && !same_space(*c.surface.ambient, b.space))
    throw ConfigError("ambient does not match builtin '" + b.name + "'");
  AxisSpec u = c.surface.u.value_or(AxisSpec{b.u.min, b.u.max, b.u.periodic ? 32 : 33, b.u.periodic});
  AxisSpec v = c.surface.v.value_or(AxisSpec{b.v.min, b.v.max, b.v.periodic ? 32 : 33, b.v.periodic});
  const ParamGrid base = make_grid(u, v, c);
  const Sampling mode = sampling_of(c);

  VerifyOptions opt = c.verify;
  if (!opt.margin) opt.margin = std::array<double, 2>{8.0 * base.hu(), 8.0 * base.hv()};

  std::vector<GeometryReport> reps;
  ojson grids = ojson::array(), spacings = ojson::array();
  for (int level = 0; level < c.levels; ++level) {
    const ParamGrid g = level == 0 ? base : base.refined(1 << level);
    reps.push_back(verify_surface(sample(b, g, mode), b.name, opt));
    grids.push_back(ojson::array({g.nu(), g.nv()}));
    spacings.push_back(ojson::array({g.hu(), g.hv()}));
  }
  GeometryReport rep = reps.back();

  const double kappa = rep.summary("curvature_scale").value_or(0.0);
  const double floor = 1e-10 * std::pow(1.0 + kappa, 4);
  ojson rows = ojson::array();
  bool orders_ok = true;
  std::vector<std::string> slow;
  for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
    const ResidualEntry& fine = rep.residuals[i];
    ojson linf = ojson::array(), l2 = ojson::array(), orders = ojson::array();
    bool exact = true, holds_everywhere = true;
    for (const auto& r : reps) {
      const ResidualEntry* e = r.residual(fine.name);
      linf.push_back(e->linf);
      l2.push_back(e->l2);
      exact = exact && e->linf <= floor;
      holds_everywhere = holds_everywhere && e->holds;
    }
    double order = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < c.levels; ++k) {
      const double a = linf[k].get<double>(), bb = linf[k + 1].get<double>();
      if (a <= floor && bb <= floor) {
        orders.push_back(nullptr);
        continue;
      }
      const double p = std::log2(a / std::max(bb, std::numeric_limits<double>::min()));
      orders.push_back(p);
      order = std::min(order, p);
    }
    const bool required = fine.asserted || holds_everywhere;
    const bool ok = !required || exact || order >= kRequiredOrder;
    if (!ok) {
      orders_ok = false;
      slow.push_back(fine.name);
    }
    ojson row = {{"name", fine.name}, {"paper_ref", fine.paper_ref}, {"linf", linf}, {"l2", l2},
                 {"orders", orders}};
    if (exact) row["estimated_order"] = "exact";
    else row["estimated_order"] = order;
    row["required"] = required;
    row["ok"] = ok;
    rows.push_back(row);
  }

  ojson conv = {{"levels", c.levels},
                {"grids", grids},
                {"spacings", spacings},
                {"margin", ojson::array({(*opt.margin)[0], (*opt.margin)[1]})},
                {"required_order", kRequiredOrder},
                {"exact_floor", floor},
                {"rows", rows}};
  ojson params = ojson::object();
  for (const auto& [k, val] : b.params.items()) params[k] = val;
  rep.meta = with_command(rep.meta, Command::convergence, params);
  rep.meta["sampling"] = to_string(mode);
  rep.meta["slow_convergence"] = slow;
  rep.flags.push_back({"orders_ok", orders_ok});
  rep.sections.push_back({"convergence", conv});
  return rep;
}

GeometryReport run_solve_mu(const RunConfig& c) {
  const MuProblem p = build_mu_problem(c);
  MuSolution s;
  try {
    s = solve_mu(p, c.newton);
  } catch (const SingularJacobianError& e) {
    s = e.partial();
  }
  const ParamGrid& g = p.grid;
  const NodeMask all = full_mask(g);
  const std::vector<double> ones(g.size(), 1.0);
  GeometryReport rep;
  auto add = [&](const std::string& name, const std::string& key, const std::vector<double>& v,
                 double tol, bool asserted) {
    const double inf = linf(v, all);
    rep.residuals.push_back({name, key, l2(v, ones, g, all), inf, asserted, inf <= tol});
  };

  const std::vector<double> res = mu_residual(s.mu, p).values();
  const std::vector<double> gauss = gauss_consistency(s).values();
  const double h2 = p.h_norm * p.h_norm;
  std::vector<std::string> failed;
  add("mu_equation", "mu.equation", res, c.newton.tol, s.converged);
  add("gauss_consistency", "mu.gauss_consistency", gauss, 0.0, false);

  const auto [mulo, muhi] = min_max(s.mu.values());
  const auto [kglo, kghi] = min_max(gauss_curvature_conformal(-0.5 * log(s.mu)).values());
  rep.summaries = {{"iterations", static_cast<double>(s.iterations)},
                   {"final_residual", s.history.back()},
                   {"mu_min", mulo},
                   {"mu_max", muhi},
                   {"K_min", kglo},
                   {"K_max", kghi}};

  std::vector<double> rho;
  if (s.converged) {
    const MuReconstruction r = reconstruct_geometry(s);
    const Metric m = Metric::conformal(r.chart);
    const double scale = 1e-12 * (1.0 + h2 + muhi) * 10.0;
    add("reconstruction_trace", "mu.reconstruction_trace",
        (trace(r.a_h, m) - 2.0 * h2).values(), scale, true);
    const Field h2f = constant_like(s.mu, h2);
    const PrincipalCurvatures pc = principal_curvatures(r.a_h, m, h2f, 0.0);
    std::vector<double> gap(g.size());
    for (std::size_t n = 0; n < g.size(); ++n)
      gap[n] = std::max(std::abs(pc.lambda1[n] - r.lambda1.value(n)),
                        std::abs(pc.lambda2[n] - r.lambda2.value(n)));
    add("reconstruction_eigenvalues", "mu.reconstruction_eigenvalues", gap, scale, true);
    const auto [l1lo, l1hi] = min_max(r.lambda1.values());
    const auto [l2lo, l2hi] = min_max(r.lambda2.values());
    rep.summaries.push_back({"lambda1_min", l1lo});
    rep.summaries.push_back({"lambda1_max", l1hi});
    rep.summaries.push_back({"lambda2_min", l2lo});
    rep.summaries.push_back({"lambda2_max", l2hi});
    rho = r.chart.rho.values();
  }
  for (const auto& r : rep.residuals)
    if (r.asserted && !r.holds) failed.push_back(r.name);

  rep.flags = {{"converged", s.converged},
               {"mu_positive", mulo > 0.0},
               {"least_norm_steps", s.least_norm_used},
               {"identities_hold", s.converged && failed.empty()}};

  const auto [knlo, knhi] = min_max(p.ambient_curvature.values());
  auto& meta = rep.meta;
  meta["command"] = to_string(Command::solve_mu);
  meta["grid"] = grid_json(g);
  meta["boundary"] = "doubly periodic (modeling choice)";
  meta["laplacian"] = "geometer (-div grad)";
  meta["H"] = p.h_norm;
  meta["KN"] = {{"min", knlo}, {"max", knhi}};
  meta["newton"] = {{"tol", c.newton.tol},
                    {"max_iter", c.newton.max_iter},
                    {"max_halvings", c.newton.max_halvings},
                    {"armijo", c.newton.armijo},
                    {"mu_floor", c.newton.mu_floor}};
  meta["status"] = s.status;
  meta["failed_assertions"] = failed;
  rep.sections.push_back({"newton", {{"residual_history", s.history}, {"step_lengths", s.step_lengths}}});
  if (c.verify.dump_fields) {
    rep.fields.push_back({"mu", s.mu.values()});
    if (!rho.empty()) rep.fields.push_back({"rho", rho});
    rep.fields.push_back({"gauss_consistency", gauss});
  }
  return rep;
}

int exit_code(const RunConfig& c, const GeometryReport& r) {
  if (c.command == Command::solve_mu && !r.flag("converged").value_or(false)) return 4;
  if (!r.passed()) return 2;
  if (c.command == Command::convergence && !r.flag("orders_ok").value_or(false)) return 2;
  return 0;
}

// --- serialization ------------------------------------------------------

ojson to_json(const GeometryReport& r) {
  ojson out = ojson::object();
  out["meta"] = r.meta;
  ojson res = ojson::array();
  for (const auto& e : r.residuals)
    res.push_back({{"name", e.name}, {"paper_ref", e.paper_ref}, {"l2", e.l2}, {"linf", e.linf}});
  out["residuals"] = res;
  ojson sums = ojson::object();
  for (const auto& [k, v] : r.summaries) sums[k] = v;
  out["summaries"] = sums;
  ojson flags = ojson::object();
  for (const auto& [k, v] : r.flags) flags[k] = v;
  out["flags"] = flags;
  if (!r.fields.empty()) {
    ojson f = ojson::object();
    for (const auto& [k, v] : r.fields) f[k] = v;
    out["fields"] = f;
  }
  for (const auto& [k, v] : r.sections) out[k] = v;
  return out;
}

std::string dump_json(const ojson& doc) {
  std::ostringstream os;
  write(os, doc, 0);
  os << "\n";
  return os.str();
}

std::string to_csv(const GeometryReport& r) {
  std::ostringstream os;
  os << "name,paper_ref,l2,linf\n";
  for (const auto& e : r.residuals)
    os << e.name << ',' << e.paper_ref << ',' << format_double(e.l2) << ','
       << format_double(e.linf) << '\n';
  return os.str();
}

std::string render(const GeometryReport& r, Format f) {
  return f == Format::json ? dump_json(to_json(r)) : to_csv(r);
}

void emit_report(const GeometryReport& r, Format f, const std::string& path) {
  const std::string text = render(r, f);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace bicons
