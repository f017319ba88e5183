#include "bicons/corpus.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace bicons {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

const std::vector<std::string> kNames = {"plane",         "sphere", "cylinder", "helix_line_r4",
                                         "product_torus", "graph"};

// Fills defaults and rejects unknown keys.
json resolve_params(const std::string& surface, const json& given, const json& defaults) {
  json out = defaults;
  if (given.is_null()) return out;
  if (!given.is_object()) throw ConfigError(surface + ": params must be an object");
  for (const auto& [key, value] : given.items()) {
    if (!defaults.contains(key)) throw ConfigError(surface + ": unknown parameter '" + key + "'");
    if (defaults[key].is_number() != value.is_number() ||
        defaults[key].is_string() != value.is_string())
      throw ConfigError(surface + ": parameter '" + key + "' has the wrong type");
    out[key] = value;
  }
  return out;
}

double positive(const json& p, const char* key, const std::string& surface) {
  const double x = p.at(key).get<double>();
  if (!(x > 0.0) || !std::isfinite(x))
    throw ConfigError(surface + ": parameter '" + key + "' must be positive");
  return x;
}

double finite(const json& p, const char* key, const std::string& surface) {
  const double x = p.at(key).get<double>();
  if (!std::isfinite(x)) throw ConfigError(surface + ": parameter '" + key + "' must be finite");
  return x;
}

BuiltinSurface plane(const json& given) {
  BuiltinSurface s{"plane", resolve_params("plane", given, json::object()),
                   AmbientSpace::euclidean(3), {0, 1, false}, {0, 1, false}, {}, {}};
  s.expected = {0.0, 0.0, 0.0, 0.0, true, true, true, true};
  s.position = [](const Jet& u, const Jet& v) {
    return std::vector<Jet>{u, v, 0.0 * u};
  };
  return s;
}

BuiltinSurface sphere(const json& given) {
  const json p = resolve_params("sphere", given, {{"r", 1.0}, {"chart", "spherical"}});
  const double r = positive(p, "r", "sphere");
  const std::string chart = p["chart"];
  BuiltinSurface s{"sphere", p, AmbientSpace::euclidean(3), {0, 2 * kPi, true}, {}, {}, {}};
  s.expected = {1.0 / r, 1.0 / (r * r), 1.0 / (r * r), 1.0 / (r * r), true, true, true, false};
  if (chart == "spherical") {
    // u azimuth, v polar angle kept away from the poles
    s.v = {0.3, kPi - 0.3, false};
    s.position = [r](const Jet& u, const Jet& v) {
      return std::vector<Jet>{r * sin(v) * cos(u), r * sin(v) * sin(u), r * cos(v)};
    };
  } else if (chart == "mercator") {
    s.v = {-1.2, 1.2, false};
    s.expected.isothermal = true;
    s.position = [r](const Jet& u, const Jet& v) {
      const Jet sech = 1.0 / cosh(v);
      return std::vector<Jet>{r * sech * cos(u), r * sech * sin(u), r * tanh(v)};
    };
  } else {
    throw ConfigError("sphere: chart must be 'spherical' or 'mercator'");
  }
  return s;
}

BuiltinSurface cylinder(const json& given) {
  const json p = resolve_params("cylinder", given, {{"r", 1.0}, {"warp", 0.0}});
  const double r = positive(p, "r", "cylinder");
  const double eps = finite(p, "warp", "cylinder");
  BuiltinSurface s{"cylinder", p, AmbientSpace::euclidean(3), {0, 2 * kPi, true}, {-1, 1, false},
                   {}, {}};
  s.expected = {0.5 / r, 0.0, 0.5 / (r * r), 0.0, true, true, true, true};
  // (theta + i z) = w + eps sin w is holomorphic in w = u + i v, so the
  // chart stays isothermal.
  s.position = [r, eps](const Jet& u, const Jet& v) {
    const Jet theta = u + eps * sin(u) * cosh(v);
    const Jet z = v + eps * cos(u) * sinh(v);
    return std::vector<Jet>{r * cos(theta), r * sin(theta), r * z};
  };
  return s;
}

BuiltinSurface helix_line(const json& given) {
  const json p = resolve_params("helix_line_r4", given, {{"k", 1.0}, {"tau", 0.5}, {"a", 0.0}});
  const double k = positive(p, "k", "helix_line_r4");
  const double tau = finite(p, "tau", "helix_line_r4");
  const double a = finite(p, "a", "helix_line_r4");
  BuiltinSurface s{"helix_line_r4", p, AmbientSpace::euclidean(4), {0, 4, false}, {-1, 1, false},
                   {}, {}};
  s.expected = {0.5 * k, 0.0, 0.5 * k * k, 0.0, true, tau == 0.0, true, true};
  const double q = k * k + tau * tau;
  const double radius = k / q, pitch = tau / q, rate = std::sqrt(q);
  s.position = [=](const Jet& u, const Jet& v) {
    const Jet t = rate * u;
    return std::vector<Jet>{radius * cos(t), radius * sin(t), pitch * t, v + a};
  };
  return s;
}

BuiltinSurface product_torus(const json& given) {
  const json p =
      resolve_params("product_torus", given, {{"r1", 1.0}, {"r2", 1.0}, {"ambient", "euclidean"}});
  const double r1 = positive(p, "r1", "product_torus");
  const double r2 = positive(p, "r2", "product_torus");
  const std::string amb = p["ambient"];
  const double rr = std::sqrt(r1 * r1 + r2 * r2);
  AmbientSpace space = AmbientSpace::euclidean(4);
  ExpectedValues e;
  if (amb == "euclidean") {
    const double l1 = 0.5 / (r1 * r1), l2 = 0.5 / (r2 * r2);
    e = {std::sqrt(0.25 / (r1 * r1) + 0.25 / (r2 * r2)), 0.0, std::max(l1, l2), std::min(l1, l2),
         true, true, true, true};
  } else if (amb == "sphere") {
    space = AmbientSpace::sphere(3, rr);
    // B_11 = -(r2 / (r1 R)) nu, B_22 = (r1 / (r2 R)) nu for the unit normal nu
    const double b1 = -r2 / (r1 * rr), b2 = r1 / (r2 * rr);
    const double h = 0.5 * (b1 + b2);
    const double l1 = b1 * h, l2 = b2 * h;
    e = {std::abs(h), 0.0, std::max(l1, l2), std::min(l1, l2), true, true, true, true};
  } else {
    throw ConfigError("product_torus: ambient must be 'euclidean' or 'sphere'");
  }
  BuiltinSurface s{"product_torus", p, space, {0, 2 * kPi * r1, true}, {0, 2 * kPi * r2, true},
                   e, {}};
  s.position = [r1, r2](const Jet& u, const Jet& v) {
    return std::vector<Jet>{r1 * cos(u / r1), r1 * sin(u / r1), r2 * cos(v / r2),
                            r2 * sin(v / r2)};
  };
  return s;
}

BuiltinSurface graph(const json& given) {
  const json p = resolve_params("graph", given, {{"expression", "u2_minus_v3"}});
  const std::string expr = p["expression"];
  BuiltinSurface s{"graph", p, AmbientSpace::euclidean(3), {-0.5, 0.5, false}, {-0.5, 0.5, false},
                   {}, {}};
  s.expected.isothermal = false;
  if (expr == "u2_minus_v3") {
    s.position = [](const Jet& u, const Jet& v) {
      return std::vector<Jet>{u, v, u * u - v * v * v};
    };
  } else if (expr == "paraboloid") {
    s.position = [](const Jet& u, const Jet& v) {
      return std::vector<Jet>{u, v, u * u + v * v};
    };
  } else {
    throw ConfigError("graph: expression must be 'u2_minus_v3' or 'paraboloid'");
  }
  return s;
}

void check_period(const char* axis, double lo, double hi, bool periodic, const AxisDefault& d,
                  const std::string& name) {
  if (!periodic) return;
  const double span = d.max - d.min;
  if (!d.periodic || std::abs((hi - lo) - span) > 1e-9 * span)
    throw ConfigError(name + ": axis " + axis + " is not periodic over the requested range");
}

}  // namespace

const std::vector<std::string>& builtin_names() { return kNames; }

BuiltinSurface builtin_surface(const std::string& name, const json& params) {
  if (name == "plane") return plane(params);
  if (name == "sphere") return sphere(params);
  if (name == "cylinder") return cylinder(params);
  if (name == "helix_line_r4") return helix_line(params);
  if (name == "product_torus") return product_torus(params);
  if (name == "graph") return graph(params);
  throw ConfigError("unknown builtin surface '" + name + "'");
}

ParamGrid default_grid(const BuiltinSurface& s, int nu, int nv) {
  return build_grid({s.u.min, s.u.max}, {s.v.min, s.v.max}, nu, nv, s.u.periodic, s.v.periodic);
}

ImmersionJet make_surface(const BuiltinSurface& s, const ParamGrid& grid, JetSource source) {
  check_period("u", grid.u_min(), grid.u_max(), grid.periodic_u(), s.u, s.name);
  check_period("v", grid.v_min(), grid.v_max(), grid.periodic_v(), s.v, s.name);
  if (s.name == "cylinder") {
    const double eps = s.params["warp"].get<double>();
    const double vmax = std::max(std::abs(grid.v_min()), std::abs(grid.v_max()));
    if (std::abs(eps) * std::cosh(vmax) >= 0.5)
      throw ConfigError("cylinder: warp too large for the v range");
  }
  const int dim = s.space.coordinate_count();
  const int order = source == JetSource::analytic ? Jet::kMaxOrder : 0;
  AmbientField x;
  for (int k = 0; k < dim; ++k) x.c.emplace_back(grid, source, order);
  for (int j = 0; j < grid.nv(); ++j) {
    for (int i = 0; i < grid.nu(); ++i) {
      const std::vector<Jet> p = s.position(Jet::variable(grid.u(i), Axis::u, order),
                                            Jet::variable(grid.v(j), Axis::v, order));
      for (int k = 0; k < dim; ++k) x[k].set_jet(grid.node(i, j), p[k]);
    }
  }
  return make_immersion(s.space, std::move(x));
}

namespace {

ImmersionJet sample_default(const std::string& name, const json& params, const ParamGrid& grid,
                            JetSource source) {
  return make_surface(builtin_surface(name, params), grid, source);
}

}  // namespace

ImmersionJet make_helix_line_r4(double k, double tau, double a, const ParamGrid& grid,
                                JetSource source) {
  return sample_default("helix_line_r4", {{"k", k}, {"tau", tau}, {"a", a}}, grid, source);
}
ImmersionJet make_sphere(double r, const ParamGrid& grid, JetSource source) {
  return sample_default("sphere", {{"r", r}}, grid, source);
}
ImmersionJet make_cylinder(double r, const ParamGrid& grid, JetSource source) {
  return sample_default("cylinder", {{"r", r}}, grid, source);
}
ImmersionJet make_product_torus(double r1, double r2, const ParamGrid& grid, JetSource source) {
  return sample_default("product_torus", {{"r1", r1}, {"r2", r2}}, grid, source);
}
ImmersionJet make_graph(const std::string& expression, const ParamGrid& grid, JetSource source) {
  return sample_default("graph", {{"expression", expression}}, grid, source);
}

ImmersionJet load_tabulated(const AmbientSpace& space, const ParamGrid& grid,
                            const std::vector<std::vector<double>>& positions) {
  if (positions.size() != grid.size())
    throw ConfigError("surface file: expected " + std::to_string(grid.size()) + " positions, got " +
                      std::to_string(positions.size()));
  const std::size_t dim = static_cast<std::size_t>(space.coordinate_count());
  std::vector<std::vector<double>> comps(dim, std::vector<double>(grid.size()));
  for (std::size_t n = 0; n < positions.size(); ++n) {
    if (positions[n].size() != dim)
      throw ConfigError("surface file: position " + std::to_string(n) + " has " +
                        std::to_string(positions[n].size()) + " components, expected " +
                        std::to_string(dim));
    for (std::size_t k = 0; k < dim; ++k) comps[k][n] = positions[n][k];
  }
  double scale = 0.0;
  for (const auto& row : positions)
    for (double x : row) scale = std::max(scale, std::abs(x));
  auto coincident = [&](std::size_t a, std::size_t b) {
    double d = 0.0;
    for (std::size_t k = 0; k < dim; ++k) d = std::max(d, std::abs(positions[a][k] - positions[b][k]));
    return d <= 1e-14 * (1.0 + scale);
  };
  for (int j = 0; j < grid.nv(); ++j) {
    for (int i = 0; i < grid.nu(); ++i) {
      const std::size_t n = grid.node(i, j);
      if (i + 1 < grid.nu() && coincident(n, grid.node(i + 1, j)))
        throw NumericalError("surface file: degenerate nodes (" + std::to_string(i) + "," +
                             std::to_string(j) + ") and its u-neighbour coincide");
      if (j + 1 < grid.nv() && coincident(n, grid.node(i, j + 1)))
        throw NumericalError("surface file: degenerate nodes (" + std::to_string(i) + "," +
                             std::to_string(j) + ") and its v-neighbour coincide");
    }
  }
  AmbientField x;
  for (auto& c : comps) x.c.push_back(Field::from_values(grid, std::move(c)));
  ImmersionJet jet = make_immersion(space, std::move(x));
  induced_metric(partial(jet.x, Axis::u), partial(jet.x, Axis::v));
  return jet;
}

std::vector<std::vector<double>> tabulate(const ImmersionJet& jet) {
  std::vector<std::vector<double>> out(jet.grid.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const Eigen::VectorXd p = jet.x.at(n);
    out[n].assign(p.data(), p.data() + p.size());
  }
  return out;
}

}  // namespace bicons
