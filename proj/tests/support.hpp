#pragma once

// Helpers shared by the unit tests.

#include <cmath>
#include <functional>
#include <vector>

#include "bicons/grid.hpp"

namespace testing {

using bicons::Field;
using bicons::Jet;
using bicons::JetSource;
using bicons::NodeMask;
using bicons::ParamGrid;

using JetFn = std::function<Jet(const Jet&, const Jet&)>;

inline Field analytic(const ParamGrid& g, const JetFn& f) {
  return Field::from_function(g, f, JetSource::analytic);
}

inline Field sampled(const ParamGrid& g, const JetFn& f) {
  return Field::from_function(g, f, JetSource::finite_difference);
}

inline Field make(const ParamGrid& g, const JetFn& f, JetSource s) {
  return Field::from_function(g, f, s);
}

inline double max_abs(const Field& f, const NodeMask* mask = nullptr) {
  double m = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n)
    if (!mask || (*mask)[n]) m = std::max(m, std::abs(f.value(n)));
  return m;
}

inline double max_abs(const std::vector<double>& v, const NodeMask* mask = nullptr) {
  double m = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n)
    if (!mask || (*mask)[n]) m = std::max(m, std::abs(v[n]));
  return m;
}

inline double max_diff(const Field& a, const Field& b, const NodeMask* mask = nullptr) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n)
    if (!mask || (*mask)[n]) m = std::max(m, std::abs(a.value(n) - b.value(n)));
  return m;
}

inline double max_diff(const Field& a, const std::function<double(double, double)>& exact,
                       const NodeMask* mask = nullptr) {
  const ParamGrid& g = a.grid();
  double m = 0.0;
  for (int j = 0; j < g.nv(); ++j)
    for (int i = 0; i < g.nu(); ++i) {
      const std::size_t n = g.node(i, j);
      if (!mask || (*mask)[n]) m = std::max(m, std::abs(a.value(n) - exact(g.u(i), g.v(j))));
    }
  return m;
}

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace testing
