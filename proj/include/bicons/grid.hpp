#pragma once

// Parameter grids, fields over them, and flat finite-difference operators.

#include <cstddef>
#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bicons/error.hpp"
#include "bicons/jet.hpp"

namespace bicons {

/// Uniform rectangular (u, v) grid. Node (i, j) sits at
/// (u_min + i*h_u, v_min + j*h_v) and is stored at index i + nu*j, i.e. the
/// u index varies fastest. On a periodic axis the node at the upper bound is
/// not stored (it wraps onto node 0).
class ParamGrid {
 public:
  ParamGrid() = default;
  ParamGrid(double u_min, double u_max, int nu, bool periodic_u, double v_min,
            double v_max, int nv, bool periodic_v);

  double u_min() const { return u_min_; }
  double u_max() const { return u_max_; }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  int nu() const { return nu_; }
  int nv() const { return nv_; }
  bool periodic_u() const { return periodic_u_; }
  bool periodic_v() const { return periodic_v_; }
  bool periodic(Axis a) const { return a == Axis::u ? periodic_u_ : periodic_v_; }
  bool doubly_periodic() const { return periodic_u_ && periodic_v_; }
  int count(Axis a) const { return a == Axis::u ? nu_ : nv_; }
  double spacing(Axis a) const { return a == Axis::u ? hu_ : hv_; }
  double hu() const { return hu_; }
  double hv() const { return hv_; }
  std::size_t size() const { return static_cast<std::size_t>(nu_) * nv_; }

  double u(int i) const { return u_min_ + i * hu_; }
  double v(int j) const { return v_min_ + j * hv_; }
  std::size_t node(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(nu_) * j; }

  /// "NUxNV[pu,pv]" style descriptor used in reports.
  std::string describe() const;

  /// Same domain, node spacing multiplied by `factor` (every factor-th node).
  /// Periodic axes require nu divisible by factor.
  ParamGrid coarsened(int factor) const;
  /// Same domain, spacing divided by `factor`.
  ParamGrid refined(int factor) const;

  friend bool operator==(const ParamGrid&, const ParamGrid&) = default;

 private:
  double u_min_ = 0, u_max_ = 1, v_min_ = 0, v_max_ = 1;
  int nu_ = 0, nv_ = 0;
  bool periodic_u_ = false, periodic_v_ = false;
  double hu_ = 0, hv_ = 0;
};

/// Builds a grid, validating extent and node counts.
ParamGrid build_grid(std::pair<double, double> u_bounds, std::pair<double, double> v_bounds,
                     int nu, int nv, bool periodic_u, bool periodic_v);

/// Where a field's derivatives come from: exact jets carried per node, or
/// finite differences of the node values.
enum class JetSource { analytic, finite_difference };

const char* to_string(JetSource s);

/// A scalar field over a grid. Analytic fields carry a Jet per node and are
/// differentiated exactly (each derivative drops one jet order); finite-
/// difference fields carry node values only and are differentiated with
/// second-order stencils.
class Field {
 public:
  Field() = default;
  Field(const ParamGrid& grid, JetSource source, int order, double fill = 0.0);

  static Field from_values(const ParamGrid& grid, std::vector<double> values);

  /// Evaluates f(Jet u, Jet v) -> Jet at every node. With a finite-difference
  /// source only the node value is kept.
  template <class F>
  static Field from_function(const ParamGrid& grid, F&& f, JetSource source,
                             int order = Jet::kMaxOrder) {
    const int p = source == JetSource::analytic ? order : 0;
    Field out(grid, source, p);
    for (int j = 0; j < grid.nv(); ++j) {
      for (int i = 0; i < grid.nu(); ++i) {
        const Jet u = Jet::variable(grid.u(i), Axis::u, p);
        const Jet v = Jet::variable(grid.v(j), Axis::v, p);
        out.set_jet(grid.node(i, j), Jet(f(u, v)).truncated(p));
      }
    }
    return out;
  }

  const ParamGrid& grid() const { return grid_; }
  JetSource source() const { return source_; }
  bool analytic() const { return source_ == JetSource::analytic; }
  int order() const { return order_; }
  std::size_t size() const { return grid_.size(); }
  bool empty() const { return data_.empty(); }

  Jet jet(std::size_t node) const;
  void set_jet(std::size_t node, const Jet& j);
  double value(std::size_t node) const { return data_[node * stride_]; }
  std::vector<double> values() const;

  /// Packed jet coefficients, `stride()` per node, ordered by total degree.
  const double* coefficients() const { return data_.data(); }
  double* coefficients() { return data_.data(); }
  std::size_t stride() const { return stride_; }

  /// Same field with the jets truncated to `order` (no-op when not lower).
  Field truncated_to(int order) const;

  /// Node values only; the result is a finite-difference field.
  Field values_only() const;

  Field operator-() const;
  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(const Field& o);
  Field& operator*=(double s);
  Field& operator+=(double s);

 private:
  ParamGrid grid_;
  JetSource source_ = JetSource::finite_difference;
  int order_ = 0;
  std::size_t stride_ = 1;
  std::vector<double> data_;
};

/// Pointwise map over jets. Operands must share grid and source.
Field map(const Field& a, const std::function<Jet(const Jet&)>& f);
Field zip(const Field& a, const Field& b, const std::function<Jet(const Jet&, const Jet&)>& f);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator/(const Field& a, const Field& b);
Field operator+(const Field& a, double s);
Field operator+(double s, const Field& a);
Field operator-(const Field& a, double s);
Field operator-(double s, const Field& a);
Field operator*(const Field& a, double s);
Field operator*(double s, const Field& a);
Field operator/(const Field& a, double s);
Field operator/(double s, const Field& a);
Field sqrt(const Field& a);
Field exp(const Field& a);
Field log(const Field& a);
Field sin(const Field& a);
Field cos(const Field& a);
Field pow(const Field& a, double e);

/// Flat stencil derivative of the node values, order 1 or 2. Central
/// second-order stencils inside and on periodic axes; one-sided second-order
/// stencils at non-periodic boundaries. Always returns a finite-difference
/// field.
Field fd_derivative(const Field& f, Axis axis, int order);

/// Restriction to every factor-th node (see ParamGrid::coarsened).
Field subsample(const Field& f, int factor);

/// Source-aware first derivative: exact jet shift or fd_derivative.
Field partial(const Field& f, Axis axis);
/// Source-aware pure second derivative (compact stencil for FD fields).
Field partial2(const Field& f, Axis axis);
/// Source-aware mixed derivative d_u d_v.
Field partial_uv(const Field& f);

/// A tangent field of the surface, stored by its covariant components
/// <V, d_u> and <V, d_v>. On a flat chart these are the plain components.
struct TangentField {
  Field u, v;
  Field& operator[](int k) { return k == 0 ? u : v; }
  const Field& operator[](int k) const { return k == 0 ? u : v; }
};

TangentField operator+(const TangentField& a, const TangentField& b);
TangentField operator-(const TangentField& a, const TangentField& b);
TangentField operator*(double s, const TangentField& a);

/// Analyst's flat Laplacian f_uu + f_vv.
Field euclid_laplacian(const Field& f);
/// Flat gradient (f_u, f_v).
TangentField euclid_gradient(const Field& f);

/// Node-wise mask; true means "included in norms".
using NodeMask = std::vector<char>;
NodeMask full_mask(const ParamGrid& grid);
/// Excludes nodes closer than `margin` (parameter units) to a non-periodic
/// boundary.
NodeMask interior_mask(const ParamGrid& grid, double margin_u, double margin_v);

double linf(const std::vector<double>& values, const NodeMask& mask);
/// sqrt(sum value^2 * weight * h_u * h_v) over the mask.
double l2(const std::vector<double>& values, const std::vector<double>& weight,
          const ParamGrid& grid, const NodeMask& mask);
/// Periodic trapezoid / plain Riemann sum of value*weight*h_u*h_v.
double integrate(const std::vector<double>& values, const std::vector<double>& weight,
                 const ParamGrid& grid);

}  // namespace bicons
