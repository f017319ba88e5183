#include "bicons/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bicons {

ParamGrid::ParamGrid(double u_min, double u_max, int nu, bool periodic_u, double v_min,
                     double v_max, int nv, bool periodic_v)
    : u_min_(u_min), u_max_(u_max), v_min_(v_min), v_max_(v_max), nu_(nu), nv_(nv),
      periodic_u_(periodic_u), periodic_v_(periodic_v) {
  if (!std::isfinite(u_min) || !std::isfinite(u_max) || !(u_max > u_min))
    throw ConfigError("grid: u extent must be positive and finite");
  if (!std::isfinite(v_min) || !std::isfinite(v_max) || !(v_max > v_min))
    throw ConfigError("grid: v extent must be positive and finite");
  if (nu < 4 || nv < 4) throw ConfigError("grid: need at least 4 nodes per axis");
  hu_ = (u_max - u_min) / (periodic_u ? nu : nu - 1);
  hv_ = (v_max - v_min) / (periodic_v ? nv : nv - 1);
}

std::string ParamGrid::describe() const {
  std::ostringstream os;
  os << nu_ << "x" << nv_ << "[" << (periodic_u_ ? "periodic" : "open") << ","
     << (periodic_v_ ? "periodic" : "open") << "]";
  return os.str();
}

namespace {

int coarse_count(int n, bool periodic, int factor) {
  if (periodic) {
    if (n % factor != 0) throw ConfigError("grid: periodic node count not divisible by coarsening factor");
    return n / factor;
  }
  if ((n - 1) % factor != 0)
    throw ConfigError("grid: open-axis interval count not divisible by coarsening factor");
  return (n - 1) / factor + 1;
}

}  // namespace

ParamGrid ParamGrid::coarsened(int factor) const {
  return ParamGrid(u_min_, u_max_, coarse_count(nu_, periodic_u_, factor), periodic_u_, v_min_,
                   v_max_, coarse_count(nv_, periodic_v_, factor), periodic_v_);
}

ParamGrid ParamGrid::refined(int factor) const {
  const int nu = periodic_u_ ? nu_ * factor : (nu_ - 1) * factor + 1;
  const int nv = periodic_v_ ? nv_ * factor : (nv_ - 1) * factor + 1;
  return ParamGrid(u_min_, u_max_, nu, periodic_u_, v_min_, v_max_, nv, periodic_v_);
}

ParamGrid build_grid(std::pair<double, double> u_bounds, std::pair<double, double> v_bounds,
                     int nu, int nv, bool periodic_u, bool periodic_v) {
  return ParamGrid(u_bounds.first, u_bounds.second, nu, periodic_u, v_bounds.first,
                   v_bounds.second, nv, periodic_v);
}

const char* to_string(JetSource s) {
  return s == JetSource::analytic ? "analytic" : "finite-difference";
}

// ---------------------------------------------------------------------------

Field::Field(const ParamGrid& grid, JetSource source, int order, double fill)
    : grid_(grid), source_(source), order_(order),
      stride_(static_cast<std::size_t>(Jet::coefficient_count(order))),
      data_(grid.size() * stride_, 0.0) {
  if (source == JetSource::finite_difference && order != 0)
    throw std::logic_error("finite-difference fields carry values only");
  for (std::size_t n = 0; n < grid.size(); ++n) data_[n * stride_] = fill;
}

Field Field::from_values(const ParamGrid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) throw ConfigError("field: value count does not match grid");
  Field f;
  f.grid_ = grid;
  f.source_ = JetSource::finite_difference;
  f.order_ = 0;
  f.stride_ = 1;
  f.data_ = std::move(values);
  return f;
}

// Coefficients are packed by total degree: (0,0), (1,0), (0,1), (2,0), ...
Jet Field::jet(std::size_t node) const {
  Jet j(0.0, order_);
  const double* p = data_.data() + node * stride_;
  for (int d = 0; d <= order_; ++d)
    for (int a = d; a >= 0; --a) j.coeff(a, d - a) = *p++;
  return j;
}

void Field::set_jet(std::size_t node, const Jet& j) {
  double* p = data_.data() + node * stride_;
  for (int d = 0; d <= order_; ++d)
    for (int a = d; a >= 0; --a) *p++ = d <= j.order() ? j.coeff(a, d - a) : 0.0;
}

std::vector<double> Field::values() const {
  std::vector<double> out(size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = data_[n * stride_];
  return out;
}

Field Field::truncated_to(int order) const {
  if (order >= order_) return *this;
  Field r(grid_, source_, order);
  for (std::size_t n = 0; n < size(); ++n)
    std::copy_n(data_.data() + n * stride_, r.stride_, r.data_.data() + n * r.stride_);
  return r;
}

Field Field::values_only() const { return from_values(grid_, values()); }

Field Field::operator-() const {
  Field r = *this;
  for (auto& x : r.data_) x = -x;
  return r;
}

namespace {

void require_compatible(const Field& a, const Field& b) {
  if (a.empty() || b.empty()) throw std::logic_error("field: operation on an empty field");
  if (!(a.grid() == b.grid())) throw std::invalid_argument("field: grid mismatch");
  if (a.source() != b.source()) throw std::invalid_argument("field: jet source mismatch");
}

// Linear ops act directly on packed coefficients of the common order.
Field linear_combine(const Field& a, double sa, const Field& b, double sb) {
  require_compatible(a, b);
  const int p = std::min(a.order(), b.order());
  Field r(a.grid(), a.source(), p);
  const std::size_t w = r.stride(), wa = a.stride(), wb = b.stride();
  const double* pa = a.coefficients();
  const double* pb = b.coefficients();
  double* pr = r.coefficients();
  for (std::size_t n = 0; n < a.size(); ++n)
    for (std::size_t c = 0; c < w; ++c) pr[n * w + c] = sa * pa[n * wa + c] + sb * pb[n * wb + c];
  return r;
}

// Monomial products in packed order: (a,b) sits at d(d+1)/2 + b, d = a+b.
struct ProductTerm {
  int lhs, rhs, out;
};

const std::vector<ProductTerm>& product_terms(int order) {
  static const auto tables = [] {
    std::array<std::vector<ProductTerm>, Jet::kMaxOrder + 1> t;
    auto idx = [](int a, int b) { return (a + b) * (a + b + 1) / 2 + b; };
    for (int p = 0; p <= Jet::kMaxOrder; ++p)
      for (int d1 = 0; d1 <= p; ++d1)
        for (int b1 = 0; b1 <= d1; ++b1)
          for (int d2 = 0; d1 + d2 <= p; ++d2)
            for (int b2 = 0; b2 <= d2; ++b2)
              t[p].push_back({idx(d1 - b1, b1), idx(d2 - b2, b2), idx(d1 - b1 + d2 - b2, b1 + b2)});
    return t;
  }();
  return tables[order];
}

const std::vector<ProductTerm>& reciprocal_terms(int order) {
  static const auto tables = [] {
    std::array<std::vector<ProductTerm>, Jet::kMaxOrder + 1> t;
    for (int p = 0; p <= Jet::kMaxOrder; ++p) {
      for (const auto& term : product_terms(p))
        if (term.lhs != 0) t[p].push_back(term);
      std::stable_sort(t[p].begin(), t[p].end(),
                       [](const ProductTerm& x, const ProductTerm& y) { return x.out < y.out; });
    }
    return t;
  }();
  return tables[order];
}

Field multiply(const Field& a, const Field& b) {
  require_compatible(a, b);
  const int p = std::min(a.order(), b.order());
  Field r(a.grid(), a.source(), p);
  const std::size_t w = r.stride(), wa = a.stride(), wb = b.stride();
  const double* pa = a.coefficients();
  const double* pb = b.coefficients();
  double* pr = r.coefficients();
  if (p == 0) {
    for (std::size_t n = 0; n < a.size(); ++n) pr[n] = pa[n * wa] * pb[n * wb];
    return r;
  }
  const auto& terms = product_terms(p);
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double* x = pa + n * wa;
    const double* y = pb + n * wb;
    double* z = pr + n * w;
    for (const auto& t : terms) z[t.out] += x[t.lhs] * y[t.rhs];
  }
  return r;
}

// 1/a from a * r = 1, solved monomial by monomial in increasing degree.
Field reciprocal(const Field& a) {
  if (a.empty()) throw std::logic_error("field: operation on an empty field");
  Field r(a.grid(), a.source(), a.order());
  const std::size_t w = a.stride();
  const auto& terms = reciprocal_terms(a.order());
  const double* pa = a.coefficients();
  double* pr = r.coefficients();
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double* x = pa + n * w;
    double* z = pr + n * w;
    if (x[0] == 0.0) throw std::domain_error("field: division by zero at node " + std::to_string(n));
    const double r0 = 1.0 / x[0];
    z[0] = r0;
    // terms are sorted by output monomial; each needs only lower ones
    std::size_t t = 0;
    for (std::size_t k = 1; k < w; ++k) {
      double acc = 0.0;
      for (; t < terms.size() && terms[t].out == static_cast<int>(k); ++t)
        acc += x[terms[t].lhs] * z[terms[t].rhs];
      z[k] = -r0 * acc;
    }
  }
  return r;
}

}  // namespace

Field& Field::operator+=(const Field& o) { return *this = linear_combine(*this, 1.0, o, 1.0); }
Field& Field::operator-=(const Field& o) { return *this = linear_combine(*this, 1.0, o, -1.0); }
Field& Field::operator*=(const Field& o) { return *this = *this * o; }
Field& Field::operator*=(double s) {
  for (auto& x : data_) x *= s;
  return *this;
}
Field& Field::operator+=(double s) {
  for (std::size_t n = 0; n < size(); ++n) data_[n * stride_] += s;
  return *this;
}

Field map(const Field& a, const std::function<Jet(const Jet&)>& f) {
  if (a.empty()) throw std::logic_error("field: operation on an empty field");
  Field r(a.grid(), a.source(), a.order());
  for (std::size_t n = 0; n < a.size(); ++n) r.set_jet(n, f(a.jet(n)));
  return r;
}

Field zip(const Field& a, const Field& b, const std::function<Jet(const Jet&, const Jet&)>& f) {
  require_compatible(a, b);
  const int p = std::min(a.order(), b.order());
  Field r(a.grid(), a.source(), p);
  for (std::size_t n = 0; n < a.size(); ++n)
    r.set_jet(n, f(a.jet(n).truncated(p), b.jet(n).truncated(p)));
  return r;
}

Field operator+(const Field& a, const Field& b) { return linear_combine(a, 1.0, b, 1.0); }
Field operator-(const Field& a, const Field& b) { return linear_combine(a, 1.0, b, -1.0); }
Field operator*(const Field& a, const Field& b) { return multiply(a, b); }
Field operator/(const Field& a, const Field& b) {
  if (a.order() > b.order()) return multiply(a, reciprocal(b));
  return multiply(a, reciprocal(b.order() > a.order() ? b.truncated_to(a.order()) : b));
}
Field operator+(const Field& a, double s) { Field r = a; r += s; return r; }
Field operator+(double s, const Field& a) { return a + s; }
Field operator-(const Field& a, double s) { return a + (-s); }
Field operator-(double s, const Field& a) { return (-a) + s; }
Field operator*(const Field& a, double s) { Field r = a; r *= s; return r; }
Field operator*(double s, const Field& a) { return a * s; }
Field operator/(const Field& a, double s) { return a * (1.0 / s); }
Field operator/(double s, const Field& a) { return reciprocal(a) * s; }
Field sqrt(const Field& a) { return map(a, [](const Jet& x) { return sqrt(x); }); }
Field exp(const Field& a) { return map(a, [](const Jet& x) { return exp(x); }); }
Field log(const Field& a) { return map(a, [](const Jet& x) { return log(x); }); }
Field sin(const Field& a) { return map(a, [](const Jet& x) { return sin(x); }); }
Field cos(const Field& a) { return map(a, [](const Jet& x) { return cos(x); }); }
Field pow(const Field& a, double e) {
  return map(a, [e](const Jet& x) { return pow(x, e); });
}

// ---------------------------------------------------------------------------

Field fd_derivative(const Field& f, Axis axis, int order) {
  if (order < 1 || order > 2) throw std::invalid_argument("fd_derivative: order must be 1 or 2");
  const ParamGrid& g = f.grid();
  const std::vector<double> in = f.values();
  std::vector<double> out(in.size());
  const int n = g.count(axis);
  const double h = g.spacing(axis);
  const bool periodic = g.periodic(axis);
  const int other = axis == Axis::u ? g.nv() : g.nu();
  auto at = [&](int line, int k) {
    return axis == Axis::u ? g.node(k, line) : g.node(line, k);
  };
  for (int line = 0; line < other; ++line) {
    auto val = [&](int k) {
      if (periodic) k = ((k % n) + n) % n;
      return in[at(line, k)];
    };
    for (int k = 0; k < n; ++k) {
      double d;
      if (order == 1) {
        if (periodic || (k > 0 && k < n - 1)) d = (val(k + 1) - val(k - 1)) / (2 * h);
        else if (k == 0) d = (-3 * val(0) + 4 * val(1) - val(2)) / (2 * h);
        else d = (3 * val(n - 1) - 4 * val(n - 2) + val(n - 3)) / (2 * h);
      } else {
        if (periodic || (k > 0 && k < n - 1)) d = (val(k + 1) - 2 * val(k) + val(k - 1)) / (h * h);
        else if (k == 0) d = (2 * val(0) - 5 * val(1) + 4 * val(2) - val(3)) / (h * h);
        else d = (2 * val(n - 1) - 5 * val(n - 2) + 4 * val(n - 3) - val(n - 4)) / (h * h);
      }
      out[at(line, k)] = d;
    }
  }
  return Field::from_values(g, std::move(out));
}

Field subsample(const Field& f, int factor) {
  const ParamGrid& fine = f.grid();
  const ParamGrid coarse = fine.coarsened(factor);
  Field r(coarse, f.source(), f.order());
  for (int j = 0; j < coarse.nv(); ++j)
    for (int i = 0; i < coarse.nu(); ++i)
      r.set_jet(coarse.node(i, j), f.jet(fine.node(i * factor, j * factor)));
  return r;
}

Field partial(const Field& f, Axis axis) {
  if (!f.analytic()) return fd_derivative(f, axis, 1);
  if (f.order() == 0) throw NumericalError("analytic jet order exhausted by differentiation");
  Field r(f.grid(), f.source(), f.order() - 1);
  for (std::size_t n = 0; n < f.size(); ++n) r.set_jet(n, f.jet(n).derivative(axis));
  return r;
}

Field partial2(const Field& f, Axis axis) {
  if (!f.analytic()) return fd_derivative(f, axis, 2);
  return partial(partial(f, axis), axis);
}

Field partial_uv(const Field& f) { return partial(partial(f, Axis::u), Axis::v); }

TangentField operator+(const TangentField& a, const TangentField& b) { return {a.u + b.u, a.v + b.v}; }
TangentField operator-(const TangentField& a, const TangentField& b) { return {a.u - b.u, a.v - b.v}; }
TangentField operator*(double s, const TangentField& a) { return {s * a.u, s * a.v}; }

Field euclid_laplacian(const Field& f) { return partial2(f, Axis::u) + partial2(f, Axis::v); }

TangentField euclid_gradient(const Field& f) { return {partial(f, Axis::u), partial(f, Axis::v)}; }

// ---------------------------------------------------------------------------

NodeMask full_mask(const ParamGrid& grid) { return NodeMask(grid.size(), 1); }

NodeMask interior_mask(const ParamGrid& grid, double margin_u, double margin_v) {
  NodeMask m(grid.size(), 1);
  const double eps = 1e-9;
  for (int j = 0; j < grid.nv(); ++j) {
    for (int i = 0; i < grid.nu(); ++i) {
      bool keep = true;
      if (!grid.periodic_u()) {
        const double d = std::min(grid.u(i) - grid.u_min(), grid.u_max() - grid.u(i));
        keep = keep && d >= margin_u - eps * grid.hu();
      }
      if (!grid.periodic_v()) {
        const double d = std::min(grid.v(j) - grid.v_min(), grid.v_max() - grid.v(j));
        keep = keep && d >= margin_v - eps * grid.hv();
      }
      m[grid.node(i, j)] = keep ? 1 : 0;
    }
  }
  return m;
}

double linf(const std::vector<double>& values, const NodeMask& mask) {
  double m = 0.0;
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (!mask[n]) continue;
    if (std::isnan(values[n])) return values[n];
    m = std::max(m, std::abs(values[n]));
  }
  return m;
}

double l2(const std::vector<double>& values, const std::vector<double>& weight,
          const ParamGrid& grid, const NodeMask& mask) {
  double s = 0.0;
  for (std::size_t n = 0; n < values.size(); ++n)
    if (mask[n]) s += values[n] * values[n] * weight[n];
  return std::sqrt(s * grid.hu() * grid.hv());
}

double integrate(const std::vector<double>& values, const std::vector<double>& weight,
                 const ParamGrid& grid) {
  // Periodic axes: the rectangle rule is the trapezoid rule. Open axes get
  // half weights at the end nodes.
  double s = 0.0;
  for (int j = 0; j < grid.nv(); ++j) {
    const double wv = (!grid.periodic_v() && (j == 0 || j == grid.nv() - 1)) ? 0.5 : 1.0;
    for (int i = 0; i < grid.nu(); ++i) {
      const double wu = (!grid.periodic_u() && (i == 0 || i == grid.nu() - 1)) ? 0.5 : 1.0;
      const std::size_t n = grid.node(i, j);
      s += wu * wv * values[n] * weight[n];
    }
  }
  return s * grid.hu() * grid.hv();
}

}  // namespace bicons
