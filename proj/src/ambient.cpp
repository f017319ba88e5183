#include "bicons/ambient.hpp"

#include <cmath>

namespace bicons {

AmbientSpace AmbientSpace::euclidean(int dim) {
  if (dim < 3) throw ConfigError("ambient: dimension must be at least 3");
  return AmbientSpace(Kind::euclidean, dim, 0.0);
}

AmbientSpace AmbientSpace::sphere(int dim, double radius) {
  if (dim < 3) throw ConfigError("ambient: dimension must be at least 3");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("ambient: sphere radius must be positive");
  return AmbientSpace(Kind::sphere, dim, radius);
}

namespace {

constexpr double kTangencyTol = 1e-9;

void require_size(const AmbientSpace& space, const Eigen::VectorXd& x) {
  if (x.size() != space.coordinate_count())
    throw std::invalid_argument("ambient: vector has wrong number of coordinates");
}

void require_tangent(const AmbientSpace& space, const Eigen::VectorXd& p, const Eigen::VectorXd& x) {
  if (!space.is_sphere()) return;
  const double scale = x.norm() * p.norm();
  if (std::abs(x.dot(p)) > kTangencyTol * (1.0 + scale))
    throw std::invalid_argument("ambient: vector not tangent to the sphere");
}

}  // namespace

Eigen::VectorXd curvature_operator(const AmbientSpace& space, const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& z) {
  for (const auto* w : {&p, &x, &y, &z}) require_size(space, *w);
  for (const auto* w : {&x, &y, &z}) require_tangent(space, p, *w);
  const double c = space.curvature();
  return c * (y.dot(z) * x - x.dot(z) * y);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> split_tangent_normal(
    const AmbientSpace& space, const Eigen::VectorXd& p, const Eigen::VectorXd& t1,
    const Eigen::VectorXd& t2, const Eigen::VectorXd& w) {
  for (const auto* x : {&p, &t1, &t2, &w}) require_size(space, *x);
  Eigen::Matrix2d gram;
  gram << t1.dot(t1), t1.dot(t2), t1.dot(t2), t2.dot(t2);
  const double det = gram.determinant();
  if (!(det > 1e-14 * gram(0, 0) * gram(1, 1)))
    throw NumericalError("ambient: degenerate tangent basis");
  Eigen::VectorXd v = w;
  if (space.is_sphere()) v -= (v.dot(p) / p.squaredNorm()) * p;
  const Eigen::Vector2d rhs(v.dot(t1), v.dot(t2));
  const Eigen::Vector2d coef = gram.ldlt().solve(rhs);
  Eigen::VectorXd tangent = coef(0) * t1 + coef(1) * t2;
  Eigen::VectorXd normal = v - tangent;
  return {tangent, normal};
}

// ---------------------------------------------------------------------------

Eigen::VectorXd AmbientField::at(std::size_t node) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) x(static_cast<Eigen::Index>(k)) = c[k].value(node);
  return x;
}

namespace {

void require_same_dim(const AmbientField& a, const AmbientField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("ambient field dimension mismatch");
}

}  // namespace

AmbientField operator+(const AmbientField& a, const AmbientField& b) {
  require_same_dim(a, b);
  AmbientField r;
  for (std::size_t k = 0; k < a.dim(); ++k) r.c.push_back(a[k] + b[k]);
  return r;
}

AmbientField operator-(const AmbientField& a, const AmbientField& b) {
  require_same_dim(a, b);
  AmbientField r;
  for (std::size_t k = 0; k < a.dim(); ++k) r.c.push_back(a[k] - b[k]);
  return r;
}

AmbientField operator*(const Field& s, const AmbientField& a) {
  AmbientField r;
  for (const auto& x : a.c) r.c.push_back(s * x);
  return r;
}

AmbientField operator*(double s, const AmbientField& a) {
  AmbientField r;
  for (const auto& x : a.c) r.c.push_back(s * x);
  return r;
}

Field dot(const AmbientField& a, const AmbientField& b) {
  require_same_dim(a, b);
  Field s = a[0] * b[0];
  for (std::size_t k = 1; k < a.dim(); ++k) s += a[k] * b[k];
  return s;
}

AmbientField partial(const AmbientField& a, Axis axis) {
  AmbientField r;
  for (const auto& x : a.c) r.c.push_back(partial(x, axis));
  return r;
}

AmbientField partial2(const AmbientField& a, Axis axis) {
  AmbientField r;
  for (const auto& x : a.c) r.c.push_back(partial2(x, axis));
  return r;
}

AmbientField partial_uv(const AmbientField& a) {
  AmbientField r;
  for (const auto& x : a.c) r.c.push_back(partial_uv(x));
  return r;
}

AmbientField curvature_operator(const AmbientSpace& space, const AmbientField& x,
                                const AmbientField& y, const AmbientField& z) {
  const double c = space.curvature();
  return (c * dot(y, z)) * x - (c * dot(x, z)) * y;
}

}  // namespace bicons
