#pragma once

// Ambient spaces: Euclidean R^n and round spheres S^n(r) realised inside
// R^(n+1). Covariant derivatives in the sphere are Euclidean derivatives
// projected onto the sphere's tangent space.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "bicons/grid.hpp"

namespace bicons {

class AmbientSpace {
 public:
  enum class Kind { euclidean, sphere };

  static AmbientSpace euclidean(int dim);
  static AmbientSpace sphere(int dim, double radius);

  Kind kind() const { return kind_; }
  bool is_sphere() const { return kind_ == Kind::sphere; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }
  /// Sectional curvature: 0 or 1/r^2.
  double curvature() const { return kind_ == Kind::sphere ? 1.0 / (radius_ * radius_) : 0.0; }
  /// Number of Cartesian coordinates of a point (n, or n+1 for the sphere).
  int coordinate_count() const { return kind_ == Kind::sphere ? dim_ + 1 : dim_; }

 private:
  AmbientSpace(Kind k, int dim, double r) : kind_(k), dim_(dim), radius_(r) {}
  Kind kind_;
  int dim_;
  double radius_;
};

/// R^N(X,Y)Z = c(<Y,Z>X - <X,Z>Y) at the point p. For the sphere, X, Y, Z
/// must be orthogonal to p.
Eigen::VectorXd curvature_operator(const AmbientSpace& space, const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& z);

/// W = W^T + W^perp with W^T in span(t1, t2). For the sphere both parts are
/// additionally projected tangent to the sphere at p.
std::pair<Eigen::VectorXd, Eigen::VectorXd> split_tangent_normal(
    const AmbientSpace& space, const Eigen::VectorXd& p, const Eigen::VectorXd& t1,
    const Eigen::VectorXd& t2, const Eigen::VectorXd& w);

/// An R^N-valued field over a grid, one scalar Field per coordinate.
struct AmbientField {
  std::vector<Field> c;

  std::size_t dim() const { return c.size(); }
  Field& operator[](std::size_t k) { return c[k]; }
  const Field& operator[](std::size_t k) const { return c[k]; }
  Eigen::VectorXd at(std::size_t node) const;
};

AmbientField operator+(const AmbientField& a, const AmbientField& b);
AmbientField operator-(const AmbientField& a, const AmbientField& b);
AmbientField operator*(const Field& s, const AmbientField& a);
AmbientField operator*(double s, const AmbientField& a);
Field dot(const AmbientField& a, const AmbientField& b);
AmbientField partial(const AmbientField& a, Axis axis);
AmbientField partial2(const AmbientField& a, Axis axis);
AmbientField partial_uv(const AmbientField& a);

/// Field version of curvature_operator (no tangency check).
AmbientField curvature_operator(const AmbientSpace& space, const AmbientField& x,
                                const AmbientField& y, const AmbientField& z);

}  // namespace bicons
