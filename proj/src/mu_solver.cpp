#include "bicons/mu_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace bicons {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

double max_abs(const Field& f) {
  double m = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) m = std::max(m, std::abs(f.value(n)));
  return m;
}

void require_positive(const Field& mu) {
  for (std::size_t n = 0; n < mu.size(); ++n)
    if (!(mu.value(n) > 0.0))
      throw NumericalError("mu_residual: mu <= 0 at node " + std::to_string(n));
}

// Linearization of the discrete residual at mu.
SpMat jacobian(const Field& mu, const MuProblem& p) {
  const ParamGrid& g = p.grid;
  const int nu = g.nu(), nv = g.nv();
  const double iu2 = 1.0 / (g.hu() * g.hu()), iv2 = 1.0 / (g.hv() * g.hv());
  const double iu = 0.5 / g.hu(), iv = 0.5 / g.hv();
  const double h2 = p.h_norm * p.h_norm;
  const Field lap = euclid_laplacian(mu);
  const Field mx = partial(mu, Axis::u), my = partial(mu, Axis::v);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(g.size() * 5);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const auto n = static_cast<int>(g.node(i, j));
      const auto e = static_cast<int>(g.node((i + 1) % nu, j));
      const auto w = static_cast<int>(g.node((i + nu - 1) % nu, j));
      const auto s = static_cast<int>(g.node(i, (j + 1) % nv));
      const auto q = static_cast<int>(g.node(i, (j + nv - 1) % nv));
      const double m = mu.value(n);
      const double kn = p.ambient_curvature.value(n);
      // -diag(L mu) - diag(mu) L + reaction
      const double diag = -lap.value(n) + m * 2.0 * (iu2 + iv2) + 2.0 * (kn + h2) -
                          6.0 * m * m / (4.0 * h2);
      t.emplace_back(n, n, diag);
      // -mu L and 2 (D mu) D couplings
      t.emplace_back(n, e, -m * iu2 + 2.0 * mx.value(n) * iu);
      t.emplace_back(n, w, -m * iu2 - 2.0 * mx.value(n) * iu);
      t.emplace_back(n, s, -m * iv2 + 2.0 * my.value(n) * iv);
      t.emplace_back(n, q, -m * iv2 - 2.0 * my.value(n) * iv);
    }
  }
  SpMat jac(static_cast<int>(g.size()), static_cast<int>(g.size()));
  jac.setFromTriplets(t.begin(), t.end());
  return jac;
}

bool solved(const SpMat& a, const Vec& x, const Vec& b) {
  if (!x.allFinite()) return false;
  return (a * x - b).norm() <= 1e-8 * (1.0 + b.norm());
}

}  // namespace

MuProblem make_mu_problem(const ParamGrid& grid, double h_norm, double ambient_curvature,
                          const Field& initial) {
  MuProblem p{grid, h_norm, Field::from_values(grid, std::vector<double>(grid.size(),
                                                                         ambient_curvature)),
              initial};
  validate(p);
  return p;
}

void validate(const MuProblem& p) {
  if (!p.grid.doubly_periodic()) throw ConfigError("mu problem: grid must be doubly periodic");
  if (p.grid.nu() < 4 || p.grid.nv() < 4) throw ConfigError("mu problem: grid sizes must be >= 4");
  if (!(p.h_norm > 0.0) || !std::isfinite(p.h_norm))
    throw ConfigError("mu problem: |H| must be positive");
  if (!(p.ambient_curvature.grid() == p.grid) || !(p.initial.grid() == p.grid))
    throw ConfigError("mu problem: fields are not on the problem grid");
  for (std::size_t n = 0; n < p.grid.size(); ++n) {
    if (!std::isfinite(p.ambient_curvature.value(n)))
      throw ConfigError("mu problem: non-finite K^N at node " + std::to_string(n));
    if (!(p.initial.value(n) > 0.0) || !std::isfinite(p.initial.value(n)))
      throw ConfigError("mu problem: initial guess not positive at node " + std::to_string(n));
  }
}

double constant_root(double h_norm, double ambient_curvature) {
  const double s = ambient_curvature + h_norm * h_norm;
  if (!(s > 0.0)) throw ConfigError("constant root needs K^N + |H|^2 > 0");
  return 2.0 * h_norm * std::sqrt(s);
}

Field mu_residual(const Field& mu, const MuProblem& p) {
  require_positive(mu);
  const Field m = mu.values_only();
  const double h2 = p.h_norm * p.h_norm;
  const Field mx = partial(m, Axis::u), my = partial(m, Axis::v);
  return -(m * euclid_laplacian(m)) + mx * mx + my * my +
         2.0 * m * (p.ambient_curvature + h2 - (m * m) / (4.0 * h2));
}

MuSolution solve_mu(const MuProblem& p, const NewtonOptions& o) {
  validate(p);
  MuSolution s;
  s.h_norm = p.h_norm;
  s.ambient_curvature = p.ambient_curvature;
  s.mu = p.initial.values_only();
  Field r = mu_residual(s.mu, p);
  double norm = max_abs(r);
  s.history.push_back(norm);
  const std::size_t count = p.grid.size();

  while (norm > o.tol) {
    if (s.iterations >= o.max_iter) {
      s.status = "max_iter exceeded";
      return s;
    }
    const SpMat jac = jacobian(s.mu, p);
    Vec rhs(static_cast<Eigen::Index>(count));
    for (std::size_t n = 0; n < count; ++n) rhs[static_cast<Eigen::Index>(n)] = -r.value(n);

    Vec step;
    Eigen::SparseLU<SpMat> lu;
    lu.compute(jac);
    if (lu.info() == Eigen::Success) step = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !solved(jac, step, rhs)) {
      Eigen::LeastSquaresConjugateGradient<SpMat> ls;
      ls.setTolerance(1e-14);
      ls.setMaxIterations(20 * static_cast<int>(count));
      ls.compute(jac);
      step = ls.solve(rhs);
      s.least_norm_used = true;
      if (!step.allFinite()) {
        s.status = "singular Jacobian";
        throw SingularJacobianError("solve_mu: singular Jacobian at iteration " +
                                        std::to_string(s.iterations),
                                    s);
      }
    }

    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= o.max_halvings; ++k, t *= 0.5) {
      std::vector<double> trial(count);
      for (std::size_t n = 0; n < count; ++n)
        trial[n] = std::max(o.mu_floor, s.mu.value(n) + t * step[static_cast<Eigen::Index>(n)]);
      Field candidate = Field::from_values(p.grid, std::move(trial));
      Field rc = mu_residual(candidate, p);
      const double nc = max_abs(rc);
      if (nc <= (1.0 - o.armijo * t) * norm) {
        s.mu = std::move(candidate);
        r = std::move(rc);
        norm = nc;
        accepted = true;
        break;
      }
    }
    ++s.iterations;
    if (!accepted) {
      s.status = "line search failed";
      return s;
    }
    s.history.push_back(norm);
    s.step_lengths.push_back(t);
  }
  s.converged = true;
  s.status = "converged";
  return s;
}

MuReconstruction reconstruct_geometry(const MuSolution& s) {
  if (!s.converged) throw NumericalError("reconstruct_geometry: solution did not converge");
  const Field& mu = s.mu;
  const double h2 = s.h_norm * s.h_norm;
  const Field inv = 1.0 / mu;
  const Field zero = 0.0 * mu;
  MuReconstruction out;
  out.chart.rho = -0.5 * log(mu);
  out.metric = {inv, zero, inv};
  out.a_h = {h2 * inv + 0.5, zero, h2 * inv - 0.5};
  out.lambda1 = h2 + 0.5 * mu;
  out.lambda2 = h2 - 0.5 * mu;
  return out;
}

Field gauss_consistency(const MuSolution& s) {
  require_positive(s.mu);
  const double h2 = s.h_norm * s.h_norm;
  const Field rho = -0.5 * log(s.mu);
  return gauss_curvature_conformal(rho) -
         (s.ambient_curvature + h2 - (s.mu * s.mu) / (4.0 * h2));
}

}  // namespace bicons
