#pragma once

// Conformal-factor equation of a biconservative surface with constant mean
// curvature, solved on a doubly periodic flat chart (x, y):
//
//   -mu L mu + |D mu|^2 + 2 mu (K^N + |H|^2 - mu^2 / (4 |H|^2)) = 0
//
// with L the analyst's flat Laplacian and D the flat gradient. The solution
// gives the metric (1/mu)(dx^2 + dy^2), i.e. rho = -(log mu)/2.

#include <string>
#include <vector>

#include "bicons/error.hpp"
#include "bicons/tensor.hpp"

namespace bicons {

struct MuProblem {
  ParamGrid grid;        // doubly periodic
  double h_norm = 1.0;   // |H| > 0
  Field ambient_curvature;  // K^N as node values
  Field initial;         // mu_0 > 0
};

/// Constant K^N and mu_0 on `grid`.
MuProblem make_mu_problem(const ParamGrid& grid, double h_norm, double ambient_curvature,
                          const Field& initial);
/// Throws ConfigError on a grid that is not doubly periodic, |H| <= 0,
/// mismatched fields or a non-positive initial guess.
void validate(const MuProblem& p);

/// Positive constant root 2|H| sqrt(K^N + |H|^2); ConfigError when
/// K^N + |H|^2 <= 0.
double constant_root(double h_norm, double ambient_curvature);

/// Pointwise residual; NumericalError when mu <= 0 at some node.
Field mu_residual(const Field& mu, const MuProblem& p);

struct NewtonOptions {
  double tol = 1e-10;       // on the L-infinity residual
  int max_iter = 30;
  int max_halvings = 20;
  double armijo = 1e-4;
  double mu_floor = 1e-8;
};

struct MuSolution {
  Field mu;
  std::vector<double> history;  // L-infinity residual, initial first
  std::vector<double> step_lengths;
  int iterations = 0;
  bool converged = false;
  bool least_norm_used = false;
  std::string status;
  double h_norm = 1.0;
  Field ambient_curvature;
};

/// Newton solve that could not factor its linearization; carries the iterate.
class SingularJacobianError : public NumericalError {
 public:
  SingularJacobianError(const std::string& what, MuSolution partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const MuSolution& partial() const { return partial_; }

 private:
  MuSolution partial_;
};

MuSolution solve_mu(const MuProblem& p, const NewtonOptions& options = {});

struct MuReconstruction {
  ConformalChart chart;     // rho = -(log mu)/2
  SymTensor metric;         // (1/mu) delta
  SymTensor a_h;            // (|H|^2/mu + 1/2) dx^2 + (|H|^2/mu - 1/2) dy^2
  Field lambda1, lambda2;   // |H|^2 +- mu/2
};

/// NumericalError for a solution that did not converge.
MuReconstruction reconstruct_geometry(const MuSolution& s);

/// K(rho) - (K^N + |H|^2 - mu^2/(4|H|^2)), with K from the conformal factor.
Field gauss_consistency(const MuSolution& s);

}  // namespace bicons
