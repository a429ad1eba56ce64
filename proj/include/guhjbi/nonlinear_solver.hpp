/*
Copyright 2026 The guhjbi Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

     https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstddef>

#include "guhjbi/core_types.hpp"

namespace guhjbi {

/// Howard iteration for the first-order robust HJB equation in one dimension,
///
///   rho V = min_u { q x^2 + r u^2 + V'(a x + b u) + 1/2 s2 V''
///                   + eta/2 s2 V'^2 + eps |a x + b u + eta s2 V'| },
///
/// with s2 = sigma sigma', central differences and mirror Neumann nodes.
struct PolicyIterationConfig {
  int max_outer_iters = 200;
  double policy_tol = 1e-10;
  double value_tol = 1e-10;
  /// mu in s(z) = sqrt(z^2 + mu^2) - mu; 0 selects the exact absolute value.
  double norm_smoothing = 1e-8;

  void validate() const;
};

enum class FullInit { Zero, U0 };

struct FullSolution {
  GridField V;
  GridField u;
  int iterations = 0;
  double residual = 0.0;  // sup-norm of the discrete equation residual
};

/// Per-node improvement objective r u^2 + p b u + eps s(c + b u).
double improvement_objective(double u, double p, double c, double b, double r, double eps,
                             double mu);

/// Derivative of the objective in u (a subgradient selection when mu = 0).
double improvement_derivative(double u, double p, double c, double b, double r, double eps,
                              double mu);

/// Unique minimizer of improvement_objective. mu = 0 compares the two smooth
/// branches and the kink u = -c / b; mu > 0 uses safeguarded Newton on the
/// derivative. Throws NonConvexObjective when r <= 0.
double improve_control(double p, double c, double b, double r, double eps, double mu);

/// Sup-norm residual of the discrete nonlinear equation at V with the
/// pointwise optimal control.
double full_residual(const GridField& V, const LQProblem& problem, double eps, double mu);

/// Effective 1D radius of the uncertainty set (eps for the balls, eps / sqrt(M)
/// for an ellipsoid).
double effective_radius_1d(const UncertaintyGeometry& geom);

FullSolution solve_full_1d(const LQProblem& problem, const UncertaintyGeometry& geom,
                           const Grid& grid, const PolicyIterationConfig& cfg = {},
                           FullInit init = FullInit::U0);

}  // namespace guhjbi
