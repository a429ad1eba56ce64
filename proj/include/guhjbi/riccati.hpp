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

#include <optional>

#include "guhjbi/core_types.hpp"

namespace guhjbi {

enum class AreMethod {
  Auto,    // closed form when n == 1, Schur otherwise
  Schur,   // stable invariant subspace of the Hamiltonian matrix
  Scalar,  // quadratic formula, n == 1 only
};

/// Solves the discounted robust ARE
///
///   A'P + PA + Q - P D P = rho P,   D = B R^-1 B' - 2 eta Sigma Sigma',
///
/// for its stabilizing solution and returns P0, c0 = tr(Sigma Sigma' P0)/rho,
/// A_cl = A - B R^-1 B' P0 and A_eff = A_cl + 2 eta Sigma Sigma' P0.
///
/// Throws NoStabilizingSolution when the Hamiltonian matrix has eigenvalues on
/// the imaginary axis, the stable subspace is not a graph, or A_cl is not
/// Hurwitz (typically eta too large), and ResidualTooLarge when the polished
/// solution still violates the residual tolerance.
RiccatiSolution solve_robust_are(const LQProblem& problem, AreMethod method = AreMethod::Auto);

/// Frobenius norm of A'P + PA + Q - P D P - rho P.
double are_residual(const LQProblem& problem, const Matrix& P);

struct EffectiveDrift {
  Matrix A_cl;
  Matrix A_eff;
};

EffectiveDrift effective_drift(const LQProblem& problem, const Matrix& P0);

/// Coefficients of the scalar ARE written as c2 p^2 + c1 p + c0 = 0 with
/// c2 = b^2/r - 2 eta sigma^2, c1 = rho - 2a, c0 = -q (n == 1 only).
struct ScalarAreQuadratic {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double p) const { return (c2 * p + c1) * p + c0; }
};

ScalarAreQuadratic scalar_are_quadratic(const LQProblem& problem);

}  // namespace guhjbi
