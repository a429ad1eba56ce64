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

#include "guhjbi/core_types.hpp"

namespace guhjbi {

/// Maximizer of Phi(d) = (p + d)'f + (eta/2) |sigma'(p + d)|^2 over the
/// uncertainty set.
struct SupResult {
  double value = 0.0;
  Vector delta_star;
  /// KKT multiplier mu of the norm constraint (Ball2 and Ellipsoid only;
  /// zero for BallInf).
  double multiplier = 0.0;
  bool on_boundary = false;
};

/// Exact inner supremum over the gradient perturbation.
///
/// Ball2 solves the trust-region secular equation |(mu I - eta S)^-1 v| = eps
/// with v = f + eta S p, S = sigma sigma', including the hard case. Ellipsoid
/// is mapped to Ball2 through d = M^{-1/2} d'. BallInf enumerates the 2^n
/// vertices of the box and is limited to n <= 16 (BoxTooLarge otherwise).
SupResult exact_sup_delta(const Vector& f, const Matrix& sigma, const Vector& p, double eta,
                          const UncertaintyGeometry& geom);

/// Phi(0) + eps * |v|_*, with |.|_* the dual norm of the set: l2 for Ball2,
/// l1 for BallInf and sqrt(v'M^-1 v) for Ellipsoid.
double first_order_G(const Vector& f, const Matrix& sigma, const Vector& p, double eta,
                     const UncertaintyGeometry& geom);

/// eps * |v|_* alone.
double dual_norm_correction(const Vector& v, const UncertaintyGeometry& geom);

/// v = f + eta sigma sigma' p.
Vector sensitivity_vector(const Vector& f, const Matrix& sigma, const Vector& p, double eta);

/// Phi evaluated at a given perturbation.
double gu_objective(const Vector& f, const Matrix& sigma, const Vector& p, double eta,
                    const Vector& delta);

/// h* = eta sigma'(p + d), the maximizer of (p + d)' sigma h - |h|^2 / (2 eta).
Vector optimal_drift_perturbation(const Matrix& sigma, const Vector& p, const Vector& delta,
                                  double eta);

/// (p + d)' sigma h - |h|^2 / (2 eta), the drift-perturbation objective.
double drift_perturbation_objective(const Matrix& sigma, const Vector& p, const Vector& delta,
                                    double eta, const Vector& h);

/// Result of max v'd + 0.5 d'Hd over |d|_2 <= eps with H symmetric PSD.
struct BallQuadraticMax {
  Vector delta;
  double mu = 0.0;
  bool on_boundary = false;
  bool hard_case = false;
};

BallQuadraticMax maximize_on_ball(const Vector& v, const Matrix& H, double eps);

}  // namespace guhjbi
