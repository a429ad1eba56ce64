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
#include <cstdint>
#include <vector>

#include "guhjbi/core_types.hpp"

namespace guhjbi {

/// Monte Carlo settings for the discounted path functional
///   V1(x) = E_x int_0^T e^{-rho t} |A_eff Z_t| dt,  dZ = A_eff Z dt + Sigma dW.
struct McConfig {
  std::size_t n_paths = 100000;
  double dt = 1e-3;
  double horizon = 80.0;
  std::uint64_t seed = 20240601;

  /// n_paths >= 1, dt > 0, horizon > 0 and dt <= horizon / 100.
  void validate() const;
};

struct McOptions {
  double source_scale = 1.0;  // multiplies |A_eff z|
  unsigned threads = 0;       // 0 reads GUHJBI_THREADS
};

struct McEstimate {
  Vector x;
  double estimate = 0.0;
  double std_error = 0.0;  // 0 when n_paths == 1
  /// Upper bound on the neglected tail int_T^inf e^{-rho t} E|A_eff Z_t| dt.
  double truncation_bound = 0.0;
  std::size_t n_paths = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
};

/// Euler-Maruyama estimate with trapezoidal accumulation. Path i draws from
/// its own generator seeded from (seed, i), so results are bit-identical for
/// any thread count.
McEstimate feynman_kac_v1(const Vector& x, const RiccatiSolution& riccati,
                          const LQProblem& problem, const McConfig& cfg,
                          const McOptions& options = {});

/// Same estimator for several starting points driven by common Brownian
/// increments; entry j equals feynman_kac_v1(xs[j], ...).
std::vector<McEstimate> feynman_kac_v1_batch(const std::vector<Vector>& xs,
                                             const RiccatiSolution& riccati,
                                             const LQProblem& problem, const McConfig& cfg,
                                             const McOptions& options = {});

/// 1D estimator using exact Ornstein-Uhlenbeck transitions instead of
/// Euler-Maruyama steps; only the trapezoidal time discretization remains.
McEstimate feynman_kac_v1_exact_ou(double x, const RiccatiSolution& riccati,
                                   const LQProblem& problem, const McConfig& cfg,
                                   const McOptions& options = {});

/// |a_eff| int_0^inf e^{-rho t} sqrt(2 Var(t) / pi) dt with
/// Var(t) = sigma^2 (1 - e^{2 a_eff t}) / (-2 a_eff), by adaptive quadrature.
double quadrature_v1_origin(const RiccatiSolution& riccati, const LQProblem& problem);

/// 1D value at any x from the folded-normal mean of the Gaussian Z_t.
double quadrature_v1_1d(double x, const RiccatiSolution& riccati, const LQProblem& problem);

double truncation_bound(const Vector& x, const RiccatiSolution& riccati, const LQProblem& problem,
                        double horizon, double source_scale = 1.0);

}  // namespace guhjbi
