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
#include <string>
#include <vector>

#include "guhjbi/core_types.hpp"

namespace guhjbi {

/// Which first-order control correction to report.
///   MainText:  u1 = -R^-1 B' grad V1
///   AppendixE: u1 = -1/2 R^-1 B' grad V1 - 1/2 R^-1 B' v0 / |v0|,  v0 = A_eff x
/// The second form is the one consistent with the second-order source H2.
enum class U1Convention { MainText, AppendixE };

std::string_view to_string(U1Convention c);
U1Convention parse_u1_convention(std::string_view name);

struct GradientOptions {
  bool smooth = false;  // 3-point smoothing of the finite-difference gradient
};

struct V1Options {
  double source_scale = 1.0;  // multiplies |A_eff x|; 0 gives the homogeneous problem
};

/// rho V1 = grad V1 . (A_eff x) + 1/2 tr(Sigma Sigma' Hess V1) + |A_eff x|
/// with homogeneous Neumann conditions on the grid boundary.
GridField solve_v1(const RiccatiSolution& riccati, const LQProblem& problem, const Grid& grid,
                   const V1Options& options = {});

/// First-order control correction on the nodes of V1 (control_dim components).
GridField compute_u1(const GridField& V1, const LQProblem& problem, const RiccatiSolution& riccati,
                     U1Convention convention, const GradientOptions& grad = {});

struct H2Result {
  GridField simplified;
  GridField unsimplified;
  /// Nodes where |A_eff x| < cutoff; the 1/|A_eff x| terms are zero there.
  std::vector<std::size_t> singular_nodes;
  double cutoff = 0.0;
};

/// Second-order source term, given u1 in the AppendixE convention:
///   H2 = -u1'R u1 + eta/2 p1'S p1 + eta (A_eff x)'S p1 / |A_eff x|
/// together with the unsimplified sum
///   u1'R u1 + p1'B u1 + eta/2 p1'S p1 + v0'(B u1 + eta S p1) / |v0|.
H2Result compute_h2(const GridField& V1, const GridField& u1_appendix_e, const LQProblem& problem,
                    const RiccatiSolution& riccati, const GradientOptions& grad = {});

/// rho V2 = grad V2 . (A_eff x) + 1/2 tr(Sigma Sigma' Hess V2) + H2.
GridField solve_v2(const GridField& H2, const LQProblem& problem, const RiccatiSolution& riccati,
                   const Grid& grid);

/// Cutoff below which |A_eff x| is treated as zero.
double singularity_cutoff(const Grid& grid);

double v0_at(const RiccatiSolution& riccati, const Vector& x);
GridField v0_field(const RiccatiSolution& riccati, const Grid& grid);
GridField u0_field(const RiccatiSolution& riccati, const LQProblem& problem, const Grid& grid);

struct AssembledValue {
  GridField V0;
  GridField total;  // V0 + eps V1 (+ eps^2 V2)
};

AssembledValue assemble_value(const RiccatiSolution& riccati, const GridField& V1,
                              const GridField* V2, double epsilon);

struct PerturbationOptions {
  U1Convention convention = U1Convention::MainText;
  bool second_order = true;  // also compute H2 and V2
  GradientOptions gradient;
};

struct PerturbationSolution {
  RiccatiSolution riccati;
  double epsilon = 0.0;
  GridField V1;
  GridField u1;
  std::optional<GridField> H2;
  std::optional<GridField> V2;
  U1Convention u1_convention = U1Convention::MainText;
};

/// Riccati solve followed by V1, u1 and (optionally) H2 and V2.
PerturbationSolution solve_perturbation(const LQProblem& problem, const Grid& grid, double epsilon,
                                        const PerturbationOptions& options = {});

struct SweepRow {
  double eta = 0.0;
  double epsilon = 0.0;
  double p0_trace = 0.0;
  double a_eff_norm = 0.0;  // spectral norm of A_eff
  double u1_sup = 0.0;
  double V_at_0 = 0.0;
  double V_at_3 = 0.0;  // probe at 3 e_1
  std::string status = "ok";
};

/// One row per (eta, epsilon), eta-major. Solver errors are recorded in the
/// row status and the sweep continues. threads == 0 reads GUHJBI_THREADS.
std::vector<SweepRow> sensitivity_sweep(const LQProblem& problem_template,
                                        const std::vector<double>& eta_list,
                                        const std::vector<double>& epsilon_list, const Grid& grid,
                                        U1Convention convention = U1Convention::MainText,
                                        unsigned threads = 0);

/// Worker count from GUHJBI_THREADS (default: hardware concurrency).
unsigned configured_threads();

/// Relative residual |y - fit|_2 / |y|_2 of a least-squares fit by a full
/// quadratic polynomial over the nodes with max_d |x_d| <= half_width.
double quadratic_fit_relative_residual(const GridField& field, double half_width);

}  // namespace guhjbi
