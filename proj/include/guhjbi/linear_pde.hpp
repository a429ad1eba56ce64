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

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "guhjbi/core_types.hpp"

namespace guhjbi {

/// Thomas elimination for a tridiagonal system; lower[0] and upper[n-1] are
/// ignored. Throws LinearSolveFailure on a vanishing pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Finite-difference discretization of
///
///   rho W - (D x) . grad W - 1/2 tr(S Hess W)
///
/// on a 1D or 2D grid with homogeneous Neumann conditions imposed by mirror
/// ghost nodes. Diffusion uses second-order central differences; drift uses
/// central differences on every axis where |drift_d| h_d <= S_dd and
/// first-order upwinding elsewhere so the matrix stays an M-matrix (for
/// diagonal S).
class LinearPdeOperator {
 public:
  /// drift: n x n matrix D of the linear drift x -> D x; S: n x n diffusion.
  LinearPdeOperator(Grid grid, Matrix drift, Matrix S, double rho);

  /// Per-node drift vectors instead of a linear drift (1D or 2D).
  static LinearPdeOperator with_node_drift(Grid grid, std::vector<double> node_drift, Matrix S,
                                           double rho);

  const Grid& grid() const { return grid_; }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  std::size_t upwind_nodes() const { return upwind_nodes_; }

  /// Solves the system and checks |L W - s|_inf <= 1e-10 |s|_inf.
  GridField solve(const GridField& source) const;
  GridField apply(const GridField& W) const;

 private:
  LinearPdeOperator(Grid grid, std::vector<double> node_drift, Matrix S, double rho, int);
  void assemble();

  Grid grid_;
  std::vector<double> node_drift_;  // node-major, dim components
  Matrix S_;
  double rho_;
  Eigen::SparseMatrix<double> matrix_;
  std::vector<double> lower_, diag_, upper_;  // 1D only
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;  // 2D only
  std::size_t upwind_nodes_ = 0;
};

/// Gradient by second-order central differences, second-order one-sided at
/// the boundary. Returns a field with grid.dim() components.
GridField grid_gradient(const GridField& W);

/// (1/4, 1/2, 1/4) smoothing along each axis, boundary nodes copied.
GridField smooth3(const GridField& field);

}  // namespace guhjbi
