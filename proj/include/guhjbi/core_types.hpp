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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "guhjbi/errors.hpp"

namespace guhjbi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Constant data of the linear-quadratic game
///   dX = (A X + B u) dt + Sigma dW,   L(x, u) = x'Qx + u'Ru,
/// with discount rho and model-uncertainty weight eta.
struct LQProblem {
  Matrix A;
  Matrix B;
  Matrix Sigma;
  Matrix Q;
  Matrix R;
  double rho = 0.0;
  double eta = 0.0;

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index control_dim() const { return B.cols(); }
  Eigen::Index noise_dim() const { return Sigma.cols(); }

  /// Sigma * Sigma'.
  Matrix diffusion() const { return Sigma * Sigma.transpose(); }
};

/// Scalar problem dX = (a x + b u) dt + sigma dW with cost q x^2 + r u^2.
LQProblem scalar_problem(double a, double b, double sigma, double q, double r,
                         double rho, double eta);

/// Checks every LQProblem invariant plus stabilizability of (A, B) and
/// detectability of (A, Q^{1/2}) by PBH rank tests. Returns the problem with
/// Q and R symmetrized. Throws Error on the first violated assumption.
LQProblem validate_problem(const LQProblem& problem);

enum class GeometryKind { Ball2, BallInf, Ellipsoid };

std::string_view to_string(GeometryKind kind);
GeometryKind parse_geometry_kind(std::string_view name);

/// Admissible set for the gradient perturbation: {|d|_2 <= eps},
/// {|d|_inf <= eps} or {d'Md <= eps^2}.
struct UncertaintyGeometry {
  GeometryKind kind = GeometryKind::Ball2;
  double epsilon = 0.0;
  Matrix M;  // Ellipsoid only

  static UncertaintyGeometry ball2(double epsilon);
  static UncertaintyGeometry box(double epsilon);
  static UncertaintyGeometry ellipsoid(double epsilon, Matrix M);

  /// Throws InvalidArgument / NotPD when the invariants fail; n is the state
  /// dimension the geometry is used with.
  void validate(Eigen::Index n) const;
};

struct Axis {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t n_points = 3;

  double spacing() const { return (hi - lo) / static_cast<double>(n_points - 1); }
  double coord(std::size_t i) const {
    return lo + static_cast<double>(i) * spacing();
  }

  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Uniform tensor grid in one or two dimensions. Flat indices are row-major
/// with axis 0 outermost.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<Axis> axes);

  static Grid uniform_1d(double lo, double hi, std::size_t n_points);
  static Grid uniform_2d(double lo, double hi, std::size_t n_points);

  std::size_t dim() const { return axes_.size(); }
  const Axis& axis(std::size_t d) const { return axes_[d]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const;

  std::size_t flat_index(std::span<const std::size_t> multi) const;
  std::array<std::size_t, 2> multi_index(std::size_t flat) const;

  /// Coordinates of a node; only the first dim() entries are meaningful.
  std::array<double, 2> point(std::size_t flat) const;
  Vector point_vector(std::size_t flat) const;

  /// Node nearest to x (clamped into the box).
  std::size_t nearest_node(std::span<const double> x) const;

  /// Euclidean length of the bounding-box diagonal.
  double diameter() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<Axis> axes_;
};

/// Scalar or vector samples on a Grid, stored node-major: values[node * components + c].
struct GridField {
  Grid grid;
  std::size_t components = 1;
  std::vector<double> values;

  GridField() = default;
  GridField(Grid g, std::size_t components, double fill = 0.0);

  std::size_t nodes() const { return grid.size(); }
  double& at(std::size_t node, std::size_t c = 0) { return values[node * components + c]; }
  double at(std::size_t node, std::size_t c = 0) const {
    return values[node * components + c];
  }

  bool all_finite() const;
  /// sup-norm over all entries
  double max_abs() const;
};

/// Zeroth-order robust solution V0(x) = x'P0x + c0.
struct RiccatiSolution {
  Matrix P0;
  double c0 = 0.0;
  Matrix A_cl;
  Matrix A_eff;
  double residual = 0.0;  // Frobenius norm of the ARE residual
};

// Small linear-algebra helpers shared by the solvers.
Matrix symmetrize(const Matrix& X);
double asymmetry(const Matrix& X);
double spectral_abscissa(const Matrix& X);
bool is_hurwitz(const Matrix& X);

}  // namespace guhjbi
