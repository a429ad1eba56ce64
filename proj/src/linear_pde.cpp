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

#include "guhjbi/linear_pde.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace guhjbi {

namespace {

constexpr double kSolveTol = 1e-10;

std::size_t reflect(long i, std::size_t n) {
  if (i < 0) return static_cast<std::size_t>(-i);
  if (i > static_cast<long>(n) - 1) return static_cast<std::size_t>(2 * (static_cast<long>(n) - 1) - i);
  return static_cast<std::size_t>(i);
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0) {
    throw Error(ErrorCode::DimensionMismatch, "tridiagonal bands must have equal length");
  }
  std::vector<double> c_star(n), d_star(n), x(n);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) {
    throw Error(ErrorCode::LinearSolveFailure, "zero pivot in tridiagonal elimination");
  }
  c_star[0] = upper[0] / pivot;
  d_star[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c_star[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw Error(ErrorCode::LinearSolveFailure, "zero pivot in tridiagonal elimination");
    }
    c_star[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    d_star[i] = (rhs[i] - lower[i] * d_star[i - 1]) / pivot;
  }
  x[n - 1] = d_star[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d_star[i] - c_star[i] * x[i + 1];
  return x;
}

LinearPdeOperator::LinearPdeOperator(Grid grid, Matrix drift, Matrix S, double rho)
    : grid_(std::move(grid)), S_(std::move(S)), rho_(rho) {
  const auto n = static_cast<Eigen::Index>(grid_.dim());
  if (drift.rows() != n || drift.cols() != n || S_.rows() != n || S_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "drift and diffusion must match the grid dimension");
  }
  node_drift_.resize(grid_.size() * grid_.dim());
  for (std::size_t node = 0; node < grid_.size(); ++node) {
    const Vector b = drift * grid_.point_vector(node);
    for (std::size_t d = 0; d < grid_.dim(); ++d) {
      node_drift_[node * grid_.dim() + d] = b(static_cast<Eigen::Index>(d));
    }
  }
  assemble();
}

LinearPdeOperator::LinearPdeOperator(Grid grid, std::vector<double> node_drift, Matrix S,
                                     double rho, int)
    : grid_(std::move(grid)), node_drift_(std::move(node_drift)), S_(std::move(S)), rho_(rho) {
  const auto n = static_cast<Eigen::Index>(grid_.dim());
  if (node_drift_.size() != grid_.size() * grid_.dim() || S_.rows() != n || S_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "node drift and diffusion must match the grid");
  }
  assemble();
}

LinearPdeOperator LinearPdeOperator::with_node_drift(Grid grid, std::vector<double> node_drift,
                                                     Matrix S, double rho) {
  return LinearPdeOperator(std::move(grid), std::move(node_drift), std::move(S), rho, 0);
}

void LinearPdeOperator::assemble() {
  if (!(rho_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  const Matrix Ssym = symmetrize(S_);
  if (Eigen::SelfAdjointEigenSolver<Matrix>(Ssym).eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::DegenerateDiffusion,
                "Sigma Sigma' must be positive definite on the solved axes");
  }
  S_ = Ssym;

  const std::size_t dim = grid_.dim();
  const std::size_t N = grid_.size();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(N * (dim == 1 ? 3 : 9));
  upwind_nodes_ = 0;

  for (std::size_t node = 0; node < N; ++node) {
    const auto multi = grid_.multi_index(node);
    triplets.emplace_back(node, node, rho_);
    bool upwinded = false;
    for (std::size_t d = 0; d < dim; ++d) {
      const Axis& ax = grid_.axis(d);
      const double h = ax.spacing();
      const double s = S_(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      const double beta = node_drift_[node * dim + d];
      auto neighbor = [&](long offset) {
        auto m = multi;
        m[d] = reflect(static_cast<long>(multi[d]) + offset, ax.n_points);
        return grid_.flat_index(std::span<const std::size_t>(m.data(), dim));
      };
      const std::size_t plus = neighbor(+1);
      const std::size_t minus = neighbor(-1);

      const double diff = 0.5 * s / (h * h);
      triplets.emplace_back(node, node, 2.0 * diff);
      triplets.emplace_back(node, plus, -diff);
      triplets.emplace_back(node, minus, -diff);

      if (std::abs(beta) * h <= s) {
        triplets.emplace_back(node, plus, -beta / (2.0 * h));
        triplets.emplace_back(node, minus, beta / (2.0 * h));
      } else {
        upwinded = true;
        if (beta > 0.0) {
          triplets.emplace_back(node, plus, -beta / h);
          triplets.emplace_back(node, node, beta / h);
        } else {
          triplets.emplace_back(node, node, -beta / h);
          triplets.emplace_back(node, minus, beta / h);
        }
      }
    }
    if (dim == 2 && S_(0, 1) != 0.0) {
      const double coef = -S_(0, 1) / (4.0 * grid_.axis(0).spacing() * grid_.axis(1).spacing());
      for (int si : {-1, 1}) {
        for (int sj : {-1, 1}) {
          std::array<std::size_t, 2> m{
              reflect(static_cast<long>(multi[0]) + si, grid_.axis(0).n_points),
              reflect(static_cast<long>(multi[1]) + sj, grid_.axis(1).n_points)};
          triplets.emplace_back(node, grid_.flat_index(m), coef * si * sj);
        }
      }
    }
    if (upwinded) ++upwind_nodes_;
  }

  matrix_.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();

  if (dim == 1) {
    lower_.assign(N, 0.0);
    diag_.assign(N, 0.0);
    upper_.assign(N, 0.0);
    for (Eigen::Index row = 0; row < matrix_.outerSize(); ++row) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, row); it; ++it) {
        const auto r = static_cast<std::size_t>(it.row());
        const auto c = static_cast<std::size_t>(it.col());
        if (c == r) {
          diag_[r] += it.value();
        } else if (c + 1 == r) {
          lower_[r] += it.value();
        } else if (c == r + 1) {
          upper_[r] += it.value();
        }
      }
    }
  } else {
    lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->analyzePattern(matrix_);
    lu_->factorize(matrix_);
    if (lu_->info() != Eigen::Success) {
      throw Error(ErrorCode::LinearSolveFailure, "sparse LU factorization failed");
    }
  }
}

GridField LinearPdeOperator::apply(const GridField& W) const {
  if (!(W.grid == grid_) || W.components != 1) {
    throw Error(ErrorCode::GridMismatch, "operator applied to a field on a different grid");
  }
  const Eigen::Map<const Vector> w(W.values.data(), static_cast<Eigen::Index>(W.values.size()));
  const Vector out = matrix_ * w;
  GridField res(grid_, 1);
  std::copy(out.data(), out.data() + out.size(), res.values.begin());
  return res;
}

GridField LinearPdeOperator::solve(const GridField& source) const {
  if (!(source.grid == grid_) || source.components != 1) {
    throw Error(ErrorCode::GridMismatch, "source lives on a different grid");
  }
  GridField W(grid_, 1);
  const double src_norm = inf_norm(source.values);
  if (grid_.dim() == 1) {
    W.values = solve_tridiagonal(lower_, diag_, upper_, source.values);
  } else {
    const Eigen::Map<const Vector> rhs(source.values.data(),
                                       static_cast<Eigen::Index>(source.values.size()));
    Vector x = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success) {
      throw Error(ErrorCode::LinearSolveFailure, "sparse LU solve failed");
    }
    const Vector r = rhs - matrix_ * x;
    if (r.lpNorm<Eigen::Infinity>() > kSolveTol * src_norm) x += lu_->solve(r);
    std::copy(x.data(), x.data() + x.size(), W.values.begin());
  }
  if (!W.all_finite()) throw Error(ErrorCode::LinearSolveFailure, "non-finite solution");

  const GridField LW = apply(W);
  double res = 0.0;
  for (std::size_t i = 0; i < LW.values.size(); ++i) {
    res = std::max(res, std::abs(LW.values[i] - source.values[i]));
  }
  if (res > kSolveTol * std::max(src_norm, 1e-300)) {
    throw Error(ErrorCode::LinearSolveFailure,
                "linear solve residual " + std::to_string(res) + " above tolerance");
  }
  return W;
}

GridField grid_gradient(const GridField& W) {
  if (W.components != 1) throw Error(ErrorCode::InvalidArgument, "gradient of a scalar field only");
  const Grid& g = W.grid;
  const std::size_t dim = g.dim();
  GridField grad(g, dim);
  for (std::size_t node = 0; node < g.size(); ++node) {
    const auto multi = g.multi_index(node);
    for (std::size_t d = 0; d < dim; ++d) {
      const Axis& ax = g.axis(d);
      const double h = ax.spacing();
      auto at = [&](std::size_t i) {
        auto m = multi;
        m[d] = i;
        return W.at(g.flat_index(std::span<const std::size_t>(m.data(), dim)));
      };
      const std::size_t i = multi[d];
      const std::size_t n = ax.n_points;
      double v;
      if (i == 0) {
        v = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
      } else if (i == n - 1) {
        v = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
      } else {
        v = (at(i + 1) - at(i - 1)) / (2.0 * h);
      }
      grad.at(node, d) = v;
    }
  }
  return grad;
}

GridField smooth3(const GridField& field) {
  const Grid& g = field.grid;
  const std::size_t dim = g.dim();
  GridField cur = field;
  for (std::size_t d = 0; d < dim; ++d) {
    GridField next = cur;
    const std::size_t n = g.axis(d).n_points;
    for (std::size_t node = 0; node < g.size(); ++node) {
      const auto multi = g.multi_index(node);
      if (multi[d] == 0 || multi[d] == n - 1) continue;
      auto m = multi;
      m[d] = multi[d] - 1;
      const std::size_t lo = g.flat_index(std::span<const std::size_t>(m.data(), dim));
      m[d] = multi[d] + 1;
      const std::size_t hi = g.flat_index(std::span<const std::size_t>(m.data(), dim));
      for (std::size_t c = 0; c < field.components; ++c) {
        next.at(node, c) = 0.25 * cur.at(lo, c) + 0.5 * cur.at(node, c) + 0.25 * cur.at(hi, c);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace guhjbi
