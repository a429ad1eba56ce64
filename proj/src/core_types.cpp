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

#include "guhjbi/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace guhjbi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::NotStabilizable: return "NotStabilizable";
    case ErrorCode::NotDetectable: return "NotDetectable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::BoxTooLarge: return "BoxTooLarge";
    case ErrorCode::NoStabilizingSolution: return "NoStabilizingSolution";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::SecularNoConvergence: return "SecularNoConvergence";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::DegenerateDiffusion: return "DegenerateDiffusion";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonConvexObjective: return "NonConvexObjective";
    case ErrorCode::NonFinitePath: return "NonFinitePath";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotPSD:
    case ErrorCode::NotPD:
    case ErrorCode::NotStabilizable:
    case ErrorCode::NotDetectable:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidConfig:
    case ErrorCode::GridMismatch:
    case ErrorCode::BoxTooLarge:
      return true;
    default:
      return false;
  }
}

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kPbhRankTol = 1e-9;

std::string shape(const Matrix& X) {
  std::ostringstream os;
  os << X.rows() << "x" << X.cols();
  return os.str();
}

void require_shape(const Matrix& X, Eigen::Index rows, Eigen::Index cols,
                   const char* name) {
  if (X.rows() != rows || X.cols() != cols) {
    std::ostringstream os;
    os << name << " must be " << rows << "x" << cols << ", got " << shape(X);
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void require_finite(const Matrix& X, const char* name) {
  if (!X.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " has non-finite entries");
  }
}

// Numerical rank with singular values thresholded relative to the largest.
Eigen::Index pbh_rank(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > kPbhRankTol * s(0)) ++rank;
  }
  return rank;
}

Matrix psd_sqrt(const Matrix& Q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Matrix symmetrize(const Matrix& X) { return 0.5 * (X + X.transpose()); }

double asymmetry(const Matrix& X) { return (X - X.transpose()).cwiseAbs().maxCoeff(); }

double spectral_abscissa(const Matrix& X) {
  if (X.size() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> es(X, false);
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Matrix& X) { return spectral_abscissa(X) < 0.0; }

LQProblem scalar_problem(double a, double b, double sigma, double q, double r,
                         double rho, double eta) {
  LQProblem p;
  p.A = Matrix::Constant(1, 1, a);
  p.B = Matrix::Constant(1, 1, b);
  p.Sigma = Matrix::Constant(1, 1, sigma);
  p.Q = Matrix::Constant(1, 1, q);
  p.R = Matrix::Constant(1, 1, r);
  p.rho = rho;
  p.eta = eta;
  return p;
}

LQProblem validate_problem(const LQProblem& problem) {
  const Eigen::Index n = problem.A.rows();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "A is empty");
  require_shape(problem.A, n, n, "A");
  const Eigen::Index k = problem.B.cols();
  if (k == 0) throw Error(ErrorCode::DimensionMismatch, "B has no columns");
  require_shape(problem.B, n, k, "B");
  if (problem.Sigma.rows() != n || problem.Sigma.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "Sigma must be " + std::to_string(n) + "xm, got " + shape(problem.Sigma));
  }
  require_shape(problem.Q, n, n, "Q");
  require_shape(problem.R, k, k, "R");
  require_finite(problem.A, "A");
  require_finite(problem.B, "B");
  require_finite(problem.Sigma, "Sigma");
  require_finite(problem.Q, "Q");
  require_finite(problem.R, "R");

  if (!(problem.rho > 0.0) || !std::isfinite(problem.rho)) {
    throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  }
  if (!(problem.eta >= 0.0) || !std::isfinite(problem.eta)) {
    throw Error(ErrorCode::InvalidArgument, "eta must be nonnegative");
  }

  LQProblem out = problem;
  if (asymmetry(problem.Q) > kSymmetryTol * std::max(1.0, problem.Q.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotPSD, "Q is not symmetric");
  }
  if (asymmetry(problem.R) > kSymmetryTol * std::max(1.0, problem.R.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotPD, "R is not symmetric");
  }
  out.Q = symmetrize(problem.Q);
  out.R = symmetrize(problem.R);

  const double q_min = Eigen::SelfAdjointEigenSolver<Matrix>(out.Q).eigenvalues().minCoeff();
  if (q_min < -kPsdTol) {
    throw Error(ErrorCode::NotPSD, "Q has eigenvalue " + std::to_string(q_min));
  }
  const double r_min = Eigen::SelfAdjointEigenSolver<Matrix>(out.R).eigenvalues().minCoeff();
  if (!(r_min > 0.0)) {
    throw Error(ErrorCode::NotPD, "R has eigenvalue " + std::to_string(r_min));
  }

  // PBH tests at the closed right half-plane eigenvalues of A.
  const Eigen::VectorXcd lambdas = Eigen::EigenSolver<Matrix>(out.A, false).eigenvalues();
  const Eigen::MatrixXcd Ac = out.A.cast<std::complex<double>>();
  const Eigen::MatrixXcd Bc = out.B.cast<std::complex<double>>();
  const Eigen::MatrixXcd Qh = psd_sqrt(out.Q).cast<std::complex<double>>();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    const std::complex<double> lambda = lambdas(i);
    if (lambda.real() < 0.0) continue;
    Eigen::MatrixXcd ctrl(n, n + k);
    ctrl << Ac - lambda * I, Bc;
    if (pbh_rank(ctrl) < n) {
      std::ostringstream os;
      os << "(A, B) is not stabilizable: mode " << lambda << " is uncontrollable";
      throw Error(ErrorCode::NotStabilizable, os.str());
    }
    Eigen::MatrixXcd obs(2 * n, n);
    obs << Ac - lambda * I, Qh;
    if (pbh_rank(obs) < n) {
      std::ostringstream os;
      os << "(A, Q^1/2) is not detectable: mode " << lambda << " is unobservable";
      throw Error(ErrorCode::NotDetectable, os.str());
    }
  }
  return out;
}

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Ball2: return "ball2";
    case GeometryKind::BallInf: return "ballinf";
    case GeometryKind::Ellipsoid: return "ellipsoid";
  }
  return "unknown";
}

GeometryKind parse_geometry_kind(std::string_view name) {
  if (name == "ball2" || name == "Ball2" || name == "l2") return GeometryKind::Ball2;
  if (name == "ballinf" || name == "BallInf" || name == "box" || name == "linf") {
    return GeometryKind::BallInf;
  }
  if (name == "ellipsoid" || name == "Ellipsoid") return GeometryKind::Ellipsoid;
  throw Error(ErrorCode::InvalidConfig, "unknown geometry kind '" + std::string(name) + "'");
}

UncertaintyGeometry UncertaintyGeometry::ball2(double epsilon) {
  return {GeometryKind::Ball2, epsilon, Matrix()};
}

UncertaintyGeometry UncertaintyGeometry::box(double epsilon) {
  return {GeometryKind::BallInf, epsilon, Matrix()};
}

UncertaintyGeometry UncertaintyGeometry::ellipsoid(double epsilon, Matrix M) {
  return {GeometryKind::Ellipsoid, epsilon, std::move(M)};
}

void UncertaintyGeometry::validate(Eigen::Index n) const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be a nonnegative number");
  }
  if (kind != GeometryKind::Ellipsoid) return;
  if (M.rows() != n || M.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "ellipsoid M must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!M.allFinite() || asymmetry(M) > kSymmetryTol * std::max(1.0, M.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotPD, "ellipsoid M must be symmetric");
  }
  const double m_min = Eigen::SelfAdjointEigenSolver<Matrix>(symmetrize(M)).eigenvalues().minCoeff();
  if (!(m_min > 0.0)) throw Error(ErrorCode::NotPD, "ellipsoid M is not positive definite");
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2) {
    throw Error(ErrorCode::InvalidArgument, "grid dimension must be 1 or 2");
  }
  for (const Axis& ax : axes_) {
    if (!(ax.lo < ax.hi) || !std::isfinite(ax.lo) || !std::isfinite(ax.hi)) {
      throw Error(ErrorCode::InvalidArgument, "grid bounds must satisfy lo < hi");
    }
    if (ax.n_points < 3) {
      throw Error(ErrorCode::InvalidArgument, "grid needs at least 3 points per axis");
    }
  }
}

Grid Grid::uniform_1d(double lo, double hi, std::size_t n_points) {
  return Grid({Axis{lo, hi, n_points}});
}

Grid Grid::uniform_2d(double lo, double hi, std::size_t n_points) {
  return Grid({Axis{lo, hi, n_points}, Axis{lo, hi, n_points}});
}

std::size_t Grid::size() const {
  std::size_t total = axes_.empty() ? 0 : 1;
  for (const Axis& ax : axes_) total *= ax.n_points;
  return total;
}

std::size_t Grid::flat_index(std::span<const std::size_t> multi) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) flat = flat * axes_[d].n_points + multi[d];
  return flat;
}

std::array<std::size_t, 2> Grid::multi_index(std::size_t flat) const {
  std::array<std::size_t, 2> multi{0, 0};
  for (std::size_t d = axes_.size(); d-- > 0;) {
    multi[d] = flat % axes_[d].n_points;
    flat /= axes_[d].n_points;
  }
  return multi;
}

std::array<double, 2> Grid::point(std::size_t flat) const {
  const auto multi = multi_index(flat);
  std::array<double, 2> x{0.0, 0.0};
  for (std::size_t d = 0; d < axes_.size(); ++d) x[d] = axes_[d].coord(multi[d]);
  return x;
}

Vector Grid::point_vector(std::size_t flat) const {
  const auto x = point(flat);
  Vector v(static_cast<Eigen::Index>(dim()));
  for (std::size_t d = 0; d < dim(); ++d) v(static_cast<Eigen::Index>(d)) = x[d];
  return v;
}

std::size_t Grid::nearest_node(std::span<const double> x) const {
  std::array<std::size_t, 2> multi{0, 0};
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const Axis& ax = axes_[d];
    const double t = std::round((x[d] - ax.lo) / ax.spacing());
    const double clamped = std::clamp(t, 0.0, static_cast<double>(ax.n_points - 1));
    multi[d] = static_cast<std::size_t>(clamped);
  }
  return flat_index(std::span<const std::size_t>(multi.data(), axes_.size()));
}

double Grid::diameter() const {
  double s = 0.0;
  for (const Axis& ax : axes_) s += (ax.hi - ax.lo) * (ax.hi - ax.lo);
  return std::sqrt(s);
}

GridField::GridField(Grid g, std::size_t comps, double fill)
    : grid(std::move(g)), components(comps), values(grid.size() * comps, fill) {}

bool GridField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace guhjbi
