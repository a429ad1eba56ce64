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

#include "guhjbi/riccati.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

namespace guhjbi {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

constexpr double kResidualTol = 1e-10;
constexpr int kMaxNewtonPolish = 4;

Matrix quadratic_weight(const LQProblem& p) {
  const Matrix BRinvBt = p.B * p.R.llt().solve(p.B.transpose());
  return symmetrize(BRinvBt - 2.0 * p.eta * p.diffusion());
}

Matrix shifted_drift(const LQProblem& p) {
  return p.A - 0.5 * p.rho * Matrix::Identity(p.A.rows(), p.A.cols());
}

Matrix residual_matrix(const LQProblem& p, const Matrix& P) {
  const Matrix D = quadratic_weight(p);
  return p.A.transpose() * P + P * p.A + p.Q - P * D * P - p.rho * P;
}

// Swaps adjacent diagonal entries k, k+1 of the upper-triangular T with a
// unitary rotation, accumulating it into U (H = U T U* is preserved).
void swap_schur(CMatrix& T, CMatrix& U, Eigen::Index k) {
  const Eigen::Index N = T.rows();
  const Complex t11 = T(k, k);
  const Complex t22 = T(k + 1, k + 1);
  const Complex x = T(k, k + 1);
  const Complex y = t22 - t11;
  const double nu = std::hypot(std::abs(x), std::abs(y));
  if (nu == 0.0) return;
  // First column of G is the eigenvector of the 2x2 block for t22.
  const Complex c = x / nu;
  const Complex s = y / nu;
  // G = [[c, -conj(s)], [s, conj(c)]]
  for (Eigen::Index j = 0; j < N; ++j) {  // T <- G* T
    const Complex a = T(k, j);
    const Complex b = T(k + 1, j);
    T(k, j) = std::conj(c) * a + std::conj(s) * b;
    T(k + 1, j) = -s * a + c * b;
  }
  for (Eigen::Index i = 0; i < N; ++i) {  // T <- T G, U <- U G
    Complex a = T(i, k);
    Complex b = T(i, k + 1);
    T(i, k) = a * c + b * s;
    T(i, k + 1) = -a * std::conj(s) + b * std::conj(c);
    a = U(i, k);
    b = U(i, k + 1);
    U(i, k) = a * c + b * s;
    U(i, k + 1) = -a * std::conj(s) + b * std::conj(c);
  }
  T(k + 1, k) = 0.0;
  T(k, k) = t22;
  T(k + 1, k + 1) = t11;
}

// Solves Ac' X + X Ac = -F for symmetric F via the Kronecker form.
Matrix solve_lyapunov(const Matrix& Ac, const Matrix& F) {
  const Eigen::Index n = Ac.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix K = Eigen::kroneckerProduct(I, Ac.transpose()) +
                   Eigen::kroneckerProduct(Ac.transpose(), I);
  const Vector rhs = -Eigen::Map<const Vector>(F.data(), F.size());
  const Vector x = K.fullPivLu().solve(rhs);
  return symmetrize(Eigen::Map<const Matrix>(x.data(), n, n));
}

// Newton (Kleinman) iterations on the shifted ARE, kept only while they
// reduce the residual.
Matrix polish(const LQProblem& p, Matrix P) {
  const Matrix D = quadratic_weight(p);
  const Matrix At = shifted_drift(p);
  double res = residual_matrix(p, P).norm();
  for (int it = 0; it < kMaxNewtonPolish; ++it) {
    const Matrix F = symmetrize(residual_matrix(p, P));
    const Matrix dP = solve_lyapunov(At - D * P, F);
    const Matrix candidate = symmetrize(P + dP);
    const double cand_res = residual_matrix(p, candidate).norm();
    if (!(cand_res < res)) break;
    P = candidate;
    res = cand_res;
  }
  return P;
}

Matrix solve_schur(const LQProblem& p) {
  const Eigen::Index n = p.A.rows();
  const Matrix At = shifted_drift(p);
  const Matrix D = quadratic_weight(p);

  Matrix H(2 * n, 2 * n);
  H << At, -D, -p.Q, -At.transpose();

  Eigen::ComplexSchur<CMatrix> schur(H.cast<Complex>());
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::NoStabilizingSolution, "Schur decomposition failed");
  }
  CMatrix T = schur.matrixT();
  CMatrix U = schur.matrixU();

  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double axis_tol = 1e-10 * scale;
  Eigen::Index stable = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    const double re = T(i, i).real();
    if (std::abs(re) <= axis_tol) {
      throw Error(ErrorCode::NoStabilizingSolution,
                  "Hamiltonian matrix has an eigenvalue on the imaginary axis "
                  "(eta may be too large)");
    }
    if (re < 0.0) ++stable;
  }
  if (stable != n) {
    throw Error(ErrorCode::NoStabilizingSolution, "stable subspace has wrong dimension");
  }

  // Bubble the stable eigenvalues to the leading block.
  for (Eigen::Index target = 0; target < n; ++target) {
    Eigen::Index j = target;
    while (j < 2 * n && T(j, j).real() >= 0.0) ++j;
    for (Eigen::Index k = j; k > target; --k) swap_schur(T, U, k - 1);
  }

  const CMatrix U11 = U.topLeftCorner(n, n);
  const CMatrix U21 = U.bottomLeftCorner(n, n);
  Eigen::FullPivLU<CMatrix> lu(U11);
  if (lu.rank() < n || lu.rcond() < 1e-14) {
    throw Error(ErrorCode::NoStabilizingSolution, "stable subspace is not complementary");
  }
  // P U11 = U21  <=>  U11^T P^T = U21^T
  const CMatrix Pc = U11.transpose().fullPivLu().solve(U21.transpose()).transpose();
  if (Pc.imag().cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, Pc.real().cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NoStabilizingSolution, "stabilizing solution is not real");
  }
  return symmetrize(Pc.real());
}

Matrix solve_scalar(const LQProblem& p) {
  if (p.A.rows() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "scalar ARE path requires n = 1");
  }
  const ScalarAreQuadratic quad = scalar_are_quadratic(p);
  // d p^2 - 2 at p - q = 0 with at = a - rho/2; stabilizing root makes
  // at - d p = -sqrt(at^2 + d q) negative.
  const double d = quad.c2;
  const double at = -0.5 * quad.c1;
  const double q = -quad.c0;
  const double disc = at * at + d * q;
  if (!(disc > 0.0)) {
    throw Error(ErrorCode::NoStabilizingSolution,
                "scalar ARE has no stabilizing root (eta may be too large)");
  }
  const double s = std::sqrt(disc);
  double p0;
  if (s - at > 1e-300 && std::abs(s - at) >= 1e-8 * s) {
    p0 = q / (s - at);  // rationalized form, stable for d -> 0
  } else {
    p0 = (at + s) / d;
  }
  return Matrix::Constant(1, 1, p0);
}

}  // namespace

ScalarAreQuadratic scalar_are_quadratic(const LQProblem& p) {
  if (p.A.rows() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "scalar ARE quadratic requires n = 1");
  }
  ScalarAreQuadratic quad;
  quad.c2 = quadratic_weight(p)(0, 0);
  quad.c1 = p.rho - 2.0 * p.A(0, 0);
  quad.c0 = -p.Q(0, 0);
  return quad;
}

double are_residual(const LQProblem& problem, const Matrix& P) {
  return residual_matrix(problem, P).norm();
}

EffectiveDrift effective_drift(const LQProblem& p, const Matrix& P0) {
  const Eigen::Index n = p.A.rows();
  if (P0.rows() != n || P0.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "P0 must be n x n");
  }
  EffectiveDrift out;
  out.A_cl = p.A - p.B * p.R.llt().solve(p.B.transpose()) * P0;
  out.A_eff = out.A_cl + 2.0 * p.eta * p.diffusion() * P0;
  return out;
}

RiccatiSolution solve_robust_are(const LQProblem& problem, AreMethod method) {
  const Eigen::Index n = problem.A.rows();
  if (method == AreMethod::Auto) method = n == 1 ? AreMethod::Scalar : AreMethod::Schur;

  Matrix P = method == AreMethod::Scalar ? solve_scalar(problem) : solve_schur(problem);
  if (method == AreMethod::Schur) P = polish(problem, P);

  RiccatiSolution sol;
  sol.P0 = P;
  sol.residual = are_residual(problem, P);
  if (!(sol.residual <= kResidualTol * (1.0 + P.norm()))) {
    std::ostringstream os;
    os << "ARE residual " << sol.residual << " exceeds tolerance";
    throw Error(ErrorCode::ResidualTooLarge, os.str());
  }
  const EffectiveDrift drift = effective_drift(problem, P);
  sol.A_cl = drift.A_cl;
  sol.A_eff = drift.A_eff;
  if (!is_hurwitz(sol.A_cl)) {
    throw Error(ErrorCode::NoStabilizingSolution, "closed-loop matrix A_cl is not Hurwitz");
  }
  sol.c0 = (problem.diffusion() * P).trace() / problem.rho;
  return sol;
}

}  // namespace guhjbi
