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

#include "guhjbi/hamiltonian.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace guhjbi {

namespace {

constexpr int kMaxSecularIters = 500;
constexpr double kHardCaseTol = 1e-12;
constexpr Eigen::Index kMaxBoxDim = 16;

void check_dims(const Vector& f, const Matrix& sigma, const Vector& p, double eta) {
  const Eigen::Index n = f.size();
  if (n == 0 || p.size() != n || sigma.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "f, p and sigma must share the state dimension");
  }
  if (!(eta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be nonnegative");
}

// Deterministic sign: first entry with non-negligible magnitude is positive.
Vector canonical_sign(Vector q) {
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (std::abs(q(i)) > 1e-12) {
      if (q(i) < 0.0) q = -q;
      break;
    }
  }
  return q;
}

Matrix inverse_sqrt_spd(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
  const Vector d = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Vector sensitivity_vector(const Vector& f, const Matrix& sigma, const Vector& p, double eta) {
  return f + eta * (sigma * (sigma.transpose() * p));
}

double gu_objective(const Vector& f, const Matrix& sigma, const Vector& p, double eta,
                    const Vector& delta) {
  const Vector q = p + delta;
  return q.dot(f) + 0.5 * eta * (sigma.transpose() * q).squaredNorm();
}

BallQuadraticMax maximize_on_ball(const Vector& v, const Matrix& H, double eps) {
  const Eigen::Index n = v.size();
  BallQuadraticMax out;
  out.delta = Vector::Zero(n);
  if (eps == 0.0) return out;

  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(H));
  const Vector lambda = es.eigenvalues();  // ascending
  const Matrix& V = es.eigenvectors();
  const Vector c = V.transpose() * v;
  const double lmax = lambda(n - 1);
  const double vnorm = v.norm();

  const double gap_tol = 1e-12 * std::max(1.0, std::abs(lmax));
  Eigen::Index top_begin = n - 1;
  while (top_begin > 0 && lambda(top_begin - 1) >= lmax - gap_tol) --top_begin;

  if (vnorm == 0.0 && std::abs(lmax) <= gap_tol) {
    return out;  // objective constant on the ball
  }

  double c_top_sq = 0.0;
  for (Eigen::Index i = top_begin; i < n; ++i) c_top_sq += c(i) * c(i);

  auto delta_at = [&](double mu) {
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = c(i) / (mu - lambda(i));
    return w;
  };

  out.on_boundary = true;
  if (std::sqrt(c_top_sq) < kHardCaseTol * std::max(1.0, vnorm)) {
    // Particular solution at mu = lmax with the top eigenspace left out.
    Vector w = Vector::Zero(n);
    for (Eigen::Index i = 0; i < top_begin; ++i) w(i) = c(i) / (lmax - lambda(i));
    const double wnorm = w.norm();
    if (wnorm <= eps) {
      const Vector q_top = canonical_sign(V.col(top_begin));
      const double tau = std::sqrt(std::max(0.0, eps * eps - wnorm * wnorm));
      out.delta = V * w + tau * q_top;
      out.mu = lmax;
      out.hard_case = true;
      return out;
    }
  }

  // Secular equation |d(mu)| = eps on (lmax, lmax + |v|/eps].
  double lo = lmax;
  double hi = lmax + vnorm / eps;
  double mu = hi;
  for (int it = 0; it < kMaxSecularIters; ++it) {
    Vector w = delta_at(mu);
    const double wn = w.norm();
    const double phi = wn * wn - eps * eps;
    if (std::abs(wn - eps) <= 1e-15 * eps || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mu)) {
      out.delta = V * w;
      out.mu = mu;
      return out;
    }
    if (phi > 0.0) {
      lo = mu;
    } else {
      hi = mu;
    }
    // Newton on psi(mu) = 1/|d(mu)| - 1/eps, which is nearly linear in mu.
    double dsum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double gap = mu - lambda(i);
      dsum += c(i) * c(i) / (gap * gap * gap);
    }
    const double psi = 1.0 / wn - 1.0 / eps;
    const double dpsi = dsum / (wn * wn * wn);
    double next = mu - psi / dpsi;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    mu = next;
  }
  throw Error(ErrorCode::SecularNoConvergence, "secular equation root-finder did not converge");
}

SupResult exact_sup_delta(const Vector& f, const Matrix& sigma, const Vector& p, double eta,
                          const UncertaintyGeometry& geom) {
  check_dims(f, sigma, p, eta);
  const Eigen::Index n = f.size();
  geom.validate(n);

  const Matrix Hs = eta * sigma * sigma.transpose();
  const Vector v = f + Hs * p;
  SupResult res;

  switch (geom.kind) {
    case GeometryKind::Ball2: {
      const BallQuadraticMax m = maximize_on_ball(v, Hs, geom.epsilon);
      res.delta_star = m.delta;
      res.multiplier = m.mu;
      res.on_boundary = m.on_boundary;
      break;
    }
    case GeometryKind::Ellipsoid: {
      const Matrix W = inverse_sqrt_spd(geom.M);
      const BallQuadraticMax m = maximize_on_ball(W * v, W * Hs * W, geom.epsilon);
      res.delta_star = W * m.delta;
      res.multiplier = m.mu;
      res.on_boundary = m.on_boundary;
      break;
    }
    case GeometryKind::BallInf: {
      if (n > kMaxBoxDim) {
        throw Error(ErrorCode::BoxTooLarge,
                    "exact box supremum enumerates 2^n vertices; n = " + std::to_string(n));
      }
      res.delta_star = Vector::Zero(n);
      if (geom.epsilon == 0.0) break;
      double best = -std::numeric_limits<double>::infinity();
      Vector vertex(n);
      for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        for (Eigen::Index i = 0; i < n; ++i) {
          vertex(i) = (mask >> i) & 1ul ? -geom.epsilon : geom.epsilon;
        }
        const double val = v.dot(vertex) + 0.5 * vertex.dot(Hs * vertex);
        if (val > best) {
          best = val;
          res.delta_star = vertex;
        }
      }
      res.on_boundary = true;
      break;
    }
  }
  res.value = gu_objective(f, sigma, p, eta, res.delta_star);
  return res;
}

double dual_norm_correction(const Vector& v, const UncertaintyGeometry& geom) {
  switch (geom.kind) {
    case GeometryKind::Ball2: return geom.epsilon * v.norm();
    case GeometryKind::BallInf: return geom.epsilon * v.lpNorm<1>();
    case GeometryKind::Ellipsoid: {
      const Vector w = symmetrize(geom.M).llt().solve(v);
      return geom.epsilon * std::sqrt(std::max(0.0, v.dot(w)));
    }
  }
  return 0.0;
}

double first_order_G(const Vector& f, const Matrix& sigma, const Vector& p, double eta,
                     const UncertaintyGeometry& geom) {
  check_dims(f, sigma, p, eta);
  geom.validate(f.size());
  const Vector v = sensitivity_vector(f, sigma, p, eta);
  const double phi0 = gu_objective(f, sigma, p, eta, Vector::Zero(f.size()));
  return phi0 + dual_norm_correction(v, geom);
}

Vector optimal_drift_perturbation(const Matrix& sigma, const Vector& p, const Vector& delta,
                                  double eta) {
  if (p.size() != sigma.rows() || delta.size() != p.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sigma, p and delta dimensions disagree");
  }
  return eta * (sigma.transpose() * (p + delta));
}

double drift_perturbation_objective(const Matrix& sigma, const Vector& p, const Vector& delta,
                                    double eta, const Vector& h) {
  if (h.size() != sigma.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "h must have the noise dimension");
  }
  const double linear = (p + delta).dot(sigma * h);
  if (eta == 0.0) return h.isZero(0.0) ? linear : -std::numeric_limits<double>::infinity();
  return linear - h.squaredNorm() / (2.0 * eta);
}

}  // namespace guhjbi
