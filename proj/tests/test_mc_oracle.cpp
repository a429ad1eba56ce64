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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "guhjbi/mc_oracle.hpp"
#include "guhjbi/riccati.hpp"
#include "oracles.hpp"

using namespace guhjbi;

namespace {

LQProblem baseline() { return scalar_problem(0.5, 1.0, 1.0, 1.0, 1.0, 0.1, 0.2); }

LQProblem noiseless() { return scalar_problem(0.5, 1.0, 0.0, 1.0, 1.0, 0.1, 0.2); }

double gk_origin(double a, double s2, double rho) {
  auto f = [&](double t) {
    return std::abs(a) * std::exp(-rho * t) *
           std::sqrt(2.0 * oracle::ou_variance(a, s2, t) / std::numbers::pi);
  };
  double total = 0.0;
  for (double lo = 0.0; lo < 500.0; lo += 5.0) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, lo + 5.0, 10);
  }
  return total;
}

// Same integral at a general start point, with the folded-normal mean.
double gk_at(double x, double a, double s2, double rho) {
  auto f = [&](double t) {
    const double m = x * std::exp(a * t);
    const double s = std::sqrt(oracle::ou_variance(a, s2, t));
    const double folded = s > 0.0 ? s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * m * m / (s * s)) +
                                        m * std::erf(m / (s * std::sqrt(2.0)))
                                  : std::abs(m);
    return std::abs(a) * std::exp(-rho * t) * folded;
  };
  double total = 0.0;
  for (double lo = 0.0; lo < 500.0; lo += 5.0) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, lo + 5.0, 10);
  }
  return total;
}

}  // namespace

TEST(McConfigTest, Validation) {
  McConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_paths = 0;
  EXPECT_THROW(c.validate(), Error);
  c = McConfig{};
  c.dt = 1.0;  // > horizon / 100
  EXPECT_THROW(c.validate(), Error);
  c = McConfig{};
  c.horizon = -1.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Deterministic, ExactTransitionsMatchClosedForm) {
  const LQProblem p = noiseless();
  const RiccatiSolution r = solve_robust_are(p);
  const double a = r.A_eff(0, 0);
  McConfig cfg;
  cfg.n_paths = 1;
  for (double x : {1.0, 2.0, 5.0}) {
    const McEstimate e = feynman_kac_v1_exact_ou(x, r, p, cfg);
    EXPECT_NEAR(e.estimate, std::abs(a * x) / (p.rho - a), 1e-6) << "x = " << x;
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.n_paths, 1u);
  }
}

TEST(Deterministic, EulerMatchesGeometricSeries) {
  // Euler steps z_k = (1 + a dt)^k x; trapezoid sum in closed form.
  const LQProblem p = noiseless();
  const RiccatiSolution r = solve_robust_are(p);
  const double a = r.A_eff(0, 0);
  McConfig cfg;
  cfg.n_paths = 1;
  cfg.dt = 1e-3;
  cfg.horizon = 80.0;
  const double K = 80000.0;
  const double q = (1.0 + a * cfg.dt) * std::exp(-p.rho * cfg.dt);
  for (double x : {1.0, -2.0}) {
    const double g0 = std::abs(a * x);
    const double expected = 0.5 * cfg.dt * g0 * (1.0 + q) * (1.0 - std::pow(q, K)) / (1.0 - q);
    const McEstimate e = feynman_kac_v1(Vector::Constant(1, x), r, p, cfg);
    EXPECT_NEAR(e.estimate, expected, 1e-10 * expected);
  }
}

TEST(Deterministic, PlanarMatchesMatrixExponentialIntegral) {
  LQProblem p;
  p.A = (Matrix(2, 2) << 0.2, 0.1, -0.1, 0.3).finished();
  p.B = Matrix::Identity(2, 2);
  p.Sigma = Matrix::Zero(2, 2);
  p.Q = Matrix::Identity(2, 2);
  p.R = Matrix::Identity(2, 2);
  p.rho = 0.1;
  p.eta = 0.1;
  const RiccatiSolution r = solve_robust_are(p);
  const Vector x = (Vector(2) << 1.0, -0.5).finished();
  Eigen::ComplexEigenSolver<Matrix> es(r.A_eff);
  const Eigen::MatrixXcd V = es.eigenvectors();
  const Eigen::MatrixXcd Vinv = V.inverse();
  auto f = [&](double t) {
    const Eigen::VectorXcd l = (es.eigenvalues() * t).array().exp();
    const Eigen::MatrixXcd E = V * l.asDiagonal() * Vinv;
    return std::exp(-p.rho * t) * (r.A_eff * (E * x.cast<std::complex<double>>()).real()).norm();
  };
  double ref = 0.0;
  for (double lo = 0.0; lo < 80.0; lo += 2.0) {
    ref += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, lo + 2.0, 10);
  }
  McConfig cfg;
  cfg.n_paths = 1;
  cfg.dt = 1e-4;
  const McEstimate e = feynman_kac_v1(x, r, p, cfg);
  EXPECT_NEAR(e.estimate, ref, 2e-4 * ref);
}

TEST(Quadrature, OriginAgreesWithGaussKronrod) {
  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  const double ref = gk_origin(r.A_eff(0, 0), 1.0, 0.1);
  EXPECT_NEAR(quadrature_v1_origin(r, p), ref, 1e-8);
  EXPECT_NEAR(quadrature_v1_1d(0.0, r, p), ref, 1e-8);
}

TEST(Quadrature, LargeStateMatchesOracleAndDeterministicLimit) {
  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  const double a = r.A_eff(0, 0);
  double prev = 0.0;
  for (double x : {200.0, 2000.0, 20000.0}) {
    const double q = quadrature_v1_1d(x, r, p);
    EXPECT_NEAR(q / gk_at(x, a, 1.0, p.rho), 1.0, 1e-8) << x;
    // The folded-normal excess over |m| is positive and fades relative to |x|.
    const double ratio = q / (std::abs(a * x) / (p.rho - a));
    EXPECT_GT(ratio, 1.0);
    if (prev > 0.0) EXPECT_LT(ratio, prev);
    prev = ratio;
  }
}

TEST(Stochastic, EulerAgreesWithQuadrature) {
  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  McConfig cfg;
  cfg.n_paths = 4000;
  cfg.dt = 2e-3;
  cfg.seed = 99;
  const std::vector<Vector> xs{Vector::Zero(1), Vector::Constant(1, 3.0)};
  const auto est = feynman_kac_v1_batch(xs, r, p, cfg);
  for (const McEstimate& e : est) {
    const double ref = quadrature_v1_1d(e.x(0), r, p);
    EXPECT_NEAR(e.estimate, ref, 4.0 * e.std_error + 0.02) << "x = " << e.x(0);
    EXPECT_GT(e.std_error, 0.0);
    EXPECT_LT(e.truncation_bound, 0.02);
  }
}

TEST(Stochastic, ExactTransitionsAgreeWithQuadrature) {
  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  McConfig cfg;
  cfg.n_paths = 4000;
  cfg.dt = 5e-3;
  cfg.seed = 5;
  const McEstimate e = feynman_kac_v1_exact_ou(1.0, r, p, cfg);
  EXPECT_NEAR(e.estimate, quadrature_v1_1d(1.0, r, p), 4.0 * e.std_error + 1e-3);
}

TEST(Stochastic, DeterministicAcrossThreadsAndBatching) {
  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  McConfig cfg;
  cfg.n_paths = 64;
  cfg.dt = 1e-2;
  cfg.horizon = 10.0;
  McOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const std::vector<Vector> xs{Vector::Constant(1, -1.0), Vector::Constant(1, 2.0)};
  const auto a = feynman_kac_v1_batch(xs, r, p, cfg, one);
  const auto b = feynman_kac_v1_batch(xs, r, p, cfg, four);
  const McEstimate c = feynman_kac_v1(xs[1], r, p, cfg, one);
  EXPECT_EQ(a[0].estimate, b[0].estimate);
  EXPECT_EQ(a[1].std_error, b[1].std_error);
  EXPECT_EQ(a[1].estimate, c.estimate);
  cfg.seed += 1;
  EXPECT_NE(feynman_kac_v1(xs[1], r, p, cfg, one).estimate, c.estimate);
}

TEST(TruncationBound, DominatesTail) {
  // Tail int_T^inf e^{-rho t} E|a Z_t| dt by quadrature for a short horizon.
  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  const double a = r.A_eff(0, 0);
  const double x = 2.0, T = 10.0;
  auto f = [&](double t) {
    const double m = std::exp(a * t) * x;
    const double var = oracle::ou_variance(a, 1.0, t);
    const double sd = std::sqrt(var);
    return std::abs(a) * std::exp(-p.rho * t) *
           (sd * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * m * m / var) +
            m * std::erf(m / (sd * std::numbers::sqrt2)));
  };
  double tail = 0.0;
  for (double lo = T; lo < 500.0; lo += 5.0) {
    tail += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, lo + 5.0, 10);
  }
  const double bound = truncation_bound(Vector::Constant(1, x), r, p, T);
  EXPECT_GE(bound, tail);
  EXPECT_LT(truncation_bound(Vector::Constant(1, x), r, p, 80.0), bound);
}

TEST(Errors, NotHurwitzAndDimensions) {
  const LQProblem p = baseline();
  RiccatiSolution r = solve_robust_are(p);
  McConfig cfg;
  cfg.n_paths = 2;
  cfg.horizon = 1.0;
  EXPECT_THROW(feynman_kac_v1(Vector::Zero(2), r, p, cfg), Error);
  r.A_eff(0, 0) = 0.1;
  try {
    feynman_kac_v1(Vector::Zero(1), r, p, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHurwitz);
  }
}
