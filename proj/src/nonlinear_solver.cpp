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

#include "guhjbi/nonlinear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "guhjbi/errors.hpp"
#include "guhjbi/hamiltonian.hpp"
#include "guhjbi/linear_pde.hpp"
#include "guhjbi/riccati.hpp"

namespace guhjbi {

namespace {

double smooth_abs(double z, double mu) {
  return mu > 0.0 ? std::sqrt(z * z + mu * mu) - mu : std::abs(z);
}

double smooth_abs_slope(double z, double mu) {
  if (mu > 0.0) return z / std::sqrt(z * z + mu * mu);
  return z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0);
}

struct Scalars {
  double a, b, s2, q, r, rho, eta;
};

Scalars scalars(const LQProblem& problem) {
  return {problem.A(0, 0), problem.B(0, 0), problem.diffusion()(0, 0), problem.Q(0, 0),
          problem.R(0, 0), problem.rho, problem.eta};
}

// Central first and second differences with mirror ghost nodes.
void differences(const GridField& V, std::vector<double>& p, std::vector<double>& d2) {
  const std::size_t N = V.nodes();
  const double h = V.grid.axis(0).spacing();
  p.assign(N, 0.0);
  d2.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double left = V.values[i == 0 ? 1 : i - 1];
    const double right = V.values[i + 1 == N ? N - 2 : i + 1];
    p[i] = (right - left) / (2.0 * h);
    d2[i] = (right - 2.0 * V.values[i] + left) / (h * h);
  }
}

void check_1d(const LQProblem& problem, const Grid& grid) {
  validate_problem(problem);
  if (problem.state_dim() != 1 || problem.control_dim() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "full solver requires n = m = 1");
  }
  if (grid.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "full solver requires a 1D grid");
}

GridField improve_all(const GridField& V, const Scalars& k, double eps, double mu) {
  std::vector<double> p, d2;
  differences(V, p, d2);
  GridField u(V.grid, 1);
  for (std::size_t i = 0; i < V.nodes(); ++i) {
    const double x = V.grid.point(i)[0];
    u.values[i] = improve_control(p[i], k.a * x + k.eta * k.s2 * p[i], k.b, k.r, eps, mu);
  }
  return u;
}

double sup_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double sup_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void PolicyIterationConfig::validate() const {
  if (max_outer_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_outer_iters must be >= 1");
  if (!(policy_tol > 0.0) || !(value_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (!(norm_smoothing >= 0.0)) throw Error(ErrorCode::InvalidArgument, "norm_smoothing must be >= 0");
}

double improvement_objective(double u, double p, double c, double b, double r, double eps,
                             double mu) {
  return r * u * u + p * b * u + eps * smooth_abs(c + b * u, mu);
}

double improvement_derivative(double u, double p, double c, double b, double r, double eps,
                              double mu) {
  return 2.0 * r * u + p * b + eps * b * smooth_abs_slope(c + b * u, mu);
}

double improve_control(double p, double c, double b, double r, double eps, double mu) {
  if (!(r > 0.0)) throw Error(ErrorCode::NonConvexObjective, "control weight must be positive");
  if (b == 0.0) return 0.0;
  if (eps == 0.0) return -p * b / (2.0 * r);

  // Exact branches of |c + b u|.
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](double u) {
    const double value = improvement_objective(u, p, c, b, r, eps, 0.0);
    if (value < best_value) {
      best_value = value;
      best = u;
    }
  };
  const double u_plus = -b * (p + eps) / (2.0 * r);
  const double u_minus = -b * (p - eps) / (2.0 * r);
  if (c + b * u_plus >= 0.0) consider(u_plus);
  if (c + b * u_minus <= 0.0) consider(u_minus);
  consider(-c / b);
  if (mu == 0.0) return best;

  // Smoothed norm: the derivative is strictly increasing and changes sign on
  // [lo, hi].
  double lo = (-p * b - eps * std::abs(b)) / (2.0 * r);
  double hi = (-p * b + eps * std::abs(b)) / (2.0 * r);
  double u = std::clamp(best, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double g = improvement_derivative(u, p, c, b, r, eps, mu);
    if (g == 0.0) return u;
    if (g < 0.0) lo = u; else hi = u;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u))) {
      break;
    }
    const double z = c + b * u;
    const double w = std::sqrt(z * z + mu * mu);
    const double slope = 2.0 * r + eps * b * b * mu * mu / (w * w * w);
    double next = u - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == u) break;
    u = next;
  }
  // Pick the better endpoint of the final bracket.
  const double g_lo = std::abs(improvement_derivative(lo, p, c, b, r, eps, mu));
  const double g_hi = std::abs(improvement_derivative(hi, p, c, b, r, eps, mu));
  const double g_u = std::abs(improvement_derivative(u, p, c, b, r, eps, mu));
  if (g_lo < g_u && g_lo <= g_hi) return lo;
  if (g_hi < g_u) return hi;
  return u;
}

double effective_radius_1d(const UncertaintyGeometry& geom) {
  geom.validate(1);
  return dual_norm_correction(Vector::Ones(1), geom);
}

double full_residual(const GridField& V, const LQProblem& problem, double eps, double mu) {
  if (V.grid.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "full residual requires 1D");
  const Scalars k = scalars(problem);
  std::vector<double> p, d2;
  differences(V, p, d2);
  double worst = 0.0;
  for (std::size_t i = 0; i < V.nodes(); ++i) {
    const double x = V.grid.point(i)[0];
    const double c = k.a * x + k.eta * k.s2 * p[i];
    const double u = improve_control(p[i], c, k.b, k.r, eps, mu);
    const double ham = k.q * x * x + k.r * u * u + p[i] * (k.a * x + k.b * u) +
                       0.5 * k.s2 * d2[i] + 0.5 * k.eta * k.s2 * p[i] * p[i] +
                       eps * smooth_abs(c + k.b * u, mu);
    worst = std::max(worst, std::abs(k.rho * V.values[i] - ham));
  }
  return worst;
}

FullSolution solve_full_1d(const LQProblem& problem, const UncertaintyGeometry& geom,
                           const Grid& grid, const PolicyIterationConfig& cfg, FullInit init) {
  check_1d(problem, grid);
  cfg.validate();
  const double eps = effective_radius_1d(geom);
  const double mu = cfg.norm_smoothing;
  const Scalars k = scalars(problem);
  if (!(k.r > 0.0)) throw Error(ErrorCode::NonConvexObjective, "control weight must be positive");
  if (!(k.s2 > 0.0)) throw Error(ErrorCode::DegenerateDiffusion, "sigma must be nonzero");

  const std::size_t N = grid.size();
  const double h = grid.axis(0).spacing();

  GridField V(grid, 1, 0.0);
  GridField u(grid, 1, 0.0);
  if (init == FullInit::U0) {
    const RiccatiSolution ric = solve_robust_are(problem);
    const double p0 = ric.P0(0, 0);
    for (std::size_t i = 0; i < N; ++i) {
      const double x = grid.point(i)[0];
      V.values[i] = p0 * x * x + ric.c0;
      u.values[i] = -k.b / k.r * p0 * x;
    }
  }

  std::vector<double> p, d2;
  std::vector<double> lower(N), diag(N), upper(N), rhs(N);
  const double diff = 0.5 * k.s2 / (h * h);
  for (int iter = 1; iter <= cfg.max_outer_iters; ++iter) {
    // Evaluation of the policy u, Newton-linearized in V' around V.
    differences(V, p, d2);
    for (std::size_t i = 0; i < N; ++i) {
      const double x = grid.point(i)[0];
      const double w = k.a * x + k.b * u.values[i] + k.eta * k.s2 * p[i];
      const double slope = smooth_abs_slope(w, mu);
      const double beta = k.a * x + k.b * u.values[i] + k.eta * k.s2 * p[i] +
                          eps * k.eta * k.s2 * slope;
      rhs[i] = k.q * x * x + k.r * u.values[i] * u.values[i] -
               0.5 * k.eta * k.s2 * p[i] * p[i] +
               eps * (smooth_abs(w, mu) - k.eta * k.s2 * slope * p[i]);
      diag[i] = k.rho + 2.0 * diff;
      if (i == 0) {
        lower[i] = 0.0;
        upper[i] = -2.0 * diff;
      } else if (i + 1 == N) {
        lower[i] = -2.0 * diff;
        upper[i] = 0.0;
      } else {
        lower[i] = -diff + beta / (2.0 * h);
        upper[i] = -diff - beta / (2.0 * h);
      }
    }
    GridField V_next(grid, 1);
    V_next.values = solve_tridiagonal(lower, diag, upper, rhs);
    if (!V_next.all_finite()) throw Error(ErrorCode::NoConvergence, "policy evaluation diverged");
    GridField u_next = improve_all(V_next, k, eps, mu);

    const double dV = sup_diff(V_next.values, V.values);
    const double du = sup_diff(u_next.values, u.values);
    V = std::move(V_next);
    u = std::move(u_next);
    if (du <= cfg.policy_tol * std::max(1.0, sup_abs(u.values)) &&
        dV <= cfg.value_tol * std::max(1.0, sup_abs(V.values))) {
      FullSolution out;
      out.V = std::move(V);
      out.u = std::move(u);
      out.iterations = iter;
      out.residual = full_residual(out.V, problem, eps, mu);
      return out;
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "policy iteration did not converge in " + std::to_string(cfg.max_outer_iters) +
                  " iterations");
}

}  // namespace guhjbi
