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

#include "guhjbi/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "guhjbi/linear_pde.hpp"
#include "guhjbi/riccati.hpp"

namespace guhjbi {

namespace {

void require_grid_matches(const LQProblem& problem, const Grid& grid) {
  if (static_cast<Eigen::Index>(grid.dim()) != problem.state_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "grid dimension " + std::to_string(grid.dim()) + " does not match state dimension " +
                    std::to_string(problem.state_dim()));
  }
}

Vector node_gradient(const GridField& grad, std::size_t node) {
  Vector p(static_cast<Eigen::Index>(grad.components));
  for (std::size_t d = 0; d < grad.components; ++d) p(static_cast<Eigen::Index>(d)) = grad.at(node, d);
  return p;
}

GridField gradient_of(const GridField& V, const GradientOptions& opts) {
  GridField g = grid_gradient(V);
  return opts.smooth ? smooth3(g) : g;
}

LinearPdeOperator linear_operator(const LQProblem& problem, const RiccatiSolution& riccati,
                                  const Grid& grid) {
  require_grid_matches(problem, grid);
  if (!is_hurwitz(riccati.A_eff)) {
    throw Error(ErrorCode::NotHurwitz, "A_eff is not Hurwitz");
  }
  return LinearPdeOperator(grid, riccati.A_eff, problem.diffusion(), problem.rho);
}

}  // namespace

std::string_view to_string(U1Convention c) {
  return c == U1Convention::MainText ? "maintext" : "appendixe";
}

U1Convention parse_u1_convention(std::string_view name) {
  if (name == "maintext" || name == "MainText") return U1Convention::MainText;
  if (name == "appendixe" || name == "AppendixE") return U1Convention::AppendixE;
  throw Error(ErrorCode::InvalidArgument, "unknown u1 convention '" + std::string(name) + "'");
}

double singularity_cutoff(const Grid& grid) { return 1e-6 * grid.diameter(); }

GridField solve_v1(const RiccatiSolution& riccati, const LQProblem& problem, const Grid& grid,
                   const V1Options& options) {
  const LinearPdeOperator op = linear_operator(problem, riccati, grid);
  GridField source(grid, 1);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    source.at(node) = options.source_scale * (riccati.A_eff * grid.point_vector(node)).norm();
  }
  return op.solve(source);
}

GridField compute_u1(const GridField& V1, const LQProblem& problem, const RiccatiSolution& riccati,
                     U1Convention convention, const GradientOptions& grad) {
  require_grid_matches(problem, V1.grid);
  const Grid& grid = V1.grid;
  const GridField p1 = gradient_of(V1, grad);
  const Eigen::LLT<Matrix> Rllt(problem.R);
  const Matrix K = Rllt.solve(problem.B.transpose());  // R^-1 B'
  const double cutoff = singularity_cutoff(grid);
  const auto k = static_cast<std::size_t>(problem.control_dim());

  GridField u1(grid, k);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const Vector p = node_gradient(p1, node);
    Vector u;
    if (convention == U1Convention::MainText) {
      u = -K * p;
    } else {
      const Vector v0 = riccati.A_eff * grid.point_vector(node);
      const double nv = v0.norm();
      u = -0.5 * K * p;
      if (nv >= cutoff) u -= 0.5 * K * (v0 / nv);
    }
    for (std::size_t c = 0; c < k; ++c) u1.at(node, c) = u(static_cast<Eigen::Index>(c));
  }
  return u1;
}

H2Result compute_h2(const GridField& V1, const GridField& u1, const LQProblem& problem,
                    const RiccatiSolution& riccati, const GradientOptions& grad) {
  require_grid_matches(problem, V1.grid);
  if (!(u1.grid == V1.grid) || u1.components != static_cast<std::size_t>(problem.control_dim())) {
    throw Error(ErrorCode::GridMismatch, "u1 must live on the V1 grid with control_dim components");
  }
  const Grid& grid = V1.grid;
  const GridField p1 = gradient_of(V1, grad);
  const Matrix S = problem.diffusion();
  const double eta = problem.eta;

  H2Result out;
  out.cutoff = singularity_cutoff(grid);
  out.simplified = GridField(grid, 1);
  out.unsimplified = GridField(grid, 1);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const Vector p = node_gradient(p1, node);
    Vector u(problem.control_dim());
    for (Eigen::Index c = 0; c < u.size(); ++c) u(c) = u1.at(node, static_cast<std::size_t>(c));
    const Vector v0 = riccati.A_eff * grid.point_vector(node);
    const double nv = v0.norm();
    const bool singular = nv < out.cutoff;
    if (singular) out.singular_nodes.push_back(node);

    const double uRu = u.dot(problem.R * u);
    const double pSp = p.dot(S * p);
    const double cross = singular ? 0.0 : eta * v0.dot(S * p) / nv;
    out.simplified.at(node) = -uRu + 0.5 * eta * pSp + cross;

    const Vector v1 = problem.B * u + eta * S * p;
    const double norm_term = singular ? 0.0 : v0.dot(v1) / nv;
    out.unsimplified.at(node) = uRu + p.dot(problem.B * u) + 0.5 * eta * pSp + norm_term;
  }
  return out;
}

GridField solve_v2(const GridField& H2, const LQProblem& problem, const RiccatiSolution& riccati,
                   const Grid& grid) {
  if (!(H2.grid == grid)) throw Error(ErrorCode::GridMismatch, "H2 lives on a different grid");
  return linear_operator(problem, riccati, grid).solve(H2);
}

double v0_at(const RiccatiSolution& riccati, const Vector& x) {
  return x.dot(riccati.P0 * x) + riccati.c0;
}

GridField v0_field(const RiccatiSolution& riccati, const Grid& grid) {
  GridField V0(grid, 1);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    V0.at(node) = v0_at(riccati, grid.point_vector(node));
  }
  return V0;
}

GridField u0_field(const RiccatiSolution& riccati, const LQProblem& problem, const Grid& grid) {
  const Matrix K = problem.R.llt().solve(problem.B.transpose()) * riccati.P0;
  const auto k = static_cast<std::size_t>(problem.control_dim());
  GridField u0(grid, k);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const Vector u = -K * grid.point_vector(node);
    for (std::size_t c = 0; c < k; ++c) u0.at(node, c) = u(static_cast<Eigen::Index>(c));
  }
  return u0;
}

AssembledValue assemble_value(const RiccatiSolution& riccati, const GridField& V1,
                              const GridField* V2, double epsilon) {
  if (V2 && !(V2->grid == V1.grid)) {
    throw Error(ErrorCode::GridMismatch, "V1 and V2 live on different grids");
  }
  AssembledValue out;
  out.V0 = v0_field(riccati, V1.grid);
  out.total = out.V0;
  for (std::size_t node = 0; node < V1.nodes(); ++node) {
    double v = out.V0.at(node) + epsilon * V1.at(node);
    if (V2) v += epsilon * epsilon * V2->at(node);
    out.total.at(node) = v;
  }
  return out;
}

PerturbationSolution solve_perturbation(const LQProblem& problem, const Grid& grid, double epsilon,
                                        const PerturbationOptions& options) {
  PerturbationSolution sol;
  sol.riccati = solve_robust_are(problem);
  sol.epsilon = epsilon;
  sol.u1_convention = options.convention;
  sol.V1 = solve_v1(sol.riccati, problem, grid);
  sol.u1 = compute_u1(sol.V1, problem, sol.riccati, options.convention, options.gradient);
  if (options.second_order) {
    const GridField u1e = options.convention == U1Convention::AppendixE
                              ? sol.u1
                              : compute_u1(sol.V1, problem, sol.riccati, U1Convention::AppendixE,
                                           options.gradient);
    H2Result h2 = compute_h2(sol.V1, u1e, problem, sol.riccati, options.gradient);
    sol.V2 = solve_v2(h2.simplified, problem, sol.riccati, grid);
    sol.H2 = std::move(h2.simplified);
  }
  return sol;
}

unsigned configured_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GUHJBI_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<SweepRow> sensitivity_sweep(const LQProblem& problem_template,
                                        const std::vector<double>& eta_list,
                                        const std::vector<double>& epsilon_list, const Grid& grid,
                                        U1Convention convention, unsigned threads) {
  if (threads == 0) threads = configured_threads();

  // Everything except the final assembly depends on eta only.
  auto eta_block = [&](double eta) {
    std::vector<SweepRow> rows;
    rows.reserve(epsilon_list.size());
    LQProblem problem = problem_template;
    problem.eta = eta;
    try {
      problem = validate_problem(problem);
      PerturbationOptions opts;
      opts.convention = convention;
      opts.second_order = false;
      const PerturbationSolution sol = solve_perturbation(problem, grid, 0.0, opts);

      std::vector<double> origin(grid.dim(), 0.0);
      std::vector<double> probe(grid.dim(), 0.0);
      probe[0] = 3.0;
      const std::size_t n0 = grid.nearest_node(origin);
      const std::size_t n3 = grid.nearest_node(probe);
      for (double eps : epsilon_list) {
        const AssembledValue V = assemble_value(sol.riccati, sol.V1, nullptr, eps);
        SweepRow row;
        row.eta = eta;
        row.epsilon = eps;
        row.p0_trace = sol.riccati.P0.trace();
        row.a_eff_norm = sol.riccati.A_eff.jacobiSvd().singularValues()(0);
        row.u1_sup = sol.u1.max_abs();
        row.V_at_0 = V.total.at(n0);
        row.V_at_3 = V.total.at(n3);
        rows.push_back(row);
      }
    } catch (const Error& e) {
      rows.clear();
      for (double eps : epsilon_list) {
        SweepRow row;
        row.eta = eta;
        row.epsilon = eps;
        row.p0_trace = row.a_eff_norm = row.u1_sup = row.V_at_0 = row.V_at_3 = std::nan("");
        row.status = std::string(to_string(e.code()));
        rows.push_back(row);
      }
    }
    return rows;
  };

  std::vector<std::vector<SweepRow>> blocks(eta_list.size());
  for (std::size_t start = 0; start < eta_list.size(); start += threads) {
    const std::size_t stop = std::min(eta_list.size(), start + threads);
    if (stop - start == 1) {
      blocks[start] = eta_block(eta_list[start]);
      continue;
    }
    std::vector<std::future<std::vector<SweepRow>>> pending;
    for (std::size_t i = start; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async, eta_block, eta_list[i]));
    }
    for (std::size_t i = start; i < stop; ++i) blocks[i] = pending[i - start].get();
  }

  std::vector<SweepRow> rows;
  for (auto& b : blocks) rows.insert(rows.end(), b.begin(), b.end());
  return rows;
}

double quadratic_fit_relative_residual(const GridField& field, double half_width) {
  const Grid& g = field.grid;
  const std::size_t dim = g.dim();
  std::vector<std::size_t> nodes;
  for (std::size_t node = 0; node < g.size(); ++node) {
    const auto x = g.point(node);
    bool inside = true;
    for (std::size_t d = 0; d < dim; ++d) inside = inside && std::abs(x[d]) <= half_width + 1e-12;
    if (inside) nodes.push_back(node);
  }
  const Eigen::Index cols = dim == 1 ? 3 : 6;
  if (nodes.size() < static_cast<std::size_t>(cols)) {
    throw Error(ErrorCode::InvalidArgument, "too few nodes inside the fit window");
  }
  Matrix Phi(static_cast<Eigen::Index>(nodes.size()), cols);
  Vector y(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    const auto x = g.point(nodes[r]);
    const auto i = static_cast<Eigen::Index>(r);
    if (dim == 1) {
      Phi.row(i) << 1.0, x[0], x[0] * x[0];
    } else {
      Phi.row(i) << 1.0, x[0], x[1], x[0] * x[0], x[0] * x[1], x[1] * x[1];
    }
    y(i) = field.at(nodes[r]);
  }
  const Vector coef = Phi.colPivHouseholderQr().solve(y);
  const double ny = y.norm();
  return ny == 0.0 ? 0.0 : (y - Phi * coef).norm() / ny;
}

}  // namespace guhjbi
