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

// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "guhjbi/cli.hpp"
#include "guhjbi/hamiltonian.hpp"
#include "guhjbi/linear_pde.hpp"
#include "guhjbi/mc_oracle.hpp"
#include "guhjbi/nonlinear_solver.hpp"
#include "guhjbi/perturbation.hpp"
#include "guhjbi/riccati.hpp"
#include "../oracles.hpp"

using namespace guhjbi;

namespace {

// AC-1
constexpr double kAc1QuadraticResidual = 1e-12;
constexpr double kAc1P0 = 2.24304;
constexpr double kAc1AEff = -0.84583;
constexpr double kAc1ValueTol = 1e-5;
constexpr double kAc1Seconds = 1.0;
// AC-2
constexpr std::size_t kAc2Points = 2001;
constexpr double kAc2HalfWidth = 10.0;
constexpr std::size_t kAc2Paths = 100000;
constexpr double kAc2Dt = 1e-3;
constexpr double kAc2Horizon = 80.0;
constexpr double kAc2AbsTol = 1e-2;
constexpr double kAc2SeMultiple = 2.0;
constexpr double kAc2QuadTol = 1e-2;
constexpr double kAc2Seconds = 300.0;
// AC-3
constexpr double kAc3Tol = 1e-6;
constexpr double kAc3Seconds = 1.0;
// AC-4
constexpr int kAc4Instances = 100;
constexpr double kAc4RelTol = 1e-3;
constexpr double kAc4Kkt = 1e-8;
constexpr double kAc4Seconds = 30.0;
// AC-5
constexpr double kAc5Analytic = 1e-12;
constexpr double kAc5Box = 1e-6;
// AC-6
constexpr double kAc6HalfWidth = 5.0;
constexpr double kAc6Factor = 10.0;
constexpr double kAc6NonlinearFit = 1e-6;
// AC-7
constexpr double kAc7Window = 3.0;
constexpr double kAc7RatioLo = 3.0;
constexpr double kAc7RatioHi = 5.0;
constexpr double kAc7Seconds = 120.0;
// AC-8
constexpr double kAc8Window = 3.0;
// AC-9
constexpr double kAc9Cutoff = 1e-6;
constexpr double kAc9Identity = 1e-8;
constexpr double kAc9Linearity = 1e-10;
// AC-10
constexpr double kAc10Residual = 1e-8;
constexpr double kAc10OrderLo = 1.8;
constexpr double kAc10OrderHi = 2.2;
constexpr double kAc10HalfWidth = 5.0;
constexpr double kAc10Window = 2.5;
constexpr std::size_t kAc10Grids[3] = {101, 201, 401};
constexpr double kAc10Seconds = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g(double v) { return fmt("%.6g", v); }

LQProblem baseline() { return scalar_problem(0.5, 1.0, 1.0, 1.0, 1.0, 0.1, 0.2); }

LQProblem planar() {
  LQProblem p;
  p.A = (Matrix(2, 2) << 0.2, 0.1, -0.1, 0.3).finished();
  p.B = Matrix::Identity(2, 2);
  p.Sigma = 0.5 * Matrix::Identity(2, 2);
  p.Q = Matrix::Identity(2, 2);
  p.R = Matrix::Identity(2, 2);
  p.rho = 0.1;
  p.eta = 0.1;
  return p;
}

std::size_t node_at(const Grid& grid, double x) {
  const double c[1] = {x};
  return grid.nearest_node(c);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ac1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const LQProblem p = baseline();
  const RiccatiSolution s = solve_robust_are(p);
  const double p0 = s.P0(0, 0);
  const double quad = 0.6 * p0 * p0 - 0.9 * p0 - 1.0;
  const double a_eff = 0.5 - 0.6 * p0;
  o.pass = std::abs(quad) < kAc1QuadraticResidual && std::abs(p0 - kAc1P0) <= kAc1ValueTol &&
           std::abs(s.A_eff(0, 0) - kAc1AEff) <= kAc1ValueTol &&
           std::abs(s.A_eff(0, 0) - a_eff) <= 1e-14;

  // The CLI document must expose the mismatch with the quoted 2.264 / -0.8584.
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "guhjbi_acceptance_ac1";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "baseline.json")
      << R"({"A": 0.5, "B": 1, "Sigma": 1, "Q": 1, "R": 1, "rho": 0.1, "eta": 0.2})";
  std::vector<std::string> args{"guhjbi", "solve-are", "--config", (dir / "baseline.json").string(),
                                "--out", (dir / "out").string()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  const int code = cli::run(static_cast<int>(argv.size()), argv.data());
  bool recorded = false;
  if (code == 0) {
    std::ifstream is(dir / "out" / "riccati.json");
    const auto j = nlohmann::json::parse(is);
    recorded = j.contains("reference_values") && !j["reference_values"]["consistent"].get<bool>() &&
               j["reference_values"]["p0"].get<double>() == 2.264;
  }
  fs::remove_all(dir);
  const double secs = seconds_since(t0);
  o.pass = o.pass && recorded && secs < kAc1Seconds;
  o.detail = "p0=" + fmt("%.8f", p0) + " a_eff=" + fmt("%.8f", s.A_eff(0, 0)) +
             " |0.6p^2-0.9p-1|=" + g(std::abs(quad)) + " (tol " + g(kAc1QuadraticResidual) +
             ", values +-" + g(kAc1ValueTol) + "), discrepancy recorded=" +
             (recorded ? "yes" : "no") + ", " + fmt("%.3f", secs) + "s";
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  const Grid grid = Grid::uniform_1d(-kAc2HalfWidth, kAc2HalfWidth, kAc2Points);
  const GridField V1 = solve_v1(r, p, grid);
  const std::vector<double> probes{0.0, 1.0, -1.0, 3.0, -3.0};
  std::vector<Vector> xs;
  for (double x : probes) xs.push_back(Vector::Constant(1, x));
  McConfig cfg;
  cfg.n_paths = kAc2Paths;
  cfg.dt = kAc2Dt;
  cfg.horizon = kAc2Horizon;
  const auto est = feynman_kac_v1_batch(xs, r, p, cfg);
  std::string d;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const double fd = V1.values[node_at(grid, probes[k])];
    const double tol = std::max(kAc2SeMultiple * est[k].std_error, kAc2AbsTol);
    const double err = std::abs(fd - est[k].estimate);
    o.pass = o.pass && err <= tol;
    d += "x=" + g(probes[k]) + ": fd " + fmt("%.5f", fd) + " mc " + fmt("%.5f", est[k].estimate) +
         "+-" + fmt("%.4f", est[k].std_error) + " |d|=" + fmt("%.4f", err) + "<=" + fmt("%.4f", tol) + "; ";
  }
  const double quad = quadrature_v1_origin(r, p);
  const double qerr = std::abs(quad - V1.values[node_at(grid, 0.0)]);
  const double secs = seconds_since(t0);
  o.pass = o.pass && qerr <= kAc2QuadTol && secs < kAc2Seconds;
  o.detail = d + "quadrature(0)=" + fmt("%.6f", quad) + " |fd-quad|=" + g(qerr) + " (tol " +
             g(kAc2QuadTol) + "), " + fmt("%.1f", secs) + "s";
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const LQProblem p = scalar_problem(0.5, 1.0, 0.0, 1.0, 1.0, 0.1, 0.2);
  const RiccatiSolution r = solve_robust_are(p);
  const double a = r.A_eff(0, 0);
  McConfig cfg;
  cfg.n_paths = 1;
  double worst = 0.0;
  for (double x : {1.0, 2.0, 5.0}) {
    const McEstimate e = feynman_kac_v1_exact_ou(x, r, p, cfg);
    worst = std::max(worst, std::abs(e.estimate - std::abs(a * x) / (p.rho - a)));
  }
  const double secs = seconds_since(t0);
  o.pass = worst <= kAc3Tol && secs < kAc3Seconds;
  o.detail = "max |mc - |a x|/(rho - a)| over x in {1,2,5} = " + g(worst) + " (tol " + g(kAc3Tol) +
             "), " + fmt("%.3f", secs) + "s";
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U;
  double worst_rel = 0.0, worst_kkt = 0.0, worst_dom = 0.0;
  int failures = 0;
  for (int k = 0; k < kAc4Instances; ++k) {
    const int n = 1 + k % 3;
    const Vector f = Vector::NullaryExpr(n, [&] { return N(gen); });
    const Vector pv = Vector::NullaryExpr(n, [&] { return N(gen); });
    const Matrix sigma = Matrix::NullaryExpr(n, n, [&] { return N(gen); });
    const double eta = 0.5 * U(gen);
    const double eps = U(gen);
    const auto geom = UncertaintyGeometry::ball2(eps);
    const SupResult r = exact_sup_delta(f, sigma, pv, eta, geom);
    const double brute = oracle::brute_sup_ball2(f, sigma, pv, eta, eps);
    const double rel = std::abs(r.value - brute) / std::max(std::abs(brute), 1.0);

    const Matrix S = sigma * sigma.transpose();
    const Vector v = f + eta * S * pv;
    const Matrix I = Matrix::Identity(n, n);
    const double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(S).eigenvalues().maxCoeff();
    double kkt = ((r.multiplier * I - eta * S) * r.delta_star - v).norm();
    kkt = std::max(kkt, std::max(0.0, r.delta_star.norm() - eps));
    kkt = std::max(kkt, std::abs(r.multiplier * (r.delta_star.norm() - eps)));
    kkt = std::max(kkt, std::max(0.0, eta * lmax - r.multiplier));
    const double dom = first_order_G(f, sigma, pv, eta, geom) - r.value;

    worst_rel = std::max(worst_rel, rel);
    worst_kkt = std::max(worst_kkt, kkt);
    worst_dom = std::max(worst_dom, dom);
    if (rel > kAc4RelTol || kkt > kAc4Kkt || dom > 0.0) ++failures;
  }
  const double secs = seconds_since(t0);
  o.pass = failures == 0 && secs < kAc4Seconds;
  o.detail = std::to_string(kAc4Instances) + " instances: max rel gap to brute force " + g(worst_rel) +
             " (tol " + g(kAc4RelTol) + ", denominator max(|brute|,1)), max KKT residual " +
             g(worst_kkt) + " (tol " + g(kAc4Kkt) + "), max(first order - exact) " + g(worst_dom) +
             " (must be <= 0), " + fmt("%.1f", secs) + "s";
  return o;
}

Outcome ac5() {
  Outcome o;
  const Vector v = (Vector(2) << 3.0, 4.0).finished();
  const double eps = 1.0;
  double worst = 0.0;
  worst = std::max(worst, std::abs(dual_norm_correction(v, UncertaintyGeometry::box(eps)) - 7.0));
  worst = std::max(worst, std::abs(dual_norm_correction(v, UncertaintyGeometry::ellipsoid(
                                                           eps, 4.0 * Matrix::Identity(2, 2))) - 2.5));
  worst = std::max(worst, std::abs(dual_norm_correction(v, UncertaintyGeometry::ball2(eps)) - 5.0));
  const Vector w = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const Matrix M = Vector((Vector(3) << 1.0, 4.0, 0.25).finished()).asDiagonal();
  worst = std::max(worst, std::abs(dual_norm_correction(w, UncertaintyGeometry::box(0.3)) - 0.3 * 3.5));
  worst = std::max(worst, std::abs(dual_norm_correction(w, UncertaintyGeometry::ellipsoid(0.3, M)) -
                                   0.3 * std::sqrt(1.0 + 1.0 + 1.0)));

  std::mt19937_64 gen(77);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U;
  double worst_box = 0.0;
  for (int k = 0; k < 30; ++k) {
    const int n = 1 + k % 3;
    const Vector f = Vector::NullaryExpr(n, [&] { return N(gen); });
    const Vector pv = Vector::NullaryExpr(n, [&] { return N(gen); });
    const Matrix sigma = Matrix::NullaryExpr(n, n, [&] { return N(gen); });
    const double eta = 0.5 * U(gen), e = U(gen);
    const SupResult r = exact_sup_delta(f, sigma, pv, eta, UncertaintyGeometry::box(e));
    const double brute = oracle::brute_sup_box(f, sigma, pv, eta, e);
    worst_box = std::max(worst_box, std::abs(r.value - brute) / std::max(std::abs(brute), 1.0));
  }
  o.pass = worst <= kAc5Analytic && worst_box <= kAc5Box;
  o.detail = "analytic dual norms max error " + g(worst) + " (tol " + g(kAc5Analytic) +
             "), box vertex enumeration vs lattice max rel error " + g(worst_box) + " (tol " +
             g(kAc5Box) + ")";
  return o;
}

Outcome ac6() {
  Outcome o;
  const LQProblem p = baseline();
  const Grid grid = Grid::uniform_1d(-10.0, 10.0, 2001);
  const RiccatiSolution r = solve_robust_are(p);
  const GridField V1 = solve_v1(r, p, grid);
  const AssembledValue half = assemble_value(r, V1, nullptr, 0.5);
  const double fit0 = quadratic_fit_relative_residual(half.V0, kAc6HalfWidth);
  const double fit1 = quadratic_fit_relative_residual(half.total, kAc6HalfWidth);
  const FullSolution nl = solve_full_1d(p, UncertaintyGeometry::ball2(0.0), grid);
  const double fitnl = quadratic_fit_relative_residual(nl.V, kAc6HalfWidth);
  o.pass = fit1 > kAc6Factor * fit0 && fitnl <= kAc6NonlinearFit;
  o.detail = "fit residual on [-5,5]: V0 " + g(fit0) + ", V0+0.5V1 " + g(fit1) + " (must exceed " +
             g(kAc6Factor) + "x), nonlinear eps=0 " + g(fitnl) + " (tol " + g(kAc6NonlinearFit) + ")";
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const LQProblem p = baseline();
  const Grid grid = Grid::uniform_1d(-10.0, 10.0, 2001);
  const RiccatiSolution r = solve_robust_are(p);
  const GridField V1 = solve_v1(r, p, grid);
  std::vector<double> dev;
  std::string d;
  for (double eps : {0.1, 0.05, 0.025}) {
    const FullSolution s = solve_full_1d(p, UncertaintyGeometry::ball2(eps), grid);
    const AssembledValue V = assemble_value(r, V1, nullptr, eps);
    double m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid.point(i)[0]) > kAc7Window + 1e-12) continue;
      m = std::max(m, std::abs(s.V.values[i] - V.total.values[i]));
    }
    dev.push_back(m);
    d += "eps=" + g(eps) + " dev " + g(m) + " (residual " + g(s.residual) + "); ";
  }
  for (std::size_t k = 0; k + 1 < dev.size(); ++k) {
    const double ratio = dev[k] / dev[k + 1];
    o.pass = o.pass && ratio >= kAc7RatioLo && ratio <= kAc7RatioHi;
    d += "ratio " + fmt("%.4f", ratio) + "; ";
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < kAc7Seconds;
  o.detail = d + "band [" + g(kAc7RatioLo) + "," + g(kAc7RatioHi) + "], " + fmt("%.1f", secs) + "s";
  return o;
}

Outcome ac8() {
  Outcome o;
  const Grid grid = Grid::uniform_1d(-10.0, 10.0, 2001);
  const auto rows = sensitivity_sweep(baseline(), {0.1, 0.2, 0.3}, {0.0, 0.25, 0.5}, grid);
  const double u1 = rows[0].u1_sup, u2 = rows[3].u1_sup, u3 = rows[6].u1_sup;
  const bool eta_ok = u1 < u2 && u2 < u3;

  const LQProblem p = baseline();
  const RiccatiSolution r = solve_robust_are(p);
  const GridField V1 = solve_v1(r, p, grid);
  const AssembledValue a = assemble_value(r, V1, nullptr, 0.0);
  const AssembledValue b = assemble_value(r, V1, nullptr, 0.25);
  const AssembledValue c = assemble_value(r, V1, nullptr, 0.5);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.point(i)[0]) > kAc8Window + 1e-12) continue;
    if (!(a.total.values[i] <= b.total.values[i] && b.total.values[i] <= c.total.values[i])) ++violations;
  }
  o.pass = eta_ok && violations == 0;
  o.detail = "|u1|_inf at eta 0.1/0.2/0.3: " + g(u1) + " / " + g(u2) + " / " + g(u3) +
             "; nodes on [-3,3] violating V(eps) monotonicity: " + std::to_string(violations);
  return o;
}

Outcome ac9() {
  Outcome o;
  const LQProblem p = baseline();
  const Grid grid = Grid::uniform_1d(-10.0, 10.0, 2001);
  const RiccatiSolution r = solve_robust_are(p);
  const GridField V1 = solve_v1(r, p, grid);
  const GridField u1 = compute_u1(V1, p, r, U1Convention::AppendixE);
  const H2Result h2 = compute_h2(V1, u1, p, r);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(r.A_eff(0, 0) * grid.point(i)[0]) < kAc9Cutoff) continue;
    worst = std::max(worst, std::abs(h2.simplified.values[i] - h2.unsimplified.values[i]));
  }
  const GridField V2 = solve_v2(h2.simplified, p, r, grid);
  GridField scaled = h2.simplified;
  for (double& v : scaled.values) v *= 2.0;
  const GridField V2s = solve_v2(scaled, p, r, grid);
  double lin = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) lin = std::max(lin, std::abs(V2s.values[i] - 2.0 * V2.values[i]));
  const double lin_rel = lin / std::max(1.0, V2.max_abs());
  o.pass = worst <= kAc9Identity && lin_rel <= kAc9Linearity;
  o.detail = "max |H2 simplified - unsimplified| " + g(worst) + " (tol " + g(kAc9Identity) +
             "), max |V2(2H2) - 2V2(H2)| / max(1,|V2|) " + g(lin_rel) + " (tol " + g(kAc9Linearity) + ")";
  return o;
}

Outcome ac10() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const LQProblem p = planar();
  const RiccatiSolution r = solve_robust_are(p);
  const bool are_ok = r.residual <= kAc10Residual && is_hurwitz(r.A_cl);

  std::vector<GridField> V;
  double secs201 = 0.0;
  for (std::size_t n : kAc10Grids) {
    const auto t = std::chrono::steady_clock::now();
    V.push_back(solve_v1(r, p, Grid::uniform_2d(-kAc10HalfWidth, kAc10HalfWidth, n)));
    if (n == 201) secs201 = seconds_since(t);
  }
  // Differences between consecutive grids at the coarse nodes inside the window.
  auto diff = [&](const GridField& coarse, const GridField& fine) {
    const std::size_t nc = coarse.grid.axis(0).n_points;
    const std::size_t stride = (fine.grid.axis(0).n_points - 1) / (nc - 1);
    double m = 0.0;
    for (std::size_t i = 0; i < coarse.nodes(); ++i) {
      const auto pt = coarse.grid.point(i);
      if (std::abs(pt[0]) > kAc10Window + 1e-12 || std::abs(pt[1]) > kAc10Window + 1e-12) continue;
      const auto mi = coarse.grid.multi_index(i);
      const std::size_t fi[2] = {mi[0] * stride, mi[1] * stride};
      m = std::max(m, std::abs(coarse.at(i) - fine.at(fine.grid.flat_index(fi))));
    }
    return m;
  };
  const double d1 = diff(V[0], V[1]);
  const double d2 = diff(V[1], V[2]);
  const double order = std::log2(d1 / d2);
  // Richardson estimate of the finest-grid error, relative to the field scale.
  const double fine_err = d2 / (std::pow(2.0, order) - 1.0);
  double vmax = 0.0;
  for (std::size_t i = 0; i < V[2].nodes(); ++i) {
    const auto pt = V[2].grid.point(i);
    if (std::abs(pt[0]) <= kAc10Window + 1e-12 && std::abs(pt[1]) <= kAc10Window + 1e-12) {
      vmax = std::max(vmax, std::abs(V[2].at(i)));
    }
  }
  const double fit = quadratic_fit_relative_residual(V[2], kAc10Window);
  const double secs = seconds_since(t0);
  o.pass = are_ok && order >= kAc10OrderLo && order <= kAc10OrderHi && fit > fine_err / vmax &&
           secs201 < kAc10Seconds;
  o.detail = "P0 residual " + g(r.residual) + " (tol " + g(kAc10Residual) + "), A_cl Hurwitz " +
             (is_hurwitz(r.A_cl) ? "yes" : "no") + "; grids 101/201/401 on [-5,5]^2, window [-2.5,2.5]^2: " +
             "d1 " + g(d1) + " d2 " + g(d2) + " order " + fmt("%.4f", order) + " (band [" +
             g(kAc10OrderLo) + "," + g(kAc10OrderHi) + "]); quadratic-fit residual " + g(fit) +
             " vs finest relative error " + g(fine_err / vmax) + "; 201x201 solve " +
             fmt("%.2f", secs201) + "s, total " + fmt("%.1f", secs) + "s";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC-1 robust ARE (scalar baseline)", ac1},
      {"AC-2 V1 finite differences vs Monte Carlo and quadrature", ac2},
      {"AC-3 noiseless path oracle closed form", ac3},
      {"AC-4 exact inner sup vs brute force", ac4},
      {"AC-5 geometry dual norms", ac5},
      {"AC-6 quadratic ansatz failure", ac6},
      {"AC-7 perturbation consistency of the nonlinear solve", ac7},
      {"AC-8 sensitivity monotonicities", ac8},
      {"AC-9 second-order source algebra and V2 linearity", ac9},
      {"AC-10 planar study", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %s | %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
