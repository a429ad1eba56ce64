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

#include "guhjbi/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <thread>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/random/normal_distribution.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "guhjbi/perturbation.hpp"

namespace guhjbi {

namespace {

using Engine = std::mt19937_64;
using PathFn = std::function<bool(Engine&, std::span<double>)>;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t path_seed(std::uint64_t seed, std::size_t path) {
  return splitmix64(splitmix64(seed) ^ (0xD1B54A32D192ED03ull * (static_cast<std::uint64_t>(path) + 1)));
}

std::size_t step_count(const McConfig& cfg) {
  return static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));
}

// Runs fn once per path; results are stored at [path * width, (path+1) * width).
std::vector<double> run_paths(const McConfig& cfg, std::size_t width, unsigned threads,
                              const PathFn& fn) {
  std::vector<double> out(cfg.n_paths * width, 0.0);
  std::atomic<bool> failed{false};
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t path = begin; path < end && !failed.load(std::memory_order_relaxed); ++path) {
      Engine gen(path_seed(cfg.seed, path));
      if (!fn(gen, std::span<double>(out.data() + path * width, width))) failed = true;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.n_paths)));
  if (threads == 1) {
    worker(0, cfg.n_paths);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = cfg.n_paths * t / threads;
      const std::size_t end = cfg.n_paths * (t + 1) / threads;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  if (failed) throw Error(ErrorCode::NonFinitePath, "simulated path blew up");
  return out;
}

McEstimate summarize(const std::vector<double>& samples, std::size_t width, std::size_t column,
                     const McConfig& cfg) {
  const std::size_t N = cfg.n_paths;
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) sum += samples[i * width + column];
  const double mean = sum / static_cast<double>(N);
  double ss = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double d = samples[i * width + column] - mean;
    ss += d * d;
  }
  McEstimate est;
  est.estimate = mean;
  est.std_error = N > 1 ? std::sqrt(ss / static_cast<double>(N - 1) / static_cast<double>(N)) : 0.0;
  est.n_paths = N;
  est.dt = cfg.dt;
  est.seed = cfg.seed;
  return est;
}

void require_hurwitz(const RiccatiSolution& riccati) {
  if (!is_hurwitz(riccati.A_eff)) throw Error(ErrorCode::NotHurwitz, "A_eff is not Hurwitz");
}

unsigned resolve_threads(const McOptions& opts) {
  return opts.threads == 0 ? configured_threads() : opts.threads;
}

// Scalar noise amplitude for n == 1: sqrt((Sigma Sigma')_00).
double scalar_sigma(const LQProblem& problem) { return std::sqrt(problem.diffusion()(0, 0)); }

}  // namespace

void McConfig::validate() const {
  if (n_paths < 1) throw Error(ErrorCode::InvalidArgument, "n_paths must be positive");
  if (!(dt > 0.0) || !(horizon > 0.0) || !std::isfinite(dt) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::InvalidArgument, "dt and horizon must be positive");
  }
  if (dt > horizon / 100.0) throw Error(ErrorCode::InvalidArgument, "dt must be <= horizon / 100");
}

double truncation_bound(const Vector& x, const RiccatiSolution& riccati, const LQProblem& problem,
                        double horizon, double source_scale) {
  const Matrix& A = riccati.A_eff;
  const Eigen::Index n = A.rows();
  // Stationary covariance: A C + C A' + S = 0.
  const Matrix I = Matrix::Identity(n, n);
  const Matrix K = Eigen::kroneckerProduct(I, A) + Eigen::kroneckerProduct(A, I);
  const Matrix S = problem.diffusion();
  const Vector c = K.fullPivLu().solve(-Eigen::Map<const Vector>(S.data(), S.size()));
  const double trace_c = std::max(0.0, Eigen::Map<const Matrix>(c.data(), n, n).trace());

  // sup_t |e^{A t}| sampled until the slowest mode has decayed.
  const double alpha = std::abs(spectral_abscissa(A));
  double kappa = 1.0;
  const double t_max = 40.0 / std::max(alpha, 1e-12);
  for (int i = 1; i <= 400; ++i) {
    const Matrix E = (A * (t_max * i / 400.0)).exp();
    kappa = std::max(kappa, E.jacobiSvd().singularValues()(0));
  }
  const double a_norm = A.jacobiSvd().singularValues()(0);
  return std::abs(source_scale) * std::exp(-problem.rho * horizon) / problem.rho * a_norm *
         (kappa * x.norm() + std::sqrt(trace_c));
}

std::vector<McEstimate> feynman_kac_v1_batch(const std::vector<Vector>& xs,
                                             const RiccatiSolution& riccati,
                                             const LQProblem& problem, const McConfig& cfg,
                                             const McOptions& options) {
  cfg.validate();
  require_hurwitz(riccati);
  const Eigen::Index n = riccati.A_eff.rows();
  for (const Vector& x : xs) {
    if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "start point has wrong dimension");
  }
  const std::size_t K = xs.size();
  if (K == 0) return {};
  const std::size_t steps = step_count(cfg);
  const double dt = cfg.dt;
  const double decay = std::exp(-problem.rho * dt);
  const double scale = options.source_scale;

  PathFn fn;
  if (n == 1) {
    const double a = riccati.A_eff(0, 0);
    const double s = scalar_sigma(problem) * std::sqrt(dt);
    fn = [&, a, s](Engine& gen, std::span<double> out) {
      boost::random::normal_distribution<double> normal;
      std::vector<double> z(K), g(K), acc(K, 0.0);
      for (std::size_t j = 0; j < K; ++j) {
        z[j] = xs[j](0);
        g[j] = scale * std::abs(a * z[j]);
      }
      double disc = 1.0;
      for (std::size_t k = 0; k < steps; ++k) {
        const double xi = s == 0.0 ? 0.0 : normal(gen);
        disc *= decay;
        for (std::size_t j = 0; j < K; ++j) {
          z[j] += a * z[j] * dt + s * xi;
          const double gn = disc * scale * std::abs(a * z[j]);
          acc[j] += 0.5 * dt * (g[j] + gn);
          g[j] = gn;
        }
      }
      for (std::size_t j = 0; j < K; ++j) {
        if (!std::isfinite(acc[j])) return false;
        out[j] = acc[j];
      }
      return true;
    };
  } else {
    const Matrix A = riccati.A_eff;
    const Matrix Sig = problem.Sigma * std::sqrt(dt);
    const bool noisy = !Sig.isZero(0.0);
    fn = [&, A, Sig, noisy](Engine& gen, std::span<double> out) {
      boost::random::normal_distribution<double> normal;
      Matrix Z(n, static_cast<Eigen::Index>(K));
      for (std::size_t j = 0; j < K; ++j) Z.col(static_cast<Eigen::Index>(j)) = xs[j];
      Matrix drift(n, static_cast<Eigen::Index>(K));
      Vector xi(Sig.cols());
      Vector noise(n);
      drift.noalias() = A * Z;
      Vector g = scale * drift.colwise().norm().transpose();
      Vector acc = Vector::Zero(static_cast<Eigen::Index>(K));
      double disc = 1.0;
      for (std::size_t k = 0; k < steps; ++k) {
        if (noisy) {
          for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = normal(gen);
          noise.noalias() = Sig * xi;
        } else {
          noise.setZero();
        }
        disc *= decay;
        Z += dt * drift;
        Z.colwise() += noise;
        drift.noalias() = A * Z;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(K); ++j) {
          const double gn = disc * scale * drift.col(j).norm();
          acc(j) += 0.5 * dt * (g(j) + gn);
          g(j) = gn;
        }
      }
      for (std::size_t j = 0; j < K; ++j) {
        const double v = acc(static_cast<Eigen::Index>(j));
        if (!std::isfinite(v)) return false;
        out[j] = v;
      }
      return true;
    };
  }

  const std::vector<double> samples = run_paths(cfg, K, resolve_threads(options), fn);
  std::vector<McEstimate> out;
  out.reserve(K);
  for (std::size_t j = 0; j < K; ++j) {
    McEstimate est = summarize(samples, K, j, cfg);
    est.x = xs[j];
    est.truncation_bound = truncation_bound(xs[j], riccati, problem, cfg.horizon, scale);
    out.push_back(std::move(est));
  }
  return out;
}

McEstimate feynman_kac_v1(const Vector& x, const RiccatiSolution& riccati,
                          const LQProblem& problem, const McConfig& cfg,
                          const McOptions& options) {
  return feynman_kac_v1_batch({x}, riccati, problem, cfg, options).front();
}

McEstimate feynman_kac_v1_exact_ou(double x, const RiccatiSolution& riccati,
                                   const LQProblem& problem, const McConfig& cfg,
                                   const McOptions& options) {
  cfg.validate();
  require_hurwitz(riccati);
  if (riccati.A_eff.rows() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "exact OU sampler is one-dimensional");
  }
  const double a = riccati.A_eff(0, 0);
  const double dt = cfg.dt;
  const std::size_t steps = step_count(cfg);
  const double growth = std::exp(a * dt);
  const double sd = scalar_sigma(problem) * std::sqrt(std::expm1(2.0 * a * dt) / (2.0 * a));
  const double decay = std::exp(-problem.rho * dt);
  const double scale = options.source_scale;

  PathFn fn = [&](Engine& gen, std::span<double> out) {
    boost::random::normal_distribution<double> normal;
    double z = x;
    double g = scale * std::abs(a * z);
    double acc = 0.0;
    double disc = 1.0;
    for (std::size_t k = 0; k < steps; ++k) {
      const double xi = sd == 0.0 ? 0.0 : normal(gen);
      z = growth * z + sd * xi;
      disc *= decay;
      const double gn = disc * scale * std::abs(a * z);
      acc += 0.5 * dt * (g + gn);
      g = gn;
    }
    if (!std::isfinite(acc)) return false;
    out[0] = acc;
    return true;
  };
  const std::vector<double> samples = run_paths(cfg, 1, resolve_threads(options), fn);
  McEstimate est = summarize(samples, 1, 0, cfg);
  est.x = Vector::Constant(1, x);
  est.truncation_bound = truncation_bound(est.x, riccati, problem, cfg.horizon, scale);
  return est;
}

double quadrature_v1_1d(double x, const RiccatiSolution& riccati, const LQProblem& problem) {
  if (riccati.A_eff.rows() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "quadrature oracle requires n = 1");
  }
  require_hurwitz(riccati);
  const double a = riccati.A_eff(0, 0);
  const double s2 = problem.diffusion()(0, 0);
  const double rho = problem.rho;
  auto integrand = [=](double t) {
    const double m = std::exp(a * t) * x;
    const double var = s2 * (-std::expm1(2.0 * a * t)) / (-2.0 * a);
    double mean_abs;
    if (var <= 0.0) {
      mean_abs = std::abs(m);
    } else {
      const double sd = std::sqrt(var);
      mean_abs = sd * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * m * m / var) +
                 m * std::erf(m / (sd * std::numbers::sqrt2));
    }
    return std::abs(a) * std::exp(-rho * t) * mean_abs;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  const double value = integrator.integrate(integrand, 1e-12, &error);
  if (!(error <= 1e-9 * std::max(1.0, std::abs(value)))) {
    throw Error(ErrorCode::NoConvergence, "quadrature error estimate above tolerance");
  }
  return value;
}

double quadrature_v1_origin(const RiccatiSolution& riccati, const LQProblem& problem) {
  return quadrature_v1_1d(0.0, riccati, problem);
}

}  // namespace guhjbi
