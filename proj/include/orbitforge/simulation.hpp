// Copyright 2026 The Orbitforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbitforge/automorphism.hpp"
#include "orbitforge/errors.hpp"
#include "orbitforge/graph.hpp"
#include "orbitforge/partition.hpp"

namespace orbitforge {

/// Couplings with |a1 + a2| at or below this are treated as degenerate:
/// the edge nonlinearity vanishes at zero flow and the network consents
/// to consensus instead of clustering.
constexpr double kCouplingEpsilon = 1e-6;

/// Shared constants of the homogeneous network: every agent integrates
/// xdot = -x + u + alpha, every edge applies mu(z) = a1 + a2 (z + cos z).
struct NetworkParams {
  double alpha = 0.0;
  double a1 = 0.0;
  double a2 = 1.0;

  /// True when the edge map is nonzero at zero flow, the regime in which
  /// distinct orbits settle on distinct values.
  bool coupling_nondegenerate(double eps = kCouplingEpsilon) const {
    return std::abs(a1 + a2) > eps;
  }
};

inline void validate(const NetworkParams& p) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.a1) || !std::isfinite(p.a2))
    throw ValidationError("network parameters must be finite");
  if (p.a2 <= 0.0)
    throw ValidationError("controller gain a2 must be positive");
}

struct SimulationConfig {
  double t_max = 50.0;
  double dt = 1e-3;
  double steady_tol = 1e-8;
  double cluster_tol = 1e-3;
  std::uint64_t seed = 0;
  /// Initial state; drawn uniformly from [-5, 5]^n off the seed when absent.
  std::optional<std::vector<double>> x0;
  /// Trajectory rows are recorded every this many integration steps.
  int sample_stride = 100;
  /// Opt-in for runs with a1 + a2 = 0; rejected otherwise.
  bool allow_consensus_regime = false;
};

inline void validate(const SimulationConfig& cfg, int vertex_count) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw ValidationError("dt must be positive");
  if (!(cfg.t_max >= cfg.dt) || !std::isfinite(cfg.t_max))
    throw ValidationError("t_max must be at least dt");
  if (!(cfg.steady_tol > 0.0) || !(cfg.cluster_tol > 0.0))
    throw ValidationError("tolerances must be positive");
  if (cfg.sample_stride < 1)
    throw ValidationError("sample stride must be at least 1");
  if (cfg.x0 && static_cast<int>(cfg.x0->size()) != vertex_count)
    throw ValidationError("x0 length must equal vertex count");
}

struct SimulationResult {
  std::vector<double> times;
  std::vector<std::vector<double>> trajectory;
  /// Final integrated state; a steady state only when converged is true.
  std::vector<double> steady_state;
  OrbitPartition detected_partition;
  bool converged = false;
  double final_time = 0.0;
  /// Max |xdot| at the final state.
  double final_residual = std::numeric_limits<double>::infinity();
};

/// Edge nonlinearity mu(z) = a1 + a2 (z + cos z), nondecreasing for a2 > 0.
inline double controller_map(double zeta, const NetworkParams& p) {
  return p.a1 + p.a2 * (zeta + std::cos(zeta));
}

namespace detail {

/// xdot = -x - E mu(E^T x) + alpha 1, accumulated edgewise without forming
/// the incidence matrix.
inline void vector_field_into(const std::vector<double>& x,
                              const DirectedGraph& g, const NetworkParams& p,
                              std::vector<double>& out) {
  const std::size_t n = x.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p.alpha - x[i];
  for (const Edge& e : g.edges()) {
    const double zeta = x[static_cast<std::size_t>(e.head)] -
                        x[static_cast<std::size_t>(e.tail)];
    const double mu = controller_map(zeta, p);
    out[static_cast<std::size_t>(e.head)] -= mu;
    out[static_cast<std::size_t>(e.tail)] += mu;
  }
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Decorrelated engine seeds for the independent random streams hanging
/// off one user seed (stream 0: parameters, stream 1: initial state).
inline std::uint64_t stream_seed(std::uint64_t seed, int stream) {
  std::uint64_t state = seed;
  std::uint64_t out = 0;
  for (int i = 0; i <= stream; ++i) out = splitmix64(state);
  return out;
}

/// Uniform in [0, 1) from the top 53 bits; fixed mapping so that outputs
/// are identical across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform_in(rng, std::log(lo), std::log(hi)));
}

/// Box-Muller with the u1 endpoint shifted into (0, 1].
inline double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit_uniform(rng);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

}  // namespace detail

inline std::vector<double> vector_field(const std::vector<double>& x,
                                        const DirectedGraph& g,
                                        const NetworkParams& p) {
  if (static_cast<int>(x.size()) != g.vertex_count())
    throw ValidationError("state length must equal vertex count");
  std::vector<double> out;
  detail::vector_field_into(x, g, p, out);
  return out;
}

/// Groups agents whose sorted steady-state values sit within cluster_tol
/// of their neighbors; a gap larger than cluster_tol starts a new cluster.
inline OrbitPartition detect_clusters(const std::vector<double>& y,
                                      double cluster_tol) {
  if (!(cluster_tol > 0.0))
    throw ValidationError("cluster tolerance must be positive");
  for (double v : y)
    if (!std::isfinite(v))
      throw ValidationError("cluster detection requires finite values");
  const int n = static_cast<int>(y.size());
  std::vector<int> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return y[static_cast<std::size_t>(a)] < y[static_cast<std::size_t>(b)];
  });
  std::vector<std::vector<int>> classes;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || y[static_cast<std::size_t>(order[i])] -
                          y[static_cast<std::size_t>(order[i - 1])] >
                      cluster_tol)
      classes.emplace_back();
    classes.back().push_back(order[static_cast<std::size_t>(i)]);
  }
  return OrbitPartition::from_classes(n, std::move(classes));
}

/// True iff permuting y by psi moves no entry by more than tol.
inline bool check_invariance(const std::vector<double>& y,
                             const Permutation& psi, double tol) {
  if (psi.size() != static_cast<int>(y.size()))
    throw ValidationError("permutation length must equal state length");
  for (int i = 0; i < psi.size(); ++i)
    if (std::abs(y[static_cast<std::size_t>(psi(i))] -
                 y[static_cast<std::size_t>(i)]) > tol)
      return false;
  return true;
}

/// Classic fixed-step fourth-order Runge-Kutta integration of the coupled
/// network, stopping early once max |xdot| drops under steady_tol. The
/// trajectory carries the initial state, every sample_stride-th step, and
/// the final state.
inline SimulationResult simulate(const DirectedGraph& g, const NetworkParams& p,
                                 const SimulationConfig& cfg) {
  validate(p);
  validate(cfg, g.vertex_count());
  if (!cfg.allow_consensus_regime && !p.coupling_nondegenerate())
    throw ValidationError(
        "coupling degenerate (a1 + a2 within epsilon of 0); set "
        "allow_consensus_regime to simulate it");

  const std::size_t n = static_cast<std::size_t>(g.vertex_count());
  std::vector<double> x;
  if (cfg.x0) {
    x = *cfg.x0;
  } else {
    std::mt19937_64 rng(detail::stream_seed(cfg.seed, 1));
    x.resize(n);
    for (double& v : x) v = detail::uniform_in(rng, -5.0, 5.0);
  }

  SimulationResult result;
  const long long steps = std::llround(std::ceil(cfg.t_max / cfg.dt - 1e-12));
  std::vector<double> k1, k2, k3, k4, probe(n);

  const auto record = [&](double t) {
    if (!result.times.empty() && result.times.back() == t) return;
    result.times.push_back(t);
    result.trajectory.push_back(x);
  };

  double t = 0.0;
  for (long long s = 0; s < steps; ++s) {
    t = static_cast<double>(s) * cfg.dt;
    detail::vector_field_into(x, g, p, k1);
    double residual = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(k1[i])) finite = false;
      residual = std::max(residual, std::abs(k1[i]));
    }
    if (!finite)
      throw IntegrationError("state left the finite range", t);
    if (s % cfg.sample_stride == 0) record(t);
    if (residual < cfg.steady_tol) {
      result.converged = true;
      result.final_residual = residual;
      break;
    }
    const double h = cfg.dt;
    for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + 0.5 * h * k1[i];
    detail::vector_field_into(probe, g, p, k2);
    for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + 0.5 * h * k2[i];
    detail::vector_field_into(probe, g, p, k3);
    for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] + h * k3[i];
    detail::vector_field_into(probe, g, p, k4);
    for (std::size_t i = 0; i < n; ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t = static_cast<double>(s + 1) * cfg.dt;
  }

  if (!result.converged) {
    detail::vector_field_into(x, g, p, k1);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(k1[i]))
        throw IntegrationError("state left the finite range", t);
      residual = std::max(residual, std::abs(k1[i]));
    }
    result.final_residual = residual;
    result.converged = residual < cfg.steady_tol;
  }

  record(t);
  result.final_time = t;
  result.steady_state = x;
  result.detected_partition = detect_clusters(x, cfg.cluster_tol);
  return result;
}

constexpr double kSteadyStateResidualTol = 1e-10;
constexpr int kMaxNewtonIterations = 100;
constexpr int kMaxNewtonHalvings = 30;

/// Newton iteration on F(y) = -y - E mu(E^T y) + alpha 1. The Jacobian is
/// -(I + E diag(a2 (1 - sin zeta)) E^T); the bracketed matrix is positive
/// definite for a2 > 0, so each step solves an SPD system by Cholesky.
/// Steps that increase the residual are halved a bounded number of times.
inline std::vector<double> steady_state_solve(const DirectedGraph& g,
                                              const NetworkParams& p,
                                              const std::vector<double>& y_init) {
  validate(p);
  const int n = g.vertex_count();
  if (static_cast<int>(y_init.size()) != n)
    throw ValidationError("initial guess length must equal vertex count");
  const int m = g.edge_count();

  Eigen::MatrixXd incidence = Eigen::MatrixXd::Zero(n, m);
  for (int c = 0; c < m; ++c) {
    const Edge& e = g.edges()[static_cast<std::size_t>(c)];
    incidence(e.head, c) = 1.0;
    incidence(e.tail, c) = -1.0;
  }

  Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(y_init.data(), y_init.size());
  const Eigen::VectorXd offset = Eigen::VectorXd::Constant(n, p.alpha);

  const auto residual_of = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd zeta = incidence.transpose() * v;
    Eigen::VectorXd mu = zeta.unaryExpr(
        [&](double z) { return controller_map(z, p); });
    return -v - incidence * mu + offset;
  };

  Eigen::VectorXd residual = residual_of(y);
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    const double norm = residual.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(norm)) throw SolverError("residual left the finite range");
    if (norm < kSteadyStateResidualTol)
      return std::vector<double>(y.data(), y.data() + n);

    Eigen::VectorXd zeta = incidence.transpose() * y;
    Eigen::VectorXd slopes = zeta.unaryExpr(
        [&](double z) { return p.a2 * (1.0 - std::sin(z)); });
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) +
                             incidence * slopes.asDiagonal() *
                                 incidence.transpose();
    Eigen::VectorXd delta = system.llt().solve(residual);

    Eigen::VectorXd candidate = y + delta;
    Eigen::VectorXd next = residual_of(candidate);
    int halvings = 0;
    while (next.lpNorm<Eigen::Infinity>() > norm &&
           halvings < kMaxNewtonHalvings) {
      delta *= 0.5;
      candidate = y + delta;
      next = residual_of(candidate);
      ++halvings;
    }
    y = candidate;
    residual = next;
  }
  throw SolverError("steady-state solve did not converge");
}

/// Convenience overload with the damped-Newton default guess alpha 1.
inline std::vector<double> steady_state_solve(const DirectedGraph& g,
                                              const NetworkParams& p) {
  return steady_state_solve(
      g, p,
      std::vector<double>(static_cast<std::size_t>(g.vertex_count()), p.alpha));
}

/// Parameter triple drawn per the reference distributions: alpha
/// log-uniform on [0.1, 1], a1 normal with standard deviation 10, a2
/// log-uniform on [0.1, 10]; degenerate couplings are resampled.
inline NetworkParams sample_params(std::uint64_t seed) {
  std::mt19937_64 rng(detail::stream_seed(seed, 0));
  NetworkParams p;
  for (int attempt = 0; attempt < 100; ++attempt) {
    p.alpha = detail::log_uniform(rng, 0.1, 1.0);
    p.a1 = 10.0 * detail::standard_normal(rng);
    p.a2 = detail::log_uniform(rng, 0.1, 10.0);
    if (p.coupling_nondegenerate()) return p;
  }
  return p;
}

}  // namespace orbitforge
