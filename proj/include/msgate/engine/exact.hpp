// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include "msgate/engine/evolve.hpp"

namespace msgate {

/// Reference propagator for problems whose Hamiltonian coefficients are
/// constant on each interval between breakpoints: exponentiates the
/// column-stacking vectorised generator
///   S = -i (I (x) H - H^T (x) I)
///       + sum_m r_m (conj(L) (x) L - 1/2 I (x) L^dag L - 1/2 (L^dag L)^T (x) I)
/// interval by interval. Dimension is capped at 64 (superoperator 4096^2).
/// Test-side oracle; shares nothing with the adaptive integrator path.
inline Trajectory evolve_exact_oracle(const EvolutionProblem& problem,
                                      std::vector<double> breakpoints = {}) {
  problem.validate();
  const long d = problem.initial.dim();
  if (d > 64) throw std::invalid_argument("evolve_exact_oracle: dimension > 64");

  // Interval edges: breakpoints plus every output time, deduplicated.
  std::vector<double> edges = std::move(breakpoints);
  for (double t : problem.output_grid) edges.push_back(t);
  edges.push_back(problem.t_final);
  edges.push_back(0.0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-18; }),
              edges.end());

  const Mat id = Mat::Identity(d, d);
  Mat diss = Mat::Zero(d * d, d * d);
  for (const auto& [L, rate] : problem.collapse) {
    Mat Ld(L.adjoint());
    Mat Lm(L);
    Mat LdL = Ld * Lm;
    diss += rate * (kron(Lm.conjugate(), Lm) - 0.5 * kron(id, LdL) -
                    0.5 * kron(LdL.transpose(), id));
  }

  Vec v = Eigen::Map<const Vec>(problem.initial.mat.data(), d * d);

  Trajectory traj;
  std::vector<double> grid = problem.output_grid;
  if (grid.empty()) grid.push_back(problem.t_final);
  std::size_t next_out = 0;

  auto store = [&](double t) {
    Mat state = Eigen::Map<const Mat>(v.data(), d, d);
    StateDiagnostics diag;
    diag.trace_deviation = std::abs(state.trace() - cplx{1.0, 0.0});
    diag.hermiticity_deviation = max_abs(Mat(state - state.adjoint()));
    DensityMatrix dm(problem.initial.layout, std::move(state));
    diag.min_eigenvalue = dm.min_eigenvalue();
    traj.times.push_back(t);
    traj.states.push_back(std::move(dm));
    traj.diagnostics.push_back(diag);
  };

  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double ta = edges[i], tb = edges[i + 1];
    while (next_out < grid.size() && std::abs(grid[next_out] - ta) < 1e-18) {
      store(grid[next_out]);
      ++next_out;
    }
    if (tb <= ta) continue;
    const double tm = 0.5 * (ta + tb);
    Mat h = problem.hamiltonian.at(tm).mat;
    Mat gen = -kI * (kron(id, h) - kron(h.transpose(), id)) + diss;
    Mat prop = (gen * (tb - ta)).exp();
    v = prop * v;
  }
  while (next_out < grid.size()) {
    store(grid[next_out]);
    ++next_out;
  }
  return traj;
}

}  // namespace msgate
