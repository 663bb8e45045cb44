// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "msgate/core/states.hpp"
#include "msgate/engine/rk45.hpp"
#include "msgate/gate/hamiltonian.hpp"
#include "msgate/noise/scenario.hpp"

namespace msgate {

/// D[L]rho = L rho L^dag - 1/2 {L^dag L, rho}, evaluated densely.
inline Mat dissipator_apply(const Mat& L, const DensityMatrix& rho) {
  if (L.rows() != rho.dim())
    throw std::invalid_argument("dissipator_apply: dimension mismatch");
  Mat LdL = L.adjoint() * L;
  return L * rho.mat * L.adjoint() - 0.5 * (LdL * rho.mat + rho.mat * LdL);
}

/// Collapse operators for a scenario: heating acts on the gate mode with
/// equal raising and lowering rates (thermalisation towards n >> 1), qubit
/// dephasing puts sz on each qubit at half the decoherence rate.
///
/// With L_h = gamma_h (D[a] + D[a^dag]) the mean occupation grows as
/// d<n>/dt = gamma_h exactly, so gamma_h is the measured quanta/s directly;
/// the moment-equation test pins this convention.
inline std::vector<std::pair<SpMat, double>> build_dissipators(const NoiseScenario& sc,
                                                               const HilbertLayout& layout) {
  std::vector<std::pair<SpMat, double>> out;
  if (sc.heating_rate > 0.0) {
    const int mode = detail::gate_mode_factor(layout);
    SpMat a = embed_sparse(fock_ladder(layout.factor_dim(mode)), mode, layout);
    out.emplace_back(a, sc.heating_rate);
    out.emplace_back(SpMat(a.adjoint()), sc.heating_rate);
  }
  if (const double gd = sc.dephasing_rate(); gd > 0.0) {
    auto q = qubit_ops();
    for (int j = 0; j < layout.qubit_count(); ++j)
      out.emplace_back(embed_sparse(q.sz, j, layout), 0.5 * gd);
  }
  return out;
}

struct EvolutionProblem {
  TimeDependentHamiltonian hamiltonian;
  std::vector<std::pair<SpMat, double>> collapse;  // (operator, rate >= 0)
  DensityMatrix initial;
  double t_final = 0.0;
  std::vector<double> output_grid;  // sorted, within [0, t_final]
  Tolerances tol;
  bool eigen_diagnostics = true;  // min-eigenvalue check per stored state

  void validate() const {
    for (const auto& [op, rate] : collapse) {
      if (rate < 0.0) throw std::invalid_argument("EvolutionProblem: negative rate");
      if (op.rows() != initial.dim())
        throw std::invalid_argument("EvolutionProblem: collapse dimension mismatch");
    }
    if (hamiltonian.layout() != initial.layout)
      throw std::invalid_argument("EvolutionProblem: layout mismatch");
    if (t_final < 0.0) throw std::invalid_argument("EvolutionProblem: negative t_final");
    double prev = 0.0;
    for (double t : output_grid) {
      if (t < prev || t > t_final * (1.0 + 1e-12))
        throw std::invalid_argument("EvolutionProblem: output grid not sorted within range");
      prev = t;
    }
  }
};

struct StateDiagnostics {
  double trace_deviation = 0.0;
  double hermiticity_deviation = 0.0;
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<StateDiagnostics> diagnostics;
  long steps = 0;

  const DensityMatrix& final_state() const {
    if (states.empty()) throw std::logic_error("Trajectory: no stored states");
    return states.back();
  }
};

namespace detail {

// Right-hand side of the master equation, written so Hermiticity is exact by
// construction: with A(t) = -iH(t) - G, G = 1/2 sum_m r_m L_m^dag L_m,
//   drho = (A rho) + (A rho)^dag + sum_m r_m L_m rho L_m^dag.
class LindbladRhs {
public:
  LindbladRhs(const TimeDependentHamiltonian& h,
              const std::vector<std::pair<SpMat, double>>& collapse)
      : h_(h) {
    const long d = h.layout().dim();
    if (!collapse.empty()) {
      G_.resize(d, d);
      G_.setZero();
      for (const auto& [L, rate] : collapse) {
        SpMat Ld = L.adjoint();
        G_ += SpMat(0.5 * rate * (Ld * L));
        jumps_.push_back({L, Ld, rate});
      }
      G_.makeCompressed();
      has_g_ = true;
    }
    c_.resize(d, d);
    tmp_.resize(d, d);
  }

  void operator()(double t, const Mat& rho, Mat& out) {
    c_.setZero();
    for (const auto& term : h_.terms()) {
      tmp_.noalias() = term.op * rho;
      c_.noalias() += (-kI * term.coeff(t)) * tmp_;
    }
    if (has_g_) c_.noalias() -= G_ * rho;
    out = c_ + c_.adjoint();
    for (const auto& j : jumps_) {
      tmp_.noalias() = j.L * rho;
      out.noalias() += j.rate * (tmp_ * j.Ldag);
    }
  }

private:
  struct Jump {
    SpMat L, Ldag;
    double rate;
  };
  const TimeDependentHamiltonian& h_;
  SpMat G_;
  bool has_g_ = false;
  std::vector<Jump> jumps_;
  Mat c_, tmp_;
};

}  // namespace detail

/// Default integrator step cap: resolve the fastest coefficient oscillation
/// with ~50 evaluations per cycle.
inline double default_max_step(double fastest_angular_freq) {
  const double f = fastest_angular_freq / kTwoPi;
  return f > 0.0 ? 1.0 / (50.0 * f) : 0.0;
}

/// Propagate the master equation, storing states at output_grid times.
/// Trajectory invariants (trace, Hermiticity, positivity within 1e-8) are
/// enforced on every stored state; violations report as integration failure.
inline Trajectory evolve(const EvolutionProblem& problem) {
  problem.validate();
  detail::LindbladRhs rhs(problem.hamiltonian, problem.collapse);

  Mat y = problem.initial.mat;
  Trajectory traj;
  std::vector<double> grid = problem.output_grid;
  if (grid.empty()) grid.push_back(problem.t_final);

  traj.steps = integrate_rk45(
      rhs, y, 0.0, problem.t_final, problem.tol, grid, [&](double t, const Mat& state) {
        StateDiagnostics d;
        d.trace_deviation = std::abs(state.trace() - cplx{1.0, 0.0});
        d.hermiticity_deviation = max_abs(Mat(state - state.adjoint()));
        DensityMatrix dm(problem.initial.layout, state);
        if (problem.eigen_diagnostics) d.min_eigenvalue = dm.min_eigenvalue();
        if (d.trace_deviation > 1e-8)
          throw IntegrationError("evolve: trace deviation exceeds 1e-8", t);
        if (d.hermiticity_deviation > 1e-8)
          throw IntegrationError("evolve: Hermiticity deviation exceeds 1e-8", t);
        if (problem.eigen_diagnostics && d.min_eigenvalue < -1e-8)
          throw IntegrationError("evolve: negative eigenvalue beyond 1e-8", t);
        traj.times.push_back(t);
        traj.states.push_back(std::move(dm));
        traj.diagnostics.push_back(d);
      });
  return traj;
}

/// Schroedinger propagation of a pure state under the same Hamiltonian term
/// structure; valid only when the problem has no collapse operators.
inline Vec evolve_pure(const TimeDependentHamiltonian& h, Vec psi, double t_final,
                       const Tolerances& tol, long* steps_out = nullptr) {
  const long d = h.layout().dim();
  if (psi.size() != d) throw std::invalid_argument("evolve_pure: dimension mismatch");
  Vec tmp(d);
  auto rhs = [&](double t, const Vec& x, Vec& out) {
    out.setZero();
    for (const auto& term : h.terms()) {
      tmp.noalias() = term.op * x;
      out.noalias() += (-kI * term.coeff(t)) * tmp;
    }
  };
  std::vector<double> grid{t_final};
  long steps = integrate_rk45(rhs, psi, 0.0, t_final, tol, grid, [](double, const Vec&) {});
  if (steps_out) *steps_out = steps;
  return psi;
}

}  // namespace msgate
