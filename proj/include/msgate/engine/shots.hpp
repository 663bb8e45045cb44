// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "msgate/analysis/bell.hpp"
#include "msgate/engine/evolve.hpp"
#include "msgate/noise/scenario.hpp"

namespace msgate {

struct Numerics {
  int fock_cutoff = 25;
  int fock_cutoff_spectator = 25;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 0.0;  // 0: derived from the fastest drive frequency
  long n_shots = 1000;
  std::uint64_t seed = 12345;
  int threads = 0;  // 0: hardware concurrency
  double mixture_weight_cut = 1e-10;  // neglected initial thermal weight
};

inline HilbertLayout scenario_layout(const NoiseScenario& sc, const Numerics& num) {
  if (sc.spectator_enabled)
    return HilbertLayout(2, {num.fock_cutoff, num.fock_cutoff_spectator});
  return HilbertLayout(2, {num.fock_cutoff});
}

/// Effective per-sideband amplitudes for a relative imbalance
/// (O_R - O_B)/O_B = imb, keeping the geometric mean at the calibrated gate
/// Rabi frequency (the gate time is set from the calibrated value, so the
/// mean is what the experiment fixes).
inline void apply_rabi_imbalance(GateParams& p, double imbalance) {
  if (imbalance == 0.0) return;
  const double r = std::sqrt(1.0 + imbalance);
  p.rabi_red = p.omega_gate * r;
  p.rabi_blue = p.omega_gate / r;
}

/// Full Hamiltonian for one shot: shaped bichromatic drive, plus whichever
/// noise terms the scenario switches on.
inline TimeDependentHamiltonian build_shot_hamiltonian(const GateParams& params,
                                                       const NoiseScenario& sc,
                                                       const ShotSample& sample,
                                                       const HilbertLayout& layout) {
  GateParams p = params;
  apply_rabi_imbalance(p, sc.rabi_imbalance);
  PulseEnvelope env(sc.envelope_shape == EnvelopeShape::erf_ramp ? p.ramp_time : 0.0,
                    p.gate_time, sc.envelope_shape);
  PowerTransient transient{sc.transient_amplitude, sc.transient_tau};

  TimeDependentHamiltonian h = build_ms_extended(p, env, layout, transient);
  if (sample.delta_eps_offset != 0.0 || sc.chirp_rate_hz_per_us != 0.0)
    h.append(build_mode_instability(delta_eps_profile(sample, sc), layout));
  if (sample.aczs_offset != 0.0) h.append(build_aczs(sample.aczs_offset, layout));
  if (sc.spectator_enabled) h.append(build_spectator(p, sc.spectator_spacing, layout));
  return h;
}

inline Tolerances scenario_tolerances(const GateParams& params, const NoiseScenario& sc,
                                      const Numerics& num) {
  Tolerances tol;
  tol.rel_tol = num.rel_tol;
  tol.abs_tol = num.abs_tol;
  double fastest = params.detuning;
  if (sc.spectator_enabled) fastest = std::max(fastest, sc.spectator_spacing + params.detuning);
  tol.max_step = num.max_step > 0.0 ? num.max_step : default_max_step(fastest);
  return tol;
}

/// One thermal component of the initial state: |uu> (x) |n_gate> ((x)
/// |n_spec|) with its occupation weight.
struct ThermalComponent {
  long state_index;
  double weight;
};

inline std::vector<ThermalComponent> initial_mixture(const NoiseScenario& sc,
                                                     const Numerics& num,
                                                     const HilbertLayout& layout,
                                                     double* kept_weight = nullptr) {
  const long mode_dim = layout.mode_dim();
  std::vector<ThermalComponent> comps;
  auto w2 = thermal_weights(sc.nbar_gate_mode, num.fock_cutoff);
  if (sc.spectator_enabled) {
    auto w1 = thermal_weights(sc.nbar_spectator, num.fock_cutoff_spectator);
    for (int n2 = 0; n2 < num.fock_cutoff; ++n2)
      for (int n1 = 0; n1 < num.fock_cutoff_spectator; ++n1) {
        const double w = w2[n2] * w1[n1];
        if (w >= num.mixture_weight_cut)
          comps.push_back({static_cast<long>(n2) * num.fock_cutoff_spectator + n1, w});
      }
  } else {
    for (int n2 = 0; n2 < num.fock_cutoff; ++n2)
      if (w2[n2] >= num.mixture_weight_cut) comps.push_back({n2, w2[n2]});
  }
  double total = 0.0;
  for (const auto& c : comps) total += c.weight;
  if (kept_weight) *kept_weight = total;
  // Spin |uu> is index 0, so the full-space index equals the mode index.
  (void)mode_dim;
  return comps;
}

inline DensityMatrix initial_density(const NoiseScenario& sc, const Numerics& num,
                                     const HilbertLayout& layout) {
  HilbertLayout spin_lay(2, {});
  DensityMatrix spin = basis_state(spin_lay, 0);  // |uu><uu|
  DensityMatrix full = tensor(spin, thermal_state(sc.nbar_gate_mode, num.fock_cutoff));
  if (sc.spectator_enabled)
    full = tensor(full, thermal_state(sc.nbar_spectator, num.fock_cutoff_spectator));
  if (full.layout != layout) throw std::logic_error("initial_density: layout mismatch");
  return full;
}

/// Result of one shot; spin state reduced over all motional factors.
struct ShotResult {
  Mat4 spin = Mat4::Zero();
  double fidelity_magnitude = 0.0;
  double motional_ground_return = 0.0;  // <0|rho_mot|0>, meaningful for cold starts
};

namespace detail {

inline Mat4 reduce_spin_pure(const Vec& psi, long mode_dim) {
  Eigen::Map<const Mat> v(psi.data(), mode_dim, 4);
  Mat r = (v.adjoint() * v).transpose();
  return Mat4(r);
}

inline ShotResult solve_shot_pure(const GateParams& params, const NoiseScenario& sc,
                                  const Numerics& num, const HilbertLayout& layout,
                                  const std::vector<ThermalComponent>& comps,
                                  double kept_weight, const ShotSample& sample) {
  TimeDependentHamiltonian h = build_shot_hamiltonian(params, sc, sample, layout);
  Tolerances tol = scenario_tolerances(params, sc, num);
  const long d = layout.dim();
  const long mode_dim = layout.mode_dim();

  ShotResult res;
  double ground = 0.0;
  for (const auto& comp : comps) {
    Vec psi = Vec::Zero(d);
    psi(comp.state_index) = 1.0;  // spin block 0 = |uu>
    psi = evolve_pure(h, std::move(psi), params.gate_time, tol);
    res.spin += comp.weight * reduce_spin_pure(psi, mode_dim);
    for (int s = 0; s < 4; ++s) ground += comp.weight * std::norm(psi(s * mode_dim));
  }
  res.spin /= kept_weight;
  res.motional_ground_return = ground / kept_weight;
  res.fidelity_magnitude = fidelity(res.spin).magnitude_form;
  return res;
}

inline ShotResult solve_shot_density(const GateParams& params, const NoiseScenario& sc,
                                     const Numerics& num, const HilbertLayout& layout,
                                     const ShotSample& sample) {
  EvolutionProblem prob;
  prob.hamiltonian = build_shot_hamiltonian(params, sc, sample, layout);
  prob.collapse = build_dissipators(sc, layout);
  prob.initial = initial_density(sc, num, layout);
  prob.t_final = params.gate_time;
  prob.output_grid = {params.gate_time};
  prob.tol = scenario_tolerances(params, sc, num);
  prob.eigen_diagnostics = layout.dim() <= 512;

  Trajectory traj = evolve(prob);
  const DensityMatrix& fin = traj.final_state();

  ShotResult res;
  DensityMatrix spin = partial_trace(fin, {0, 1});
  res.spin = Mat4(spin.mat);
  std::vector<int> modes;
  for (int m = 0; m < layout.mode_count(); ++m) modes.push_back(layout.qubit_count() + m);
  DensityMatrix mot = partial_trace(fin, modes);
  res.motional_ground_return = mot.mat(0, 0).real();
  res.fidelity_magnitude = fidelity(res.spin).magnitude_form;
  return res;
}

}  // namespace detail

/// Monte Carlo summary over shot-to-shot noise. The headline fidelity is the
/// magnitude-form fidelity of the shot-averaged spin state, which is what a
/// fringe measurement on the ensemble reconstructs; the mean of per-shot
/// fidelities is reported alongside. Deterministic scenarios collapse to a
/// single shot with zero standard error.
struct RunResult {
  Mat4 mean_spin = Mat4::Zero();
  double fidelity = 0.0;            // magnitude form on the mean state
  double fidelity_phase = 0.0;      // phase-sensitive on the mean state
  double mean_shot_fidelity = 0.0;  // mean of per-shot magnitude-form values
  double shot_std_error = 0.0;
  long n_shots = 0;
  double motional_ground_return = 0.0;
  double spin_entropy = 0.0;  // of the mean spin state
};

inline RunResult run_shots(const GateParams& params, const NoiseScenario& sc,
                           const Numerics& num, std::uint64_t seed) {
  params.validate();
  sc.validate();
  if (num.n_shots < 1) throw std::invalid_argument("run_shots: need n_shots >= 1");

  const HilbertLayout layout = scenario_layout(sc, num);
  const long shots = sc.deterministic() ? 1 : num.n_shots;
  const bool pure_path = !sc.has_dissipators();

  double kept = 1.0;
  std::vector<ThermalComponent> comps;
  if (pure_path) comps = initial_mixture(sc, num, layout, &kept);

  std::vector<ShotResult> results(shots);
  auto work = [&](long shot) {
    ShotSample sample = sample_shot(sc, params, seed, static_cast<std::uint64_t>(shot));
    results[shot] = pure_path
                        ? detail::solve_shot_pure(params, sc, num, layout, comps, kept, sample)
                        : detail::solve_shot_density(params, sc, num, layout, sample);
  };

  long nthreads = num.threads > 0 ? num.threads
                                  : static_cast<long>(std::thread::hardware_concurrency());
  nthreads = std::max<long>(1, std::min<long>(nthreads, shots));
  if (nthreads == 1 || shots == 1) {
    for (long s = 0; s < shots; ++s) work(s);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int tix = 0; tix < nthreads; ++tix)
      pool.emplace_back([&, tix] {
        try {
          for (long s = next.fetch_add(1); s < shots; s = next.fetch_add(1)) work(s);
        } catch (...) {
          errors[tix] = std::current_exception();
          next.store(shots);
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Reduction ordered by shot index; compensated so thread count and
  // scheduling cannot perturb the emitted numbers.
  RunResult out;
  out.n_shots = shots;
  Mat4 sum = Mat4::Zero(), comp = Mat4::Zero();
  double fsum = 0.0, fcomp = 0.0, ground = 0.0;
  for (const auto& r : results) {
    Mat4 yv = r.spin - comp;
    Mat4 tv = sum + yv;
    comp = (tv - sum) - yv;
    sum = tv;
    double fy = r.fidelity_magnitude - fcomp;
    double ft = fsum + fy;
    fcomp = (ft - fsum) - fy;
    fsum = ft;
    ground += r.motional_ground_return;
  }
  out.mean_spin = sum / static_cast<double>(shots);
  out.mean_shot_fidelity = fsum / static_cast<double>(shots);
  out.motional_ground_return = ground / static_cast<double>(shots);
  if (shots > 1) {
    double var = 0.0;
    for (const auto& r : results) {
      const double d = r.fidelity_magnitude - out.mean_shot_fidelity;
      var += d * d;
    }
    var /= static_cast<double>(shots - 1);
    out.shot_std_error = std::sqrt(var / static_cast<double>(shots));
  }
  FidelityResult f = fidelity(out.mean_spin);
  out.fidelity = f.magnitude_form;
  out.fidelity_phase = f.phase_sensitive;
  out.spin_entropy = von_neumann_entropy(Mat(out.mean_spin));
  return out;
}

}  // namespace msgate
