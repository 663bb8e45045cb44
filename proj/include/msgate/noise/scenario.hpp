// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msgate/gate/envelope.hpp"
#include "msgate/gate/params.hpp"
#include "msgate/noise/rng.hpp"

namespace msgate {

/// Switchable noise channels with their strengths. A scenario with every
/// field zero/off is the ideal gate. Angular frequencies are rad/s except
/// chirp_rate_hz_per_us, which is kept in the units it is usually quoted in.
struct NoiseScenario {
  double mode_jitter_rel_std = 0.0;   // std of delta_eps/detuning, per shot
  double chirp_rate_hz_per_us = 0.0;  // linear mode-frequency drift
  double chirp_duration = 0.0;        // seconds of drift before saturation
  bool spectator_enabled = false;
  double spectator_spacing = 0.0;     // mode spacing delta_nu (rad/s)
  double nbar_gate_mode = 0.0;
  double nbar_spectator = 0.0;
  double heating_rate = 0.0;          // quanta/s on the gate mode
  double dephasing_time = 0.0;        // tau_d seconds; 0 disables dephasing
  double aczs_rel_std = 0.0;          // std of Delta_eps/Delta, per shot
  double rabi_imbalance = 0.0;        // (Omega_R - Omega_B)/Omega_B
  EnvelopeShape envelope_shape = EnvelopeShape::rectangular;
  double transient_amplitude = 0.0;
  double transient_tau = 1e-6;

  void validate() const {
    auto nonneg = [](double v, const char* what) {
      if (v < 0.0) throw std::invalid_argument(std::string("NoiseScenario: negative ") + what);
    };
    nonneg(mode_jitter_rel_std, "mode_jitter_rel_std");
    nonneg(chirp_duration, "chirp_duration");
    nonneg(spectator_spacing, "spectator_spacing");
    nonneg(nbar_gate_mode, "nbar_gate_mode");
    nonneg(nbar_spectator, "nbar_spectator");
    nonneg(heating_rate, "heating_rate");
    nonneg(dephasing_time, "dephasing_time");
    nonneg(aczs_rel_std, "aczs_rel_std");
    nonneg(transient_tau, "transient_tau");
  }

  double dephasing_rate() const { return dephasing_time > 0.0 ? 1.0 / dephasing_time : 0.0; }

  /// True when no channel draws shot-to-shot random values.
  bool deterministic() const { return mode_jitter_rel_std == 0.0 && aczs_rel_std == 0.0; }

  bool has_dissipators() const { return heating_rate > 0.0 || dephasing_rate() > 0.0; }
};

/// Frozen per-shot random parameters; constant within the shot.
struct ShotSample {
  double delta_eps_offset = 0.0;  // rad/s, gate-mode frequency offset
  double aczs_offset = 0.0;       // rad/s, differential shift offset
  std::uint64_t seed = 0;
  std::uint64_t shot = 0;
};

/// Quasi-static draw for one shot. Distinct channels use independent
/// streams keyed by (seed, shot, channel), so any subset of channels can be
/// enabled without disturbing the others' values.
inline ShotSample sample_shot(const NoiseScenario& sc, const GateParams& params,
                              std::uint64_t seed, std::uint64_t shot_index) {
  ShotSample s;
  s.seed = seed;
  s.shot = shot_index;
  if (sc.mode_jitter_rel_std > 0.0)
    s.delta_eps_offset = sc.mode_jitter_rel_std * params.detuning *
                         noise_stream(seed, shot_index, NoiseChannel::mode_jitter).normal();
  if (sc.aczs_rel_std > 0.0)
    s.aczs_offset = sc.aczs_rel_std * params.aczs *
                    noise_stream(seed, shot_index, NoiseChannel::aczs).normal();
  return s;
}

/// Gate-mode frequency drift over the shot: the sampled quasi-static offset
/// plus a linear chirp that saturates after chirp_duration. The chirp sign
/// is positive (mode frequency rises while the conductor warms up).
inline std::function<double(double)> delta_eps_profile(const ShotSample& sample,
                                                       const NoiseScenario& sc) {
  const double offset = sample.delta_eps_offset;
  const double rate = kTwoPi * sc.chirp_rate_hz_per_us * 1e6;  // rad/s per s
  const double t_sat = sc.chirp_duration;
  if (rate == 0.0) return [offset](double) { return offset; };
  return [offset, rate, t_sat](double t) { return offset + rate * std::min(t, t_sat); };
}

/// One entry of the single-effect error budget.
struct BudgetScenario {
  std::string name;
  std::string parameter;       // human-readable strength description
  NoiseScenario scenario;
  bool simulate = true;        // false: quoted as an external bound only
  bool bound = false;          // reported value is an upper bound
  double reference_infidelity = 0.0;  // external bound when simulate=false
};

/// The standard single-effect budget rows. Each row enables exactly one
/// imperfection on top of the ideal gate; measured mode occupations ride
/// along as background (they are initial conditions, not switchable noise).
/// Off-resonant scattering is an externally measured bound and is never
/// simulated here.
inline std::vector<BudgetScenario> table1_scenarios(double nbar_gate = 0.11,
                                                    double nbar_spectator = 0.27) {
  std::vector<BudgetScenario> rows;

  {
    BudgetScenario r;
    r.name = "mode_instability";
    r.parameter = "rel. freq. std 1.1e-2, chirp 0.3 Hz/us for 600 us";
    r.scenario.mode_jitter_rel_std = 1.1e-2;
    r.scenario.chirp_rate_hz_per_us = 0.3;
    r.scenario.chirp_duration = 600e-6;
    r.scenario.nbar_gate_mode = nbar_gate;
    rows.push_back(std::move(r));
  }
  {
    BudgetScenario r;
    r.name = "spectator_mode";
    r.parameter = "mode spacing 2pi x 42.5 kHz, nbar 0.27";
    r.scenario.spectator_enabled = true;
    r.scenario.spectator_spacing = kTwoPi * 42.5e3;
    r.scenario.nbar_spectator = nbar_spectator;
    r.scenario.nbar_gate_mode = nbar_gate;
    rows.push_back(std::move(r));
  }
  {
    BudgetScenario r;
    r.name = "motional_heating";
    r.parameter = "28 quanta/s";
    r.scenario.heating_rate = 28.0;
    r.scenario.nbar_gate_mode = nbar_gate;
    rows.push_back(std::move(r));
  }
  {
    BudgetScenario r;
    r.name = "offresonant_scattering";
    r.parameter = "externally measured bound";
    r.simulate = false;
    r.bound = true;
    r.reference_infidelity = 2.3e-3;
    rows.push_back(std::move(r));
  }
  {
    BudgetScenario r;
    r.name = "qubit_decoherence";
    r.parameter = "coherence time 0.5 s";
    r.scenario.dephasing_time = 0.5;
    r.scenario.nbar_gate_mode = nbar_gate;
    r.bound = true;  // the coherence time itself is a lower bound
    rows.push_back(std::move(r));
  }
  {
    BudgetScenario r;
    r.name = "pulse_shape";
    r.parameter = "2 us erf ramps";
    r.scenario.envelope_shape = EnvelopeShape::erf_ramp;
    r.scenario.nbar_gate_mode = nbar_gate;
    r.bound = true;
    rows.push_back(std::move(r));
  }
  {
    BudgetScenario r;
    r.name = "aczs_fluctuations";
    r.parameter = "rel. shift std 8e-4";
    r.scenario.aczs_rel_std = 8e-4;
    r.scenario.nbar_gate_mode = nbar_gate;
    rows.push_back(std::move(r));
  }
  {
    BudgetScenario r;
    r.name = "rabi_imbalance";
    r.parameter = "2.33e-2";
    r.scenario.rabi_imbalance = 2.33e-2;
    r.scenario.nbar_gate_mode = nbar_gate;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace msgate
