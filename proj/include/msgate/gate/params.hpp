// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace msgate {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Closed-form gate time and detuning for a K-loop drive at Rabi frequency
/// omega (rad/s): tau = pi*sqrt(K)/omega, delta = 2*omega*sqrt(K). Together
/// these satisfy delta*tau = 2*pi*K, i.e. K closed loops in phase space.
struct DerivedGate {
  double gate_time;
  double detuning;
};

inline DerivedGate derive_gate(double omega_gate, int loops) {
  if (omega_gate <= 0.0) throw std::invalid_argument("derive_gate: omega must be positive");
  if (loops < 1) throw std::invalid_argument("derive_gate: loops must be >= 1");
  const double rk = std::sqrt(static_cast<double>(loops));
  return {std::numbers::pi * rk / omega_gate, 2.0 * omega_gate * rk};
}

/// Deterministic gate quantities, all angular frequencies in rad/s and times
/// in seconds. The dynamics run in the bichromatic interaction frame, so the
/// absolute frequencies (qubit, mode) are bookkeeping only; what enters the
/// propagation is detuning, mode spacing and the differential shift.
struct GateParams {
  double omega_gate = 0.0;     // gate Rabi frequency
  int loops = 1;               // phase-space loops K
  double detuning = 0.0;       // gate detuning from the sideband
  double aczs = 0.0;           // differential AC Zeeman shift magnitude
  double mode_freq_r2 = 0.0;   // gate (rocking) mode, bookkeeping
  double mode_freq_r1 = 0.0;   // nearest spectator mode, bookkeeping
  double qubit_freq = 0.0;     // bookkeeping
  double ramp_time = 0.0;      // envelope ramp duration
  double gate_time = 0.0;      // pulse duration tau
  double rabi_red = 0.0;       // red-sideband Rabi frequency
  double rabi_blue = 0.0;      // blue-sideband Rabi frequency
  double spectator_rabi = 0.0; // coupling via the spectator mode

  void validate() const {
    auto nonneg = [](double v, const char* what) {
      if (v < 0.0) throw std::invalid_argument(std::string("GateParams: negative ") + what);
    };
    nonneg(omega_gate, "omega_gate");
    nonneg(detuning, "detuning");
    nonneg(aczs, "aczs");
    nonneg(mode_freq_r2, "mode_freq_r2");
    nonneg(mode_freq_r1, "mode_freq_r1");
    nonneg(qubit_freq, "qubit_freq");
    nonneg(ramp_time, "ramp_time");
    nonneg(rabi_red, "rabi_red");
    nonneg(rabi_blue, "rabi_blue");
    nonneg(spectator_rabi, "spectator_rabi");
    if (loops < 1) throw std::invalid_argument("GateParams: loops must be >= 1");
    if (gate_time <= 2.0 * ramp_time)
      throw std::invalid_argument("GateParams: gate_time must exceed twice the ramp time");
  }

  /// Populate gate_time/detuning from the closed form and mirror the Rabi
  /// frequency into both sidebands and the spectator coupling.
  static GateParams derived(double omega_gate, int loops) {
    GateParams p;
    p.omega_gate = omega_gate;
    p.loops = loops;
    auto d = derive_gate(omega_gate, loops);
    p.gate_time = d.gate_time;
    p.detuning = d.detuning;
    p.rabi_red = omega_gate;
    p.rabi_blue = omega_gate;
    p.spectator_rabi = omega_gate;
    return p;
  }
};

}  // namespace msgate
