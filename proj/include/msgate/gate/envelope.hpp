// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

namespace msgate {

enum class EnvelopeShape { rectangular, erf_ramp };

/// Pulse amplitude envelope, value in [0,1], time-reversal symmetric.
///
/// The erf ramp rises over [0, ramp_time] as a normal CDF with sigma =
/// ramp_time/6 centred at ramp_time/2, rescaled so the ends hit exactly 0
/// and 1, is identically 1 in the flat middle, and mirrors at the end.
/// Rescaling keeps the ramp continuous at the clamp and makes each ramp
/// lose exactly ramp_time/2 of pulse area.
struct PulseEnvelope {
  double ramp_time = 0.0;
  double gate_time = 0.0;
  EnvelopeShape shape = EnvelopeShape::rectangular;

  PulseEnvelope() = default;
  PulseEnvelope(double ramp, double gate, EnvelopeShape s)
      : ramp_time(ramp), gate_time(gate), shape(s) {
    if (gate <= 0.0) throw std::invalid_argument("PulseEnvelope: gate_time must be positive");
    if (s == EnvelopeShape::erf_ramp && (ramp <= 0.0 || 2.0 * ramp >= gate))
      throw std::invalid_argument("PulseEnvelope: ramp must satisfy 0 < ramp < gate_time/2");
  }

  double value(double t) const {
    if (t < 0.0 || t > gate_time)
      throw std::out_of_range("PulseEnvelope: time outside the pulse");
    if (shape == EnvelopeShape::rectangular) return 1.0;
    const double u = std::min(t, gate_time - t);
    if (u >= ramp_time) return 1.0;
    const double sigma = ramp_time / 6.0;
    const double x = (u - 0.5 * ramp_time) / sigma;
    auto cdf = [](double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); };
    const double lo = cdf(-3.0), hi = cdf(3.0);
    return (cdf(x) - lo) / (hi - lo);
  }
};

}  // namespace msgate
