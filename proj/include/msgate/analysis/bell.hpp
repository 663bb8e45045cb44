// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "msgate/core/operators.hpp"

namespace msgate {

/// Two-qubit computational-basis ordering used throughout the analysis
/// layer: index 0 = |uu>, 1 = |ud>, 2 = |du>, 3 = |dd>.
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

/// Target of the entangling gate: (|uu> + i|dd>)/sqrt(2).
inline Vec4 bell_target() {
  Vec4 v = Vec4::Zero();
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = kI / std::sqrt(2.0);
  return v;
}

struct SpinPopulations {
  double p_uu = 0.0;
  double p_mixed = 0.0;  // both single-flip states combined
  double p_dd = 0.0;
};

inline void check_spin_state(const Mat4& rho, double tol = 1e-7) {
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > tol)
    throw std::invalid_argument("spin state: trace deviates from 1");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("spin state: not Hermitian");
}

inline SpinPopulations populations(const Mat4& rho) {
  check_spin_state(rho);
  return {rho(0, 0).real(), rho(1, 1).real() + rho(2, 2).real(), rho(3, 3).real()};
}

/// Both fidelity readings of a two-qubit state against the target.
///
/// phase_sensitive is <Psi|rho|Psi>. The magnitude form
/// 1/2 (P_uu + P_dd) + |rho_uu,dd| ignores the coherence phase and is what a
/// parity-fringe measurement reconstructs; it upper-bounds the
/// phase-sensitive value.
struct FidelityResult {
  double phase_sensitive = 0.0;
  double magnitude_form = 0.0;
  double half_population_sum = 0.0;  // 1/2 (P_uu + P_dd)
  double coherence_magnitude = 0.0;  // |rho_uu,dd|
};

inline FidelityResult fidelity(const Mat4& rho) {
  check_spin_state(rho);
  FidelityResult f;
  f.half_population_sum = 0.5 * (rho(0, 0).real() + rho(3, 3).real());
  f.coherence_magnitude = std::abs(rho(0, 3));
  f.magnitude_form = f.half_population_sum + f.coherence_magnitude;
  f.phase_sensitive = f.half_population_sum - rho(0, 3).imag();
  return f;
}

/// Global pi/2 rotation about the equatorial axis at angle phi:
/// U(phi) = exp(-i pi/4 sum_j (cos(phi) sx_j + sin(phi) sy_j)).
inline Mat4 analysis_pulse_unitary(double phi) {
  Eigen::Matrix2cd u;
  const double c = std::cos(std::numbers::pi / 4.0);
  const double s = std::sin(std::numbers::pi / 4.0);
  u << c, -kI * s * std::exp(-kI * phi), -kI * s * std::exp(kI * phi), c;
  Mat4 full;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      full.block<2, 2>(2 * i, 2 * j) = u(i, j) * u;
  return full;
}

inline Mat4 analysis_pulse(const Mat4& rho, double phi) {
  Mat4 u = analysis_pulse_unitary(phi);
  return u * rho * u.adjoint();
}

/// Populations and parity versus analysis phase. The parity is the exact
/// population identity P_dd + P_uu - P_mixed at every point.
struct ParityScan {
  std::vector<double> phases;
  std::vector<SpinPopulations> pops;
  std::vector<double> parity;
};

inline ParityScan parity_scan(const Mat4& rho, const std::vector<double>& phase_grid) {
  if (phase_grid.empty()) throw std::invalid_argument("parity_scan: empty phase grid");
  ParityScan scan;
  scan.phases = phase_grid;
  for (double phi : phase_grid) {
    SpinPopulations p = populations(analysis_pulse(rho, phi));
    scan.pops.push_back(p);
    scan.parity.push_back(p.p_dd + p.p_uu - p.p_mixed);
  }
  return scan;
}

/// Least-squares sinusoid A sin(2 phi + phi0) + C with standard errors.
///
/// Linearised in (a, b, C) with signal a sin2phi + b cos2phi + C, then
/// converted to amplitude/phase. With per-point sigmas the covariance is
/// scaled by max(1, chi2/dof); without them the residual variance estimates
/// the noise. |A| equals |2 rho_uu,dd| when fitted to a parity fringe.
struct FringeFit {
  double amplitude = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double amplitude_err = 0.0;
  double phase_err = 0.0;
  double offset_err = 0.0;
  double chi2 = 0.0;
  long dof = 0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (a, b, C)
};

inline FringeFit fit_fringe(const std::vector<double>& phases, const std::vector<double>& values,
                            const std::vector<double>& sigmas = {}) {
  const std::size_t n = phases.size();
  if (n != values.size() || (!sigmas.empty() && sigmas.size() != n))
    throw std::invalid_argument("fit_fringe: length mismatch");
  if (n < 5) throw std::invalid_argument("fit_fringe: need at least 5 points");
  const double span = *std::max_element(phases.begin(), phases.end()) -
                      *std::min_element(phases.begin(), phases.end());
  if (span < std::numbers::pi * (1.0 - 1e-9))
    throw std::invalid_argument("fit_fringe: grid must span at least one period of 2*phi");

  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    X(i, 0) = std::sin(2.0 * phases[i]);
    X(i, 1) = std::cos(2.0 * phases[i]);
    X(i, 2) = 1.0;
    y(i) = values[i];
    w(i) = sigmas.empty() ? 1.0 : 1.0 / (sigmas[i] * sigmas[i]);
  }
  Eigen::Matrix3d xtx = X.transpose() * w.asDiagonal() * X;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(xtx);
  if (!lu.isInvertible()) throw std::invalid_argument("fit_fringe: degenerate phase grid");
  Eigen::Vector3d beta = lu.solve(X.transpose() * (w.asDiagonal() * y));

  FringeFit fit;
  const double a = beta(0), b = beta(1);
  fit.offset = beta(2);
  fit.amplitude = std::hypot(a, b);
  fit.phase = std::atan2(b, a);
  Eigen::VectorXd resid = y - X * beta;
  fit.chi2 = (resid.array().square() * w.array()).sum();
  fit.dof = static_cast<long>(n) - 3;

  Eigen::Matrix3d cov = lu.inverse();
  if (sigmas.empty()) {
    const double var = fit.dof > 0 ? fit.chi2 / static_cast<double>(fit.dof) : 0.0;
    cov *= var;
  } else if (fit.dof > 0 && fit.chi2 > static_cast<double>(fit.dof)) {
    cov *= fit.chi2 / static_cast<double>(fit.dof);
  }
  fit.covariance = cov;
  fit.offset_err = std::sqrt(std::max(0.0, cov(2, 2)));
  if (fit.amplitude > 1e-12) {
    const double ca = a / fit.amplitude, cb = b / fit.amplitude;
    fit.amplitude_err = std::sqrt(std::max(
        0.0, ca * ca * cov(0, 0) + 2.0 * ca * cb * cov(0, 1) + cb * cb * cov(1, 1)));
    const double da = -b / (fit.amplitude * fit.amplitude);
    const double db = a / (fit.amplitude * fit.amplitude);
    fit.phase_err = std::sqrt(
        std::max(0.0, da * da * cov(0, 0) + 2.0 * da * db * cov(0, 1) + db * db * cov(1, 1)));
  } else {
    fit.amplitude_err = std::sqrt(std::max(0.0, 0.5 * (cov(0, 0) + cov(1, 1)))) * std::sqrt(2.0);
    fit.phase_err = std::numbers::pi;
  }
  return fit;
}

inline FringeFit fit_fringe(const ParityScan& scan, const std::vector<double>& sigmas = {}) {
  return fit_fringe(scan.phases, scan.parity, sigmas);
}

/// Von Neumann entropy (nats) of a small Hermitian state.
inline double von_neumann_entropy(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-300) s -= l * std::log(l);
  }
  return s;
}

}  // namespace msgate
