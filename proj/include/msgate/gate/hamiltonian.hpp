// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "msgate/core/operators.hpp"
#include "msgate/gate/envelope.hpp"
#include "msgate/gate/params.hpp"

namespace msgate {

/// Time-dependent Hamiltonian as a sum of scalar-coefficient terms
/// H(t) = sum_k c_k(t) * A_k with constant sparse A_k. Builders emit
/// Hermitian-conjugate term pairs, so H(t) is Hermitian at all times.
/// Factories are pure: evaluation has no side effects and is safe to call
/// concurrently.
class TimeDependentHamiltonian {
public:
  struct Term {
    std::function<cplx(double)> coeff;
    SpMat op;
  };

  TimeDependentHamiltonian() = default;
  explicit TimeDependentHamiltonian(HilbertLayout layout) : layout_(std::move(layout)) {}

  const HilbertLayout& layout() const { return layout_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(std::function<cplx(double)> coeff, SpMat op) {
    if (op.rows() != layout_.dim() || op.cols() != layout_.dim())
      throw std::invalid_argument("TimeDependentHamiltonian: term dimension mismatch");
    terms_.push_back({std::move(coeff), std::move(op)});
  }

  void append(const TimeDependentHamiltonian& other) {
    if (other.layout_ != layout_)
      throw std::invalid_argument("TimeDependentHamiltonian: layout mismatch");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  }

  /// Dense H(t); intended for tests and small layouts.
  Operator at(double t) const {
    Mat h = Mat::Zero(layout_.dim(), layout_.dim());
    for (const auto& term : terms_) h += term.coeff(t) * Mat(term.op);
    return Operator(layout_, std::move(h));
  }

private:
  HilbertLayout layout_;
  std::vector<Term> terms_;
};

namespace detail {

inline SpMat qubit_sum_sparse(const Mat& single, const HilbertLayout& layout) {
  if (layout.qubit_count() < 1)
    throw std::invalid_argument("qubit_sum_sparse: layout has no qubits");
  SpMat s = embed_sparse(single, 0, layout);
  for (int q = 1; q < layout.qubit_count(); ++q) s += embed_sparse(single, q, layout);
  return s;
}

inline int gate_mode_factor(const HilbertLayout& layout) {
  if (layout.mode_count() < 1)
    throw std::invalid_argument("layout is missing the gate mode");
  return layout.qubit_count();
}

inline int spectator_mode_factor(const HilbertLayout& layout) {
  if (layout.mode_count() < 2)
    throw std::invalid_argument("layout is missing the spectator mode");
  return layout.qubit_count() + 1;
}

}  // namespace detail

/// Optional exponential settling of the drive amplitude,
/// g(t) = 1 + amplitude * exp(-t/tau); amplitude = 0 disables it.
struct PowerTransient {
  double amplitude = 0.0;
  double tau = 1e-6;

  double value(double t) const {
    return amplitude == 0.0 ? 1.0 : 1.0 + amplitude * std::exp(-t / tau);
  }
};

/// Flat-drive bichromatic interaction on the gate mode:
/// H(t) = Omega/2 * sum_j (s+_j + s-_j)(a e^{i d t} + a^dag e^{-i d t}).
inline TimeDependentHamiltonian build_ms_ideal(const GateParams& params,
                                               const HilbertLayout& layout) {
  const int mode = detail::gate_mode_factor(layout);
  const int n = layout.factor_dim(mode);
  auto q = qubit_ops();
  SpMat sx = detail::qubit_sum_sparse(q.sx, layout);
  SpMat a = embed_sparse(fock_ladder(n), mode, layout);
  SpMat adag = SpMat(a.adjoint());

  const double omega = params.omega_gate, delta = params.detuning;
  TimeDependentHamiltonian h(layout);
  h.add_term([omega, delta](double t) { return 0.5 * omega * std::exp(kI * delta * t); },
             SpMat(sx * a));
  h.add_term([omega, delta](double t) { return 0.5 * omega * std::exp(-kI * delta * t); },
             SpMat(sx * adag));
  return h;
}

/// Shaped bichromatic interaction with independent sideband amplitudes:
/// H(t) = 1/2 sum_j (O_B(t) s+_j a^dag e^{-i d t} + O_R(t) s+_j a e^{i d t}) + H.c.
/// Reduces to the flat drive when both amplitudes equal omega_gate and the
/// envelope is rectangular.
inline TimeDependentHamiltonian build_ms_extended(const GateParams& params,
                                                  const PulseEnvelope& env,
                                                  const HilbertLayout& layout,
                                                  const PowerTransient& transient = {}) {
  const int mode = detail::gate_mode_factor(layout);
  const int n = layout.factor_dim(mode);
  auto q = qubit_ops();
  SpMat sp = detail::qubit_sum_sparse(q.sp, layout);
  SpMat sm = detail::qubit_sum_sparse(q.sm, layout);
  SpMat a = embed_sparse(fock_ladder(n), mode, layout);
  SpMat adag = SpMat(a.adjoint());

  const double delta = params.detuning;
  const double wb = params.rabi_blue, wr = params.rabi_red;
  auto blue = [env, transient, wb](double t) { return 0.5 * wb * env.value(t) * transient.value(t); };
  auto red = [env, transient, wr](double t) { return 0.5 * wr * env.value(t) * transient.value(t); };

  TimeDependentHamiltonian h(layout);
  h.add_term([blue, delta](double t) { return blue(t) * std::exp(-kI * delta * t); },
             SpMat(sp * adag));
  h.add_term([red, delta](double t) { return red(t) * std::exp(kI * delta * t); },
             SpMat(sp * a));
  h.add_term([blue, delta](double t) { return blue(t) * std::exp(kI * delta * t); },
             SpMat(sm * a));
  h.add_term([red, delta](double t) { return red(t) * std::exp(-kI * delta * t); },
             SpMat(sm * adag));
  return h;
}

/// Drift of the gate-mode frequency: H_m(t) = delta_eps(t) a^dag a.
inline TimeDependentHamiltonian build_mode_instability(std::function<double(double)> delta_eps,
                                                       const HilbertLayout& layout) {
  const int mode = detail::gate_mode_factor(layout);
  const int n = layout.factor_dim(mode);
  SpMat num = embed_sparse(fock_number(n), mode, layout);
  TimeDependentHamiltonian h(layout);
  h.add_term([f = std::move(delta_eps)](double t) { return cplx{f(t), 0.0}; }, std::move(num));
  return h;
}

/// Uncompensated differential shift, constant within a shot:
/// H_z = delta_zeeman_eps/2 * sum_j sz_j.
inline TimeDependentHamiltonian build_aczs(double delta_zeeman_eps,
                                           const HilbertLayout& layout) {
  auto q = qubit_ops();
  SpMat sz = detail::qubit_sum_sparse(q.sz, layout);
  TimeDependentHamiltonian h(layout);
  h.add_term([delta_zeeman_eps](double) { return cplx{0.5 * delta_zeeman_eps, 0.0}; },
             std::move(sz));
  return h;
}

/// Off-resonant coupling through the nearest spectator mode, detuned by the
/// mode spacing: H = Omega_r1/2 sum_j (s+_j+s-_j)(a1 e^{i(dv+d)t} + H.c.).
inline TimeDependentHamiltonian build_spectator(const GateParams& params, double mode_spacing,
                                                const HilbertLayout& layout) {
  const int mode = detail::spectator_mode_factor(layout);
  const int n = layout.factor_dim(mode);
  auto q = qubit_ops();
  SpMat sx = detail::qubit_sum_sparse(q.sx, layout);
  SpMat a = embed_sparse(fock_ladder(n), mode, layout);
  SpMat adag = SpMat(a.adjoint());

  const double w = params.spectator_rabi;
  const double phase = mode_spacing + params.detuning;
  TimeDependentHamiltonian h(layout);
  h.add_term([w, phase](double t) { return 0.5 * w * std::exp(kI * phase * t); },
             SpMat(sx * a));
  h.add_term([w, phase](double t) { return 0.5 * w * std::exp(-kI * phase * t); },
             SpMat(sx * adag));
  return h;
}

}  // namespace msgate
