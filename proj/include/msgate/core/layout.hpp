// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace msgate {

/// Ordered tensor-factor description of the simulation Hilbert space.
///
/// Factors are laid out qubits first, then motional modes in listed order.
/// Basis index 0 of a qubit is |up>. All operators and states carry the
/// layout they were built against; mixing layouts is an error.
class HilbertLayout {
public:
  HilbertLayout() = default;

  HilbertLayout(int qubit_count, std::vector<int> fock_dims)
      : qubits_(qubit_count), fock_dims_(std::move(fock_dims)) {
    if (qubits_ < 0) throw std::invalid_argument("HilbertLayout: negative qubit count");
    for (int d : fock_dims_)
      if (d < 2) throw std::invalid_argument("HilbertLayout: Fock dimension must be >= 2");
    if (qubits_ == 0 && fock_dims_.empty())
      throw std::invalid_argument("HilbertLayout: empty layout");
  }

  int qubit_count() const { return qubits_; }
  const std::vector<int>& fock_dims() const { return fock_dims_; }
  int mode_count() const { return static_cast<int>(fock_dims_.size()); }
  int factor_count() const { return qubits_ + mode_count(); }

  int factor_dim(int factor) const {
    check_factor(factor);
    return factor < qubits_ ? 2 : fock_dims_[factor - qubits_];
  }

  long dim() const {
    long d = 1;
    for (int f = 0; f < factor_count(); ++f) d *= factor_dim(f);
    return d;
  }

  /// Row-major stride of a factor: index = sum_f i_f * stride(f).
  long stride(int factor) const {
    check_factor(factor);
    long s = 1;
    for (int f = factor_count() - 1; f > factor; --f) s *= factor_dim(f);
    return s;
  }

  /// Spin-block dimension (2^qubits); modes contribute the remaining factor.
  long spin_dim() const {
    long d = 1;
    for (int q = 0; q < qubits_; ++q) d *= 2;
    return d;
  }
  long mode_dim() const { return dim() / spin_dim(); }

  bool operator==(const HilbertLayout& o) const {
    return qubits_ == o.qubits_ && fock_dims_ == o.fock_dims_;
  }
  bool operator!=(const HilbertLayout& o) const { return !(*this == o); }

private:
  void check_factor(int factor) const {
    if (factor < 0 || factor >= factor_count())
      throw std::out_of_range("HilbertLayout: factor index " + std::to_string(factor) +
                              " out of range");
  }

  int qubits_ = 0;
  std::vector<int> fock_dims_;
};

}  // namespace msgate
