// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "msgate/core/operators.hpp"

namespace msgate {

/// Validity tolerances for density matrices. The defaults sit well below any
/// physical effect in this problem; they can be loosened through config when
/// propagating long trajectories.
struct ValidityTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double min_eigenvalue = -1e-8;
};

/// Hermitian, unit-trace state over a layout.
struct DensityMatrix {
  HilbertLayout layout;
  Mat mat;

  DensityMatrix() = default;
  DensityMatrix(HilbertLayout lay, Mat m) : layout(std::move(lay)), mat(std::move(m)) {
    if (mat.rows() != mat.cols() || mat.rows() != layout.dim())
      throw std::invalid_argument("DensityMatrix: matrix dimension does not match layout");
  }

  long dim() const { return mat.rows(); }
  double trace_real() const { return mat.trace().real(); }

  double hermiticity_deviation() const { return max_abs(Mat(mat - mat.adjoint())); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (mat + mat.adjoint()),
                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  void validate(const ValidityTolerances& tol = {}) const {
    if (std::abs(mat.trace() - cplx{1.0, 0.0}) > tol.trace)
      throw std::invalid_argument("DensityMatrix: trace deviates from 1");
    if (hermiticity_deviation() > tol.hermiticity)
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (min_eigenvalue() < tol.min_eigenvalue)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
  }
};

/// |index><index| over the layout.
inline DensityMatrix basis_state(const HilbertLayout& layout, long index) {
  if (index < 0 || index >= layout.dim())
    throw std::out_of_range("basis_state: index out of range");
  Mat m = Mat::Zero(layout.dim(), layout.dim());
  m(index, index) = 1.0;
  return DensityMatrix(layout, std::move(m));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.layout.fock_dims();
  dims.insert(dims.end(), b.layout.fock_dims().begin(), b.layout.fock_dims().end());
  if (b.layout.qubit_count() != 0)
    throw std::invalid_argument("tensor: second factor must be mode-only");
  HilbertLayout lay(a.layout.qubit_count(), std::move(dims));
  return DensityMatrix(lay, kron(a.mat, b.mat));
}

/// Truncated single-mode thermal state, p_n proportional to (nbar/(1+nbar))^n,
/// renormalised over the cutoff so the trace is exactly 1.
inline DensityMatrix thermal_state(double nbar, int n_max) {
  if (nbar < 0.0) throw std::invalid_argument("thermal_state: negative nbar");
  if (n_max < 2) throw std::invalid_argument("thermal_state: need n_max >= 2");
  HilbertLayout lay(0, {n_max});
  Mat m = Mat::Zero(n_max, n_max);
  if (nbar == 0.0) {
    m(0, 0) = 1.0;
    return DensityMatrix(lay, std::move(m));
  }
  const double r = nbar / (1.0 + nbar);
  std::vector<double> p(n_max);
  double sum = 0.0, w = 1.0;
  for (int n = 0; n < n_max; ++n) {
    p[n] = w;
    sum += w;
    w *= r;
  }
  for (int n = 0; n < n_max; ++n) m(n, n) = p[n] / sum;
  return DensityMatrix(lay, std::move(m));
}

/// Thermal occupation weights without building the matrix; same truncation
/// and renormalisation as thermal_state.
inline std::vector<double> thermal_weights(double nbar, int n_max) {
  DensityMatrix dm = thermal_state(nbar, n_max);
  std::vector<double> w(n_max);
  for (int n = 0; n < n_max; ++n) w[n] = dm.mat(n, n).real();
  return w;
}

/// Reduced state over the kept factors (sorted ascending); trace preserved.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const auto& lay = rho.layout;
  for (int f : keep)
    if (f < 0 || f >= lay.factor_count())
      throw std::out_of_range("partial_trace: factor index out of range");

  std::vector<int> traced;
  for (int f = 0; f < lay.factor_count(); ++f)
    if (!std::binary_search(keep.begin(), keep.end(), f)) traced.push_back(f);

  int kept_qubits = 0;
  std::vector<int> kept_focks;
  for (int f : keep) {
    if (f < lay.qubit_count())
      ++kept_qubits;
    else
      kept_focks.push_back(lay.fock_dims()[f - lay.qubit_count()]);
  }
  HilbertLayout out_lay(kept_qubits, std::move(kept_focks));

  long kdim = 1, tdim = 1;
  for (int f : keep) kdim *= lay.factor_dim(f);
  for (int f : traced) tdim *= lay.factor_dim(f);

  // Full-space index from a (kept, traced) multi-index pair.
  auto compose = [&](long kidx, long tidx) {
    long idx = 0;
    for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
      int d = lay.factor_dim(keep[i]);
      idx += (kidx % d) * lay.stride(keep[i]);
      kidx /= d;
    }
    for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
      int d = lay.factor_dim(traced[i]);
      idx += (tidx % d) * lay.stride(traced[i]);
      tidx /= d;
    }
    return idx;
  };

  Mat out = Mat::Zero(kdim, kdim);
  for (long i = 0; i < kdim; ++i)
    for (long j = 0; j < kdim; ++j) {
      cplx acc{0.0, 0.0};
      for (long t = 0; t < tdim; ++t) acc += rho.mat(compose(i, t), compose(j, t));
      out(i, j) = acc;
    }
  return DensityMatrix(out_lay, std::move(out));
}

/// trace(op * rho); real to ~1e-10 for Hermitian op and valid rho.
inline cplx expect(const Operator& op, const DensityMatrix& rho) {
  if (op.layout != rho.layout) throw std::invalid_argument("expect: layout mismatch");
  return (op.mat * rho.mat).trace();
}

inline cplx expect(const Mat& op, const DensityMatrix& rho) {
  if (op.rows() != rho.dim()) throw std::invalid_argument("expect: dimension mismatch");
  return (op * rho.mat).trace();
}

}  // namespace msgate
