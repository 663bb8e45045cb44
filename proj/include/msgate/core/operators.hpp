// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <stdexcept>

#include "msgate/core/layout.hpp"

namespace msgate {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;

inline constexpr cplx kI{0.0, 1.0};

/// Dense operator tied to a layout. Arithmetic happens on .mat directly;
/// the layout is carried for dimension checks at module boundaries.
struct Operator {
  HilbertLayout layout;
  Mat mat;

  Operator() = default;
  Operator(HilbertLayout lay, Mat m) : layout(std::move(lay)), mat(std::move(m)) {
    if (mat.rows() != mat.cols() || mat.rows() != layout.dim())
      throw std::invalid_argument("Operator: matrix dimension does not match layout");
  }

  long dim() const { return mat.rows(); }
};

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Mat& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(max_abs(m), 1.0);
  return max_abs(Mat(m - m.adjoint())) <= tol * scale;
}

/// Truncated annihilation operator: a|n> = sqrt(n)|n-1> on {|0>..|n_max-1>}.
inline Mat fock_ladder(int n_max) {
  if (n_max < 2) throw std::invalid_argument("fock_ladder: need n_max >= 2");
  Mat a = Mat::Zero(n_max, n_max);
  for (int n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Mat fock_number(int n_max) {
  Mat n = Mat::Zero(n_max, n_max);
  for (int k = 0; k < n_max; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

/// Single-qubit operators in the basis {|up> = index 0, |down> = index 1}.
struct QubitOps {
  Mat sx, sy, sz, sp, sm;
};

inline QubitOps qubit_ops() {
  QubitOps q;
  q.sx = Mat::Zero(2, 2);
  q.sx << 0, 1, 1, 0;
  q.sy = Mat::Zero(2, 2);
  q.sy << 0, -kI, kI, 0;
  q.sz = Mat::Zero(2, 2);
  q.sz << 1, 0, 0, -1;
  q.sp = 0.5 * (q.sx + kI * q.sy);  // |up><down|
  q.sm = 0.5 * (q.sx - kI * q.sy);
  return q;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Lift a single-factor operator to the full space: identity on all other
/// factors, tensor order fixed by the layout.
inline Operator embed(const Mat& op, int factor, const HilbertLayout& layout) {
  const int fd = layout.factor_dim(factor);
  if (op.rows() != fd || op.cols() != fd)
    throw std::invalid_argument("embed: operator dimension does not match factor");
  long pre = 1, post = 1;
  for (int f = 0; f < factor; ++f) pre *= layout.factor_dim(f);
  for (int f = factor + 1; f < layout.factor_count(); ++f) post *= layout.factor_dim(f);
  Mat full = kron(kron(Mat::Identity(pre, pre), op), Mat::Identity(post, post));
  return Operator(layout, std::move(full));
}

inline SpMat sparse_from_dense(const Mat& m, double prune = 0.0) {
  SpMat s = m.sparseView(1.0, prune);
  s.makeCompressed();
  return s;
}

/// Sparse embed; avoids materialising the dense full-space matrix, which
/// matters for the two-mode layouts.
inline SpMat embed_sparse(const Mat& op, int factor, const HilbertLayout& layout) {
  const int fd = layout.factor_dim(factor);
  if (op.rows() != fd || op.cols() != fd)
    throw std::invalid_argument("embed_sparse: operator dimension does not match factor");
  long pre = 1, post = 1;
  for (int f = 0; f < factor; ++f) pre *= layout.factor_dim(f);
  for (int f = factor + 1; f < layout.factor_count(); ++f) post *= layout.factor_dim(f);

  std::vector<Eigen::Triplet<cplx>> trip;
  for (Eigen::Index r = 0; r < op.rows(); ++r)
    for (Eigen::Index c = 0; c < op.cols(); ++c) {
      if (op(r, c) == cplx{0.0, 0.0}) continue;
      for (long p = 0; p < pre; ++p)
        for (long q = 0; q < post; ++q)
          trip.emplace_back((p * fd + r) * post + q, (p * fd + c) * post + q, op(r, c));
    }
  SpMat s(layout.dim(), layout.dim());
  s.setFromTriplets(trip.begin(), trip.end());
  s.makeCompressed();
  return s;
}

}  // namespace msgate
