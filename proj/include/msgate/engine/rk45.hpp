// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace msgate {

struct Tolerances {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 0.0;  // 0: no cap beyond the interval itself
};

class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, double t_reached)
      : std::runtime_error(what + " (t = " + std::to_string(t_reached) + " s)"),
        t_reached_(t_reached) {}
  double t_reached() const { return t_reached_; }

private:
  double t_reached_;
};

namespace detail {

// Dormand-Prince 5(4) tableau. The last stage is FSAL: the seventh slope of
// an accepted step equals the first slope of the next one.
inline constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double kE[7] = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                 -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};

}  // namespace detail

/// Adaptive Dormand-Prince 4(5) integration of y' = rhs(t, y) from t0 to t1.
///
/// StateT is any Eigen-like dense array of complex doubles. rhs(t, y, out)
/// must write the slope into out. checkpoints must be sorted and lie in
/// (t0, t1]; on_checkpoint(t, y) fires when each is reached exactly.
/// Returns the number of accepted steps. Throws IntegrationError when the
/// controller underflows the representable step size (stiffness).
template <class StateT, class Rhs, class Checkpoint>
long integrate_rk45(Rhs&& rhs, StateT& y, double t0, double t1, const Tolerances& tol,
                    const std::vector<double>& checkpoints, Checkpoint&& on_checkpoint) {
  using detail::kA;
  using detail::kC;
  using detail::kE;

  if (t1 < t0) throw std::invalid_argument("integrate_rk45: t1 < t0");
  const double span = t1 - t0;
  if (span == 0.0) {
    for (double tc : checkpoints) on_checkpoint(tc, y);
    return 0;
  }

  StateT k[7];
  for (auto& s : k) s.resizeLike(y);
  StateT ytmp;
  ytmp.resizeLike(y);
  StateT ynew;
  ynew.resizeLike(y);

  auto error_norm = [&](const StateT& err, const StateT& y0, const StateT& y1) {
    const double atol = tol.abs_tol, rtol = tol.rel_tol;
    double acc = 0.0;
    const auto* e = err.data();
    const auto* a = y0.data();
    const auto* b = y1.data();
    const long n = err.size();
    for (long i = 0; i < n; ++i) {
      const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
      const double q = std::abs(e[i]) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(n));
  };

  const double hmax = tol.max_step > 0.0 ? std::min(tol.max_step, span) : span;
  double h = std::min(hmax, span / 100.0);
  double t = t0;
  long accepted = 0;
  std::size_t next_cp = 0;
  bool fsal_valid = false;

  rhs(t, y, k[0]);

  while (t < t1) {
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), span);
    if (t1 - t < h_floor) break;  // done within rounding
    const double t_stop = next_cp < checkpoints.size() ? checkpoints[next_cp] : t1;
    h = std::min({h, hmax, t_stop - t});
    if (h < h_floor)
      throw IntegrationError("integrate_rk45: step size underflow", t);

    if (!fsal_valid) rhs(t, y, k[0]);

    for (int s = 1; s < 7; ++s) {
      ytmp = y;
      for (int j = 0; j < s; ++j)
        if (kA[s][j] != 0.0) ytmp += (h * kA[s][j]) * k[j];
      if (s == 6) ynew = ytmp;  // seventh stage sits at the 5th-order solution
      rhs(t + kC[s] * h, ytmp, k[s]);
    }

    ytmp = (h * kE[0]) * k[0];
    for (int j = 2; j < 7; ++j) ytmp += (h * kE[j]) * k[j];
    const double err = error_norm(ytmp, y, ynew);

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k[0].swap(k[6]);
      fsal_valid = true;
      ++accepted;
      while (next_cp < checkpoints.size() &&
             t >= checkpoints[next_cp] - h_floor) {
        on_checkpoint(checkpoints[next_cp], y);
        ++next_cp;
      }
      const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      fsal_valid = true;  // k[0] still holds the slope at t
    }
    if (accepted > 200'000'000)
      throw IntegrationError("integrate_rk45: step budget exhausted", t);
  }
  // Trailing checkpoints within rounding of t1.
  while (next_cp < checkpoints.size()) {
    on_checkpoint(checkpoints[next_cp], y);
    ++next_cp;
  }
  return accepted;
}

}  // namespace msgate
