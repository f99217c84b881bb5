#pragma once

// Embedded Runge-Kutta 5(4) pair of Dormand & Prince with a PI step-size
// controller. The error test is per unit step: a step of size h is accepted
// when max_i |err_i| / (1 + |y_i|) <= tol * h.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ndpa/errors.hpp"

namespace ndpa::detail {

class DormandPrince45 {
 public:
  using State = std::vector<std::complex<double>>;
  using Rhs = std::function<void(double t, const State& y, State& dydt)>;

  DormandPrince45(Rhs rhs, double tol, std::size_t max_steps = 5'000'000)
      : rhs_(std::move(rhs)), tol_(tol), max_steps_(max_steps) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  }

  /// Advances (t, y) to t_end. Throws IntegrationError on step-size
  /// underflow or when the step budget is exhausted.
  void integrate_to(double& t, State& y, double t_end) {
    if (t_end == t) return;
    const double dir = t_end > t ? 1.0 : -1.0;
    const std::size_t n = y.size();
    resize(n);
    if (!have_fsal_) {
      rhs_(t, y, k1_);
      have_fsal_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(t, y, dir);

    while ((t_end - t) * dir > 0.0) {
      if (steps_++ > max_steps_) {
        throw IntegrationError("step budget exhausted", t);
      }
      double h = std::min(h_, std::abs(t_end - t));
      const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(t));
      if (h < h_floor && std::abs(t_end - t) > h_floor) {
        throw IntegrationError("step size underflow", t);
      }
      const double hs = dir * h;
      stage(t, y, hs);

      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> e =
            hs * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                  e6 * k6_[i] + e7 * k7_[i]);
        const double scale = 1.0 + std::max(std::abs(y[i]), std::abs(y5_[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      // Normalised error ratio; <= 1 accepts.
      const double ratio = err / (tol_ * h);
      if (!std::isfinite(ratio)) {
        h_ = 0.25 * h;
        continue;
      }
      if (ratio <= 1.0) {
        t = (std::abs(t_end - t) <= h) ? t_end : t + hs;
        y.swap(y5_);
        k1_.swap(k7_);
        double factor =
            safety * std::pow(std::max(ratio, 1e-10), -alpha) *
            std::pow(std::max(prev_ratio_, 1e-4), beta);
        factor = std::clamp(factor, 0.2, 5.0);
        h_ = h * factor;
        prev_ratio_ = ratio;
      } else {
        const double factor =
            std::max(0.1, safety * std::pow(ratio, -1.0 / 4.0));
        h_ = h * factor;
      }
    }
  }

  std::size_t steps() const noexcept { return steps_; }

 private:
  static constexpr double safety = 0.9;
  static constexpr double alpha = 0.7 / 4.0;
  static constexpr double beta = 0.4 / 4.0;

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                          a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  void resize(std::size_t n) {
    for (State* s : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &y5_}) {
      if (s->size() != n) {
        s->assign(n, {});
        have_fsal_ = false;
      }
    }
  }

  void stage(double t, const State& y, double h) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
    rhs_(t + c2 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    rhs_(t + c3 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    rhs_(t + c4 * h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] +
                            a54 * k4_[i]);
    rhs_(t + c5 * h, tmp_, k5_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                            a64 * k4_[i] + a65 * k5_[i]);
    rhs_(t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n; ++i)
      y5_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] +
                           a75 * k5_[i] + a76 * k6_[i]);
    rhs_(t + h, y5_, k7_);
  }

  double initial_step(double t, const State& y, double dir) {
    // Hairer-Norsett-Wanner starting step heuristic.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double sc = 1.0 + std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1_[i]) / sc);
    }
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    for (std::size_t i = 0; i < y.size(); ++i)
      tmp_[i] = y[i] + dir * h0 * k1_[i];
    rhs_(t + dir * h0, tmp_, k2_);
    double d2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double sc = 1.0 + std::abs(y[i]);
      d2 = std::max(d2, std::abs(k2_[i] - k1_[i]) / sc);
    }
    d2 /= h0;
    const double h1 = std::max(d1, d2) <= 1e-15
                          ? std::max(1e-6, h0 * 1e-3)
                          : std::pow(0.01 * tol_ / std::max(d1, d2), 1.0 / 5.0);
    return std::min(100.0 * h0, h1);
  }

  Rhs rhs_;
  double tol_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
  double h_ = 0.0;
  double prev_ratio_ = 1e-4;
  bool have_fsal_ = false;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y5_;
};

}  // namespace ndpa::detail
