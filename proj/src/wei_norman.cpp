#include "ndpa/wei_norman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ndpa/detail/dormand_prince.hpp"

namespace ndpa {

namespace {

template <class Real>
Real log_cosh(Real a) {
  a = std::abs(a);
  return a + std::log1p(std::exp(-2 * a)) - std::numbers::ln2_v<Real>;
}

// Continuous arg of cos(u) - i c sin(u): decreases by pi*sign(c) per half
// period of u.
template <class Real>
Real unwrapped_arg(Real u, Real c) {
  const Real pi = std::numbers::pi_v<Real>;
  const Real m = std::nearbyint(u / pi);
  const Real reduced = u - m * pi;
  const Real sign = c < 0 ? Real(-1) : Real(1);
  return std::atan2(-c * std::sin(reduced), std::cos(reduced)) - m * pi * sign;
}

template <class Real>
BasicCoefficients<Real> analytic(const ModelParams& params, Real t,
                                 double epsilon) {
  using C = std::complex<Real>;
  const Regime regime = classify_regime(params, epsilon);
  const Real gt = static_cast<Real>(params.g()) * t;
  const Real k = static_cast<Real>(params.omega() - params.omega_a() -
                                   params.omega_b()) /
                 (2 * static_cast<Real>(params.g()));
  const Real omega_t = 2 * static_cast<Real>(params.g()) * k * t;

  C a_minus;
  C log_d;
  switch (regime.tag) {
    case RegimeTag::Sub: {
      const Real s = std::sqrt(1 - k * k);
      const Real a = gt * s;
      const Real tau = std::tanh(a) / s;
      const C denom(1, -k * tau);
      a_minus = tau / denom;
      log_d = log_cosh(a) + std::log(denom);
      break;
    }
    case RegimeTag::Critical: {
      const Real sign = k < 0 ? Real(-1) : Real(1);
      const C denom(1, -sign * gt);
      a_minus = gt / denom;
      log_d = std::log(denom);
      break;
    }
    case RegimeTag::Super: {
      const Real s = std::sqrt(k * k - 1);
      const Real u = gt * s;
      const Real sn = std::sin(u) / s;
      const Real cn = std::cos(u);
      a_minus = sn / C(cn, -k * sn);
      log_d = C(std::log1p(sn * sn) / 2, unwrapped_arg(u, k / s));
      break;
    }
  }

  BasicCoefficients<Real> c;
  c.t = t;
  c.regime = regime.tag;
  c.a_minus = a_minus;
  c.a_zero = -log_d - C(0, omega_t / 2);
  c.a_plus = -std::exp(C(0, -omega_t)) * a_minus;
  return c;
}

}  // namespace

RegimeAngles regime_angles(const ModelParams& params, double epsilon) {
  const double k = params.k();
  RegimeAngles out;
  switch (classify_regime(params, epsilon).tag) {
    case RegimeTag::Sub:
      out.gamma = std::atan(k / std::sqrt(1.0 - k * k));
      break;
    case RegimeTag::Super:
      out.delta = std::atanh(std::sqrt(k * k - 1.0) / k);
      break;
    case RegimeTag::Critical:
      break;
  }
  return out;
}

KernelTerms kernel_terms(const ModelParams& params, double t, double epsilon) {
  const RegimeTag tag = classify_regime(params, epsilon).tag;
  const double gt = params.g() * t;
  const double k = params.k();
  KernelTerms out{};
  out.regime = tag;
  out.k = k;
  out.phase = params.detuning() * t;
  switch (tag) {
    case RegimeTag::Sub: {
      const double s = std::sqrt(1.0 - k * k);
      out.sn = std::sinh(gt * s) / s;
      out.cn = std::cosh(gt * s);
      break;
    }
    case RegimeTag::Critical:
      out.sn = gt;
      out.cn = 1.0;
      out.k = k < 0 ? -1.0 : 1.0;
      break;
    case RegimeTag::Super: {
      const double s = std::sqrt(k * k - 1.0);
      out.sn = std::sin(gt * s) / s;
      out.cn = std::cos(gt * s);
      break;
    }
  }
  return out;
}

WeiNormanCoefficients solve_analytic(const ModelParams& params, double t,
                                     double epsilon) {
  return analytic<double>(params, t, epsilon);
}

ExtendedCoefficients solve_analytic_extended(const ModelParams& params,
                                             long double t, double epsilon) {
  return analytic<long double>(params, t, epsilon);
}

std::vector<WeiNormanCoefficients> solve_ode(const PumpProfile& pump,
                                             const ModelParams& params,
                                             std::span<const double> t_grid,
                                             double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (t_grid.empty()) return {};
  if (t_grid.front() != 0.0) {
    throw std::invalid_argument("time grid must start at 0");
  }
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw std::invalid_argument("time grid must be non-decreasing");
  }
  const double sum_freq = params.omega_a() + params.omega_b();
  auto rhs = [&pump, sum_freq](double t,
                               const detail::DormandPrince45::State& y,
                               detail::DormandPrince45::State& dy) {
    const complex gtilde = pump(t) * std::exp(complex(0.0, -sum_freq * t));
    dy[0] = gtilde * y[0] * y[0] - std::conj(gtilde);
    dy[1] = gtilde * y[0];
    dy[2] = gtilde * std::exp(2.0 * y[1]);
  };
  detail::DormandPrince45 stepper(rhs, tol);

  const RegimeTag tag = classify_regime(params).tag;
  detail::DormandPrince45::State y(3, complex{});
  double t = 0.0;
  std::vector<WeiNormanCoefficients> out;
  out.reserve(t_grid.size());
  for (double node : t_grid) {
    stepper.integrate_to(t, y, node);
    out.push_back({node, y[0], y[2], y[1], tag});
  }
  return out;
}

double UnitarityResiduals::max() const { return std::max({r1, r2, r3}); }

template <class Real>
UnitarityResiduals unitarity_residuals(const BasicCoefficients<Real>& c) {
  using C = std::complex<Real>;
  const C denom = std::exp(Real(2) * c.a_zero) - c.a_minus * c.a_plus;
  UnitarityResiduals r;
  r.r1 = static_cast<double>(std::abs(std::conj(c.a_plus) + c.a_minus / denom));
  r.r2 = static_cast<double>(std::abs(std::conj(c.a_minus) + c.a_plus / denom));
  r.r3 = static_cast<double>(std::abs(
      std::exp(-2 * c.a_zero.real()) * (1 - std::norm(c.a_minus)) - 1));
  return r;
}

template UnitarityResiduals unitarity_residuals(
    const BasicCoefficients<double>&);
template UnitarityResiduals unitarity_residuals(
    const BasicCoefficients<long double>&);

DerivedScalars derived_scalars(const ModelParams& params, double t,
                               double epsilon) {
  const KernelTerms kt = kernel_terms(params, t, epsilon);
  DerivedScalars d{};
  if (kt.regime == RegimeTag::Sub) {
    const double s = std::sqrt(1.0 - params.k_squared());
    const double a = std::abs(params.g() * t * s);
    if (a > kLogDomainThreshold) {
      const double log_sinh =
          a - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * a));
      d.log_n0 = 2.0 * (log_sinh - std::log(s));
      const double inv_n0 = std::exp(-d.log_n0);
      d.log_x = d.log_n0 + std::log1p(inv_n0);
      d.n0 = std::exp(d.log_n0);
      d.x = std::exp(d.log_x);
      d.y = 1.0 / (1.0 + inv_n0);
      return d;
    }
  }
  d.n0 = kt.sn * kt.sn;
  d.x = 1.0 + d.n0;
  d.y = d.n0 / d.x;
  d.log_x = std::log1p(d.n0);
  d.log_n0 = d.n0 > 0.0 ? 2.0 * std::log(std::abs(kt.sn))
                        : -std::numeric_limits<double>::infinity();
  return d;
}

DerivedScalars derived_scalars(const WeiNormanCoefficients& c) {
  DerivedScalars d{};
  d.log_x = -2.0 * c.a_zero.real();
  d.x = std::exp(d.log_x);
  d.y = std::norm(c.a_minus);
  d.n0 = d.x * d.y;
  d.log_n0 = d.y > 0.0 ? d.log_x + std::log(d.y)
                       : -std::numeric_limits<double>::infinity();
  return d;
}

}  // namespace ndpa
