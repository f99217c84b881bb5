#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "ndpa/model.hpp"

namespace ndpa {

/// Coefficients of U_I(t) = exp(A+ K+) exp(2 A0 K0) exp(A- K-).
///
/// The imaginary part of `a_zero` is continuous in t (no 2*pi jumps), so
/// exp(c * a_zero) is safe for non-integer c as well.
template <class Real>
struct BasicCoefficients {
  using value_type = std::complex<Real>;
  Real t{};
  value_type a_plus{};
  value_type a_minus{};
  value_type a_zero{};
  RegimeTag regime = RegimeTag::Sub;
};

using WeiNormanCoefficients = BasicCoefficients<double>;
/// Extended-precision variant (x87 80-bit on x86-64), used where residuals
/// are ill-conditioned in double.
using ExtendedCoefficients = BasicCoefficients<long double>;

/// Regime angles: tan(gamma) = k/sqrt(1-k^2) below threshold,
/// coth(delta) = k/sqrt(k^2-1) above. Neither is set at the critical point.
struct RegimeAngles {
  std::optional<double> gamma;
  std::optional<double> delta;
};

RegimeAngles regime_angles(const ModelParams& params,
                           double epsilon = kDefaultRegimeEpsilon);

/// Real pair behind every closed form for the harmonic pump:
///   sn = sinh(gt s)/s, cn = cosh(gt s)   with s = sqrt(1-k^2)  (k^2 < 1)
///   sn = gt,           cn = 1                                  (k^2 = 1)
///   sn = sin(gt s)/s,  cn = cos(gt s)    with s = sqrt(k^2-1)  (k^2 > 1)
/// With D = cn - i k sn one has A- = sn/D, A0 = -log D - i Omega t/2,
/// n0 = sn^2 and x = |D|^2 = 1 + sn^2.
struct KernelTerms {
  double sn;
  double cn;
  /// Detuning ratio actually used in D (exactly +-1 inside the critical band).
  double k;
  /// Omega * t.
  double phase;
  RegimeTag regime;
};

KernelTerms kernel_terms(const ModelParams& params, double t,
                         double epsilon = kDefaultRegimeEpsilon);

/// Closed-form coefficients for the harmonic pump g e^{i omega t}. Negative t
/// gives the time-reversed evolution.
WeiNormanCoefficients solve_analytic(const ModelParams& params, double t,
                                     double epsilon = kDefaultRegimeEpsilon);
ExtendedCoefficients solve_analytic_extended(
    const ModelParams& params, long double t,
    double epsilon = kDefaultRegimeEpsilon);

/// Integrates dA+/dt = g~ A+^2 - g~*, dA0/dt = g~ A+, dA-/dt = g~ e^{2 A0}
/// with g~(t) = g(t) e^{-i(omega_a+omega_b)t}, A(0) = 0. The grid must start
/// at 0 and be non-decreasing; one result per node. Throws IntegrationError.
std::vector<WeiNormanCoefficients> solve_ode(const PumpProfile& pump,
                                             const ModelParams& params,
                                             std::span<const double> t_grid,
                                             double tol);

struct UnitarityResiduals {
  double r1;
  double r2;
  double r3;
  double max() const;
};

/// r1 = |A+* + A-/(e^{2A0} - A-A+)|, r2 = |A-* + A+/(e^{2A0} - A-A+)|,
/// r3 = |e^{-A0-A0*}(1 - |A-|^2) - 1|.
template <class Real>
UnitarityResiduals unitarity_residuals(const BasicCoefficients<Real>& c);

/// x = e^{-2 Re A0}, y = |A-|^2 = 1 - 1/x, n0 = x y.
///
/// The log fields are always finite-or-(-inf) and stay accurate after x or
/// n0 overflow (deep below threshold, gt sqrt(1-k^2) > ~355).
struct DerivedScalars {
  double x;
  double y;
  double n0;
  double log_x;
  double log_n0;  // -inf when n0 == 0

  double log_y() const { return log_n0 - log_x; }
};

inline constexpr double kLogDomainThreshold = 30.0;

DerivedScalars derived_scalars(const ModelParams& params, double t,
                               double epsilon = kDefaultRegimeEpsilon);
/// From arbitrary (e.g. numerically integrated) coefficients.
DerivedScalars derived_scalars(const WeiNormanCoefficients& c);

}  // namespace ndpa
