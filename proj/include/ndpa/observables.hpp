#pragma once

#include <array>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "ndpa/amplitudes.hpp"
#include "ndpa/wei_norman.hpp"

namespace ndpa {

/// a(t) = u a + v b^dagger (Heisenberg picture, harmonic pump).
/// b(t) = u' b + v' a^dagger with omega_b in place of omega_a.
struct BogoliubovCoefficients {
  complex u;
  complex v;
  double t;
};

BogoliubovCoefficients heisenberg_a(const ModelParams& params, double t);
BogoliubovCoefficients heisenberg_b(const ModelParams& params, double t);

using InitialProduct = std::variant<FockPair, CoherentPair>;

/// <a^dag^i b^dag^j a^k b^l> for i+j+k+l <= 4, with the mode operators in the
/// interaction frame: a_I(t) = e^{-A0*} (a - A-* b^dag).
class MomentTable {
 public:
  static constexpr int kMaxDegree = 4;

  /// Throws std::out_of_range for negative indices or degree above 4.
  complex operator()(int i, int j, int k, int l) const;
  void set(int i, int j, int k, int l, complex value);

  double mean_a() const { return (*this)(1, 0, 1, 0).real(); }
  double mean_b() const { return (*this)(0, 1, 0, 1).real(); }

 private:
  static std::size_t index(int i, int j, int k, int l);
  std::array<complex, 625> values_{};
};

MomentTable second_moments(const InitialProduct& state,
                           const WeiNormanCoefficients& c);

struct MeanPhotons {
  double a;
  double b;
};

/// mean_a = r + n0 (r+s+1), mean_b = s + n0 (r+s+1).
MeanPhotons mean_photon_fock(const DerivedScalars& d, FockPair f);

/// Mandel Q of the a mode for a Fock start. The r = 0, n0 = 0 limit is 0.
double mandel_q_fock(const DerivedScalars& d, FockPair f);
/// Undefined (nullopt) when <n_a> = 0.
std::optional<double> mandel_q_coherent(const MomentTable& moments);

struct CrossCorrelation {
  /// sqrt<a^dag^2 a^2> sqrt<b^dag^2 b^2> - <a^dag a b^dag b>; may be +-inf
  /// after overflow deep below threshold.
  double f;
  /// f / sqrt(<n_a><n_b>); nullopt when a mean vanishes.
  std::optional<double> normalized;
};

CrossCorrelation cross_correlation_fock(const DerivedScalars& d, FockPair f);
CrossCorrelation cross_correlation_general(const MomentTable& moments);

/// Quadrature X_theta = [(a_I + b_I) e^{i theta} + h.c.]/sqrt(2) with a
/// constant local-oscillator phase theta.
struct SqueezingKernel {
  double theta;
  double t_sq;
  double g_kernel;
  double h_kernel;
};

SqueezingKernel squeezing_kernel(const ModelParams& params, double theta,
                                 double t);

/// Fock: t_sq (r+s+1). Coherent: t_sq, whatever alpha and beta are.
double quadrature_variance(const SqueezingKernel& kernel,
                           const InitialProduct& state);

/// Delta X_theta * Delta X_{theta+pi/2} for the given state, evaluated
/// without the cancellation of a direct product of kernels.
double uncertainty_product(const ModelParams& params, double theta, double t,
                           const InitialProduct& state);

struct Extremum {
  double t;
  double value;
};

/// Local minima of f on [t0, t1]: grid bracketing with `grid` intervals,
/// then Brent refinement.
std::vector<Extremum> find_local_minima(const std::function<double(double)>& f,
                                        double t0, double t1, int grid);
std::vector<Extremum> find_local_maxima(const std::function<double(double)>& f,
                                        double t0, double t1, int grid);

struct SqueezingExtrema {
  std::vector<Extremum> minima;
  /// Mean spacing of the last minima found, in units of t.
  std::optional<double> observed_spacing;
  /// pi/(g|k|) below threshold; unset otherwise.
  std::optional<double> asymptotic_spacing;
};

SqueezingExtrema squeezing_extrema(const ModelParams& params, double theta,
                                   double t0, double t1, int grid = 4000);

/// Signal-to-noise value with an explicit infinity.
struct SnrValue {
  double value = 0.0;
  bool infinite = false;

  static SnrValue finite(double v) { return {v, false}; }
  static SnrValue infinity() { return {0.0, true}; }
  /// +inf as a double, for plotting.
  double as_double() const;
};

/// rho_a = <n_a>/Delta n_a for a Fock start.
SnrValue snr_rho_fock(const DerivedScalars& d, FockPair f);

enum class ExtremumKind { LocalMax, GlobalMin, GlobalMax };

const char* to_string(ExtremumKind kind);

struct SnrExtremum {
  double t;
  double value;
  ExtremumKind kind;
};

/// Analytic extrema of rho_a(t) on (0, t_max] above threshold: the
/// half-period points gt sqrt(k^2-1) = (2j+1) pi/2, and, when
/// 0 < r/(s-r+1) < 1/(k^2-1), the minima where n0 = r/(s-r+1). Sorted by
/// time. Throws RegimeError unless k^2 > 1.
std::vector<SnrExtremum> snr_rho_extrema(const ModelParams& params,
                                         FockPair f, double t_max);

/// rho_a at the half-period points: (r k^2 + s + 1)/sqrt(k^2 (2rs+r+s+1)).
double snr_rho_half_period(double k_squared, FockPair f);

struct SnrReport {
  SnrValue rho;
  std::vector<SnrExtremum> extrema;
  double eta = 0.0;
  double yuen_bound = 0.0;
};

SnrReport snr_eta_coherent(const WeiNormanCoefficients& c,
                           const DerivedScalars& d, const CoherentPair& pair);
/// eta vanishes for a Fock start; rho from the closed form.
SnrReport snr_eta_fock(const DerivedScalars& d, FockPair f);

struct DiagonalizationResult {
  double omega_plus;
  double omega_minus;
  bool stable;
  std::optional<double> omega_A;
  std::optional<double> omega_B;
  std::optional<double> omega_0;
  std::optional<double> squeeze_r;
  /// pi/2 - omega t.
  std::optional<double> squeeze_phi;
};

DiagonalizationResult instantaneous_diagonalization(const ModelParams& params,
                                                    double t = 0.0);

}  // namespace ndpa
