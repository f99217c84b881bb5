#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace ndpa {

using complex = std::complex<double>;

/// Two-mode amplifier parameters. Detuning and k are always derived from the
/// primitive frequencies, never stored.
class ModelParams {
 public:
  /// Throws std::invalid_argument unless g > 0, omega_a > 0, omega_b > 0.
  ModelParams(double omega_a, double omega_b, double g, double omega);

  /// Parameters with the pump tuned so that k = Omega/(2g) takes the given
  /// value.
  static ModelParams from_k(double k, double g = 1.0, double omega_a = 1.0,
                            double omega_b = 1.0);
  /// Same, with k = +sqrt(k2) (or -sqrt(k2) when `negative_detuning`).
  static ModelParams from_k_squared(double k2, double g = 1.0,
                                    double omega_a = 1.0, double omega_b = 1.0,
                                    bool negative_detuning = false);

  double omega_a() const noexcept { return omega_a_; }
  double omega_b() const noexcept { return omega_b_; }
  double g() const noexcept { return g_; }
  double omega() const noexcept { return omega_; }

  double detuning() const noexcept { return omega_ - omega_a_ - omega_b_; }
  double k() const noexcept { return detuning() / (2.0 * g_); }
  double k_squared() const noexcept { return k() * k(); }

  /// Physical time corresponding to a dimensionless g*t.
  double time_at(double gt) const noexcept { return gt / g_; }

  bool operator==(const ModelParams&) const = default;

 private:
  double omega_a_;
  double omega_b_;
  double g_;
  double omega_;
};

/// Flat `key = value` text with keys omega_a, omega_b, omega, g.
std::string to_config(const ModelParams& params);
ModelParams params_from_config(const std::string& text);

/// Parses `key = value` lines; `#` starts a comment. Throws on malformed
/// lines.
std::map<std::string, std::string> parse_key_values(const std::string& text);

enum class RegimeTag { Sub, Critical, Super };

struct Regime {
  RegimeTag tag;
  double epsilon;
};

inline constexpr double kDefaultRegimeEpsilon = 1e-8;

Regime classify_regime(const ModelParams& params,
                       double epsilon = kDefaultRegimeEpsilon);
const char* to_string(RegimeTag tag);

// ---------------------------------------------------------------------------
// Pump profiles

enum class Interpolation { Linear, CubicHermite };

struct HarmonicPump {
  double g;
  double omega;
};

struct TabulatedPump {
  std::vector<double> times;
  std::vector<complex> values;
  Interpolation rule = Interpolation::CubicHermite;
};

struct CustomPump {
  std::function<complex(double)> evaluate;
};

/// Classical pump g(t). Only the harmonic kind admits closed-form
/// downstream results; the others go through the ODE solver.
class PumpProfile {
 public:
  static PumpProfile harmonic(double g, double omega);
  static PumpProfile harmonic(const ModelParams& params);
  /// Samples must be strictly increasing in time (at least two).
  static PumpProfile tabulated(std::vector<double> times,
                               std::vector<complex> values,
                               Interpolation rule = Interpolation::CubicHermite);
  static PumpProfile custom(std::function<complex(double)> evaluate);

  complex operator()(double t) const;

  bool is_harmonic() const noexcept {
    return std::holds_alternative<HarmonicPump>(kind_);
  }
  const HarmonicPump* as_harmonic() const noexcept {
    return std::get_if<HarmonicPump>(&kind_);
  }

 private:
  explicit PumpProfile(std::variant<HarmonicPump, TabulatedPump, CustomPump> k)
      : kind_(std::move(k)) {}
  std::variant<HarmonicPump, TabulatedPump, CustomPump> kind_;
};

// ---------------------------------------------------------------------------
// Revivals

struct RevivalSpec {
  int n;
  int p;       // 0 for Fock revivals
  double t_rev;  // physical time
};

/// t_rev = n*pi / (g*sqrt(k^2-1)) for n = 1..n_max. Throws RegimeError
/// unless k^2 > 1 + epsilon.
std::vector<RevivalSpec> fock_revival_times(const ModelParams& params,
                                            int n_max);

enum class RevivalKind {
  /// n and p of equal parity: p_{beta alpha} returns to one.
  Full,
  /// Only the A_-/A_+ factor (and |T_theta|^2) is periodic; parity unchecked.
  SecondFactor,
};

struct CoherentRevival {
  int n;
  int p;
  double k_squared;  // 1 / (1 - (p/n)^2)
  double gt_rev;     // pi * sqrt(n^2 - p^2)
  RevivalKind kind;
  /// False for p == 0, where k^2 = 1 sits on the critical boundary.
  bool super_regime;
};

/// Rational detuning giving coherent-state revivals. Throws
/// std::domain_error unless n > p >= 0, ParityError for mismatched parity
/// when `kind == RevivalKind::Full`.
CoherentRevival coherent_revival_params(int n, int p,
                                        RevivalKind kind = RevivalKind::Full);

}  // namespace ndpa
