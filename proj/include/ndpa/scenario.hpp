#pragma once

// Scenario description and CSV table generation behind the command-line
// tool. Every table uses g*t as its first column.

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ndpa/amplitudes.hpp"
#include "ndpa/model.hpp"
#include "ndpa/oracle.hpp"

namespace ndpa {

/// a mode with Poisson photon statistics, b mode in vacuum.
struct PoissonAMode {
  complex alpha;
};

using StateSpec = std::variant<FockPair, CoherentPair, PoissonAMode>;

enum class ObservableKind {
  Probability,   // p_mn for each outcome
  Revival,       // p_{beta alpha} and |2 - e^{A0} - e^{A0*}|
  Transition,    // |<w,z|U_I|alpha,beta>|^2
  MandelQ,
  Correlation,   // f and F
  Quadrature,    // Var[X_theta]
  Uncertainty,   // Delta X_theta, Delta X_{theta+pi/2} and their product
  Rho,
  Eta,           // eta and the Yuen bound
  Mean,          // <n_a>, <n_b>
  Reduced,       // diagonal reduced densities of both modes
  Coefficients,  // A+, A0, A-, x, n0
};

const char* to_string(ObservableKind kind);
ObservableKind observable_from_string(const std::string& name);

struct ObservableSpec {
  ObservableKind kind = ObservableKind::Probability;
  std::vector<FockOutcome> outcomes;
  std::vector<long> levels{0, 1, 2};
  double theta = 0.0;
  CoherentPair final_state{};
  /// Coefficients only: integrate the equations of motion instead of using
  /// the closed form.
  bool use_ode = false;
  double tol = 1e-10;
};

struct Series {
  std::string label;
  ModelParams params;
  StateSpec state;
  ObservableSpec observable;
};

struct TimeGrid {
  double start = 0.0;
  double end = 10.0;
  int steps = 1001;

  /// Validates steps >= 2 and end > start.
  std::vector<double> points() const;
};

struct Scenario {
  std::string name;
  TimeGrid grid;
  std::vector<Series> series;
};

/// Keys: k2 (or omega_a, omega_b, omega, g), state = fock|coherent|poisson,
/// r, s, alpha, alpha_im, beta, beta_im, observable, outcomes (list of
/// "m:n" or "n"), levels, theta, w, w_im, z, z_im, tmin, tmax, steps,
/// solver = closed|ode, tol, label.
Scenario scenario_from_config(const std::map<std::string, std::string>& kv);
Scenario parse_scenario(const std::string& text);

std::vector<std::string> figure_names();
/// Throws std::invalid_argument for unknown names.
Scenario figure_preset(const std::string& name);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Throws std::invalid_argument when the observable does not fit the state.
Table run(const Scenario& scenario);

/// One scenario per value of `parameter` (k2, g, omega, omega_a, omega_b,
/// theta, alpha, beta, r, s, fock as "r:s"); columns are labelled
/// "<column>[<parameter>=<value>]".
Table sweep(const Scenario& scenario, const std::string& parameter,
            const std::vector<std::string>& values);

struct OracleCheckRow {
  double gt;
  int cutoff;
  /// Largest |closed form - oracle| over the compared probabilities.
  double prob_diff;
  /// Largest |closed form - oracle| / max(1, |moment|) over degree <= 4.
  double moment_diff;
  double deficit;
  double tolerance;
  bool pass;
};

/// Compares the closed forms of one series (its params and state) against
/// the truncated-space propagator at each g*t. Tolerance is 1e-8 plus the
/// oracle's own truncation estimate.
std::vector<OracleCheckRow> oracle_check(const Series& series,
                                         const std::vector<double>& gts,
                                         const OracleConfig& cfg);

/// Deterministic CSV: %.12g numbers, `inf`/`-inf`/`nan` for non-finite.
void write_csv(const Table& table, std::ostream& out);
std::string format_number(double value);

}  // namespace ndpa
