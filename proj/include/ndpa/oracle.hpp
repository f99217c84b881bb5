#pragma once

// Brute-force propagation on a truncated two-mode Fock space. The coupling
// conserves q = n_a - n_b, so the state is stored block by block.

#include <algorithm>
#include <map>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ndpa/amplitudes.hpp"
#include "ndpa/model.hpp"

namespace ndpa {

enum class OracleMethod {
  /// Harmonic pumps: Chebyshev expansion of the rotating-frame propagator;
  /// other pumps: adaptive Runge-Kutta.
  Automatic,
  /// Harmonic pumps only: full eigendecomposition of each block.
  Spectral,
  /// Adaptive Runge-Kutta on the interaction-picture Hamiltonian.
  Integrate,
};

struct OracleConfig {
  /// Photons per mode; 0 selects the cutoff automatically.
  int cutoff = 0;
  double tol = 1e-12;
  double tail_limit = 1e-10;
  OracleMethod method = OracleMethod::Automatic;
  /// Intermediate times at which the edge population is sampled.
  int samples = 32;
  int max_cutoff = 1 << 13;
};

/// Amplitudes over {(n_a, n_b) : n_a, n_b <= cutoff}, grouped by q.
class TruncatedState {
 public:
  explicit TruncatedState(int cutoff);

  int cutoff() const noexcept { return cutoff_; }

  /// First n_a in block q and the block dimension.
  int first_na(int q) const;
  int block_size(int q) const;

  complex amplitude(int na, int nb) const;
  void set_amplitude(int na, int nb, complex value);

  const std::map<int, Eigen::VectorXcd>& blocks() const noexcept {
    return blocks_;
  }
  Eigen::VectorXcd& block(int q);

  double norm_squared() const;
  /// 1 - |psi|^2, clamped at zero.
  double norm_deficit() const;
  /// Weight on states with n_a = cutoff or n_b = cutoff.
  double edge_population() const;
  /// Largest edge population seen during the evolution that produced this
  /// state (sampled at intermediate times).
  double peak_edge_population() const noexcept { return peak_edge_; }
  void record_edge_population(double value) {
    peak_edge_ = std::max(peak_edge_, value);
  }

 private:
  int cutoff_;
  double peak_edge_ = 0.0;
  std::map<int, Eigen::VectorXcd> blocks_;
};

/// K+ = a^dag b^dag and K- = a b restricted to block q, plus the diagonal of
/// K0 = (n_a + n_b + 1)/2. Rows and columns run over n_a from first_na.
struct BlockGenerators {
  int q;
  int first_na;
  Eigen::SparseMatrix<double> k_plus;
  Eigen::SparseMatrix<double> k_minus;
  Eigen::VectorXd k_zero;
};

BlockGenerators build_generators(int cutoff, int q);

using OracleInitial = std::variant<FockPair, CoherentPair, PureAModeState>;

/// Projection of the initial state onto the truncated space.
TruncatedState make_initial(const OracleInitial& initial, int cutoff);

/// psi(t) = U_I(t) psi(0) in the interaction picture. Throws
/// TruncationError when the deficit or the peak edge population exceeds
/// `cfg.tail_limit`, IntegrationError on integrator failure.
TruncatedState evolve_truncated(const PumpProfile& pump,
                                const ModelParams& params,
                                const TruncatedState& initial, double t,
                                const OracleConfig& cfg = {});

struct OracleRun {
  TruncatedState state;
  /// Largest probability change between the last two cutoffs.
  double change;
};

/// Doubles the cutoff from max(16, 4 * mean_hint) (or cfg.cutoff if set)
/// until probabilities move by less than 1e-9. A negative hint uses the
/// initial mean photon number.
OracleRun evolve_converged(const PumpProfile& pump, const ModelParams& params,
                           const OracleInitial& initial, double t,
                           const OracleConfig& cfg = {},
                           double mean_hint = -1.0);

/// |<n_b = m, n_a = n | psi>|^2.
double oracle_probability(const TruncatedState& state, FockOutcome outcome);
/// <a^dag^i b^dag^j a^k b^l>.
complex oracle_moment(const TruncatedState& state, int i, int j, int k, int l);
/// <w, z | psi> for a coherent final state (w on mode a).
complex oracle_coherent_overlap(const TruncatedState& state,
                                const CoherentPair& final_state);
double oracle_marginal_a(const TruncatedState& state, int n);
double oracle_marginal_b(const TruncatedState& state, int m);

}  // namespace ndpa
