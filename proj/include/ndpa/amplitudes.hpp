#pragma once

#include <complex>
#include <vector>

#include "ndpa/series.hpp"
#include "ndpa/wei_norman.hpp"

namespace ndpa {

/// Initial two-mode Fock state |r>_a |s>_b.
struct FockPair {
  int r;
  int s;
};

/// Final Fock state <m|_b <n|_a. Amplitudes vanish unless m = s - r + n.
struct FockOutcome {
  int m;
  int n;
};

/// Coherent state |alpha>_a |beta>_b; also used for final states (w, z).
struct CoherentPair {
  complex alpha;
  complex beta;
};

/// Pure a-mode state sum_s sqrt(P_s) e^{i phi_s} |s>, with the b mode in
/// vacuum.
class PureAModeState {
 public:
  /// Throws std::invalid_argument unless probabilities are non-negative and
  /// sum to one within 1e-12.
  PureAModeState(std::vector<double> probs, std::vector<double> phases);

  /// Poisson-distributed photon numbers (coherent amplitude alpha), truncated
  /// where the remaining weight is below 1e-17.
  static PureAModeState poisson(complex alpha);
  static PureAModeState fock(int n);

  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::vector<double>& phases() const noexcept { return phases_; }
  double prob(long s) const noexcept {
    return s >= 0 && static_cast<std::size_t>(s) < probs_.size()
               ? probs_[static_cast<std::size_t>(s)]
               : 0.0;
  }
  double mean() const;

 private:
  std::vector<double> probs_;
  std::vector<double> phases_;
};

/// c_mn(t; r, s) = <m,n| U_I(t) |r,s>. Evaluated as a log-domain sum so
/// that photon numbers in the thousands are fine.
complex fock_amplitude(const WeiNormanCoefficients& c, FockPair initial,
                       FockOutcome outcome);

/// p_nn(t) = y^n / x for the vacuum start (diagonal only).
double vacuum_prob(const DerivedScalars& d, long n);

/// p_nn(t) = y^{n-1} (n - n0)^2 / x^3 for the |1,1> start.
double fock11_prob(const DerivedScalars& d, long n);
/// <n_a(t)> for the |1,1> start: 1 + 3 n0.
double fock11_mean_a(const DerivedScalars& d);

/// p_mn(t) for |psi>_a |0>_b; zero when n < m. Phases never enter.
double amode_prob(const DerivedScalars& d, const PureAModeState& psi,
                  FockOutcome outcome);

/// Diagonal reduced density matrix element of the b mode, p_m(b; t).
double reduced_density_b(const DerivedScalars& d, const PureAModeState& psi,
                         long m);
/// Diagonal reduced density matrix element of the a mode, p_n(a; t).
double reduced_density_a(const DerivedScalars& d, const PureAModeState& psi,
                         long n);

/// Total probability over all outcomes, summed until a geometric envelope
/// certifies that the omitted tail is below `tail_tol`.
SeriesSum vacuum_total(const DerivedScalars& d, double tail_tol = 1e-12);
SeriesSum fock11_total(const DerivedScalars& d, double tail_tol = 1e-12);
/// Sum of reduced_density_a over n.
SeriesSum amode_total(const DerivedScalars& d, const PureAModeState& psi,
                      double tail_tol = 1e-12);

/// Temperature of the thermal form exp(-omega/T) = y. Returns 0 at y = 0;
/// throws std::domain_error for y < 0 or y >= 1.
double effective_temperature(double y, double omega);

/// |<z,w| U_I(t) |alpha,beta>|^2 where `final_state` = (w, z) is again given
/// as (a mode, b mode).
double coherent_transition_prob(const WeiNormanCoefficients& c,
                                const CoherentPair& initial,
                                const CoherentPair& final_state);

/// <m,n| U_I(t) |alpha,beta>, by superposing Fock amplitudes over the
/// Poisson-weighted initial photon numbers.
complex coherent_fock_amplitude(const WeiNormanCoefficients& c,
                                const CoherentPair& initial, FockOutcome outcome);

struct RevivalProbability {
  double prob;
  /// |2 - e^{A0} - e^{A0*}|; near-zeros mark the non-revival peaks.
  double diagnostic;
};

/// Return probability p_{beta alpha}(t) for the initial coherent pair.
RevivalProbability coherent_revival_prob(const WeiNormanCoefficients& c,
                                         const CoherentPair& pair);

struct MeanNumbers {
  double a;
  double b;
};

MeanNumbers coherent_mean_numbers(const WeiNormanCoefficients& c,
                                  const DerivedScalars& d,
                                  const CoherentPair& pair);

}  // namespace ndpa
