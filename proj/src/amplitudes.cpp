#include "ndpa/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ndpa/series.hpp"

namespace ndpa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// n * log(v) with the convention 0 * log(0) = 0.
double pow_log(long n, double log_v) { return n == 0 ? 0.0 : n * log_v; }

complex pow_log(long n, complex log_v) {
  return n == 0 ? complex{} : static_cast<double>(n) * log_v;
}

}  // namespace

PureAModeState::PureAModeState(std::vector<double> probs,
                               std::vector<double> phases)
    : probs_(std::move(probs)), phases_(std::move(phases)) {
  if (probs_.empty()) throw std::invalid_argument("empty probability list");
  if (phases_.empty()) phases_.assign(probs_.size(), 0.0);
  if (phases_.size() != probs_.size())
    throw std::invalid_argument("phase and probability lists differ in size");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("probabilities must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("probabilities must sum to 1");
}

PureAModeState PureAModeState::poisson(complex alpha) {
  const double mean = std::norm(alpha);
  const double phase = std::arg(alpha);
  std::vector<double> probs;
  std::vector<double> phases;
  double total = 0.0;
  for (long s = 0;; ++s) {
    const double lp = mean == 0.0 ? (s == 0 ? 0.0 : kNegInf)
                                  : -mean + s * std::log(mean) -
                                        log_factorial(s);
    const double p = std::exp(lp);
    probs.push_back(p);
    phases.push_back(phase * static_cast<double>(s));
    total += p;
    if (static_cast<double>(s) > mean && 1.0 - total < 1e-17) break;
    if (s > 100000) throw std::domain_error("Poisson mean too large");
  }
  for (double& p : probs) p /= total;
  return PureAModeState(std::move(probs), std::move(phases));
}

PureAModeState PureAModeState::fock(int n) {
  if (n < 0) throw std::invalid_argument("negative photon number");
  std::vector<double> probs(static_cast<std::size_t>(n) + 1, 0.0);
  probs.back() = 1.0;
  return PureAModeState(std::move(probs), {});
}

double PureAModeState::mean() const {
  double m = 0.0;
  for (std::size_t s = 0; s < probs_.size(); ++s)
    m += static_cast<double>(s) * probs_[s];
  return m;
}

complex fock_amplitude(const WeiNormanCoefficients& c, FockPair initial,
                       FockOutcome outcome) {
  const long r = initial.r;
  const long s = initial.s;
  const long m = outcome.m;
  const long n = outcome.n;
  if (r < 0 || s < 0 || m < 0 || n < 0) return {};
  if (m != s - r + n) return {};

  const bool zero_minus = c.a_minus == complex{};
  const bool zero_plus = c.a_plus == complex{};
  const complex log_minus = zero_minus ? complex{} : std::log(c.a_minus);
  const complex log_plus = zero_plus ? complex{} : std::log(c.a_plus);

  std::vector<complex> logs;
  for (long k = std::max(0L, r - n); k <= std::min(r, s); ++k) {
    const long j = n + k - r;
    if ((zero_minus && k > 0) || (zero_plus && j > 0)) continue;
    logs.push_back(-2.0 * static_cast<double>(k) * c.a_zero +
                   pow_log(k, log_minus) + pow_log(j, log_plus) -
                   log_factorial(r - k) - log_factorial(s - k) -
                   log_factorial(k) - log_factorial(j));
  }
  if (logs.empty()) return {};

  double top = kNegInf;
  for (const auto& l : logs) top = std::max(top, l.real());
  complex sum{};
  for (const auto& l : logs) sum += std::exp(l - top);

  const complex prefactor =
      0.5 * (log_factorial(r) + log_factorial(s) + log_factorial(m) +
             log_factorial(n)) +
      static_cast<double>(r + s + 1) * c.a_zero + top;
  return std::exp(prefactor) * sum;
}

double vacuum_prob(const DerivedScalars& d, long n) {
  if (n < 0) return 0.0;
  return std::exp(pow_log(n, d.log_y()) - d.log_x);
}

double fock11_prob(const DerivedScalars& d, long n) {
  if (n < 0) return 0.0;
  if (n == 0) return std::exp(d.log_y() - d.log_x);
  // |c_nn|^2 = y^{n-1} (n - n0)^2 / x^3 = y^{n-1} (n/x - y)^2 / x
  const double n_over_x = std::exp(std::log(static_cast<double>(n)) - d.log_x);
  const double diff = n_over_x - d.y;
  return diff * diff * std::exp(pow_log(n - 1, d.log_y()) - d.log_x);
}

double fock11_mean_a(const DerivedScalars& d) { return 1.0 + 3.0 * d.n0; }

double amode_prob(const DerivedScalars& d, const PureAModeState& psi,
                  FockOutcome outcome) {
  const long m = outcome.m;
  const long n = outcome.n;
  if (m < 0 || n < m) return 0.0;
  const double p = psi.prob(n - m);
  if (p == 0.0) return 0.0;
  const double lp = std::log(p) + log_binomial(n, m) +
                    pow_log(m, d.log_y()) -
                    static_cast<double>(n - m + 1) * d.log_x;
  return std::exp(lp);
}

double reduced_density_b(const DerivedScalars& d, const PureAModeState& psi,
                         long m) {
  if (m < 0) return 0.0;
  const auto& probs = psi.probs();
  double sum = 0.0;
  for (std::size_t l = 0; l < probs.size(); ++l) {
    if (probs[l] == 0.0) continue;
    const long ll = static_cast<long>(l);
    sum += std::exp(std::log(probs[l]) + log_binomial(ll + m, m) +
                    pow_log(m, d.log_y()) -
                    static_cast<double>(ll + 1) * d.log_x);
  }
  return sum;
}

double reduced_density_a(const DerivedScalars& d, const PureAModeState& psi,
                         long n) {
  if (n < 0) return 0.0;
  double sum = 0.0;
  const long support = static_cast<long>(psi.probs().size());
  for (long l = 0; l < support && l <= n; ++l) {
    const long m = n - l;
    const double p = psi.prob(l);
    if (p == 0.0) continue;
    if (m > 0 && d.n0 == 0.0) continue;
    sum += std::exp(std::log(p) + log_binomial(n, m) +
                    pow_log(m, d.log_n0) -
                    static_cast<double>(n + 1) * d.log_x);
  }
  return sum;
}

SeriesSum vacuum_total(const DerivedScalars& d, double tail_tol) {
  const double y = d.y;
  return sum_with_tail_bound([&](std::size_t n) { return vacuum_prob(d, long(n)); },
                             [&](std::size_t n) { return vacuum_prob(d, long(n)); },
                             [&](std::size_t) { return y; }, tail_tol);
}

SeriesSum fock11_total(const DerivedScalars& d, double tail_tol) {
  // p_{n+1}/p_n = y ((n+1-n0)/(n-n0))^2, which decreases once n > n0.
  auto ratio = [&](std::size_t n) {
    const double u = static_cast<double>(n) - d.n0;
    if (u < 1.0) return 1.0;
    return d.y * ((u + 1.0) / u) * ((u + 1.0) / u);
  };
  return sum_with_tail_bound([&](std::size_t n) { return fock11_prob(d, long(n)); },
                             [&](std::size_t n) { return fock11_prob(d, long(n)); },
                             ratio, tail_tol);
}

SeriesSum amode_total(const DerivedScalars& d, const PureAModeState& psi,
                      double tail_tol) {
  // Each term with l = n - m photons from psi grows by y (n+1)/(n+1-l) per
  // step in n; the largest l bounds them all.
  const double top = static_cast<double>(psi.probs().size() - 1);
  auto ratio = [&](std::size_t n) {
    const double nn = static_cast<double>(n);
    if (nn < top) return 1.0;
    return d.y * (nn + 1.0) / (nn + 1.0 - top);
  };
  auto term = [&](std::size_t n) { return reduced_density_a(d, psi, long(n)); };
  return sum_with_tail_bound(term, term, ratio, tail_tol);
}

double effective_temperature(double y, double omega) {
  if (y == 0.0) return 0.0;
  if (!(y > 0.0) || !(y < 1.0))
    throw std::domain_error("effective temperature needs 0 < y < 1");
  return omega / -std::log(y);
}

double coherent_transition_prob(const WeiNormanCoefficients& c,
                                const CoherentPair& initial,
                                const CoherentPair& final_state) {
  const complex alpha = initial.alpha;
  const complex beta = initial.beta;
  const complex w = final_state.alpha;
  const complex z = final_state.beta;
  const complex e0 = std::exp(c.a_zero);
  const complex exponent =
      c.a_zero + c.a_minus * alpha * beta +
      c.a_plus * std::conj(w) * std::conj(z) -
      0.5 * (std::norm(w) + std::norm(z) + std::norm(alpha) +
             std::norm(beta)) +
      e0 * (std::conj(w) * alpha + std::conj(z) * beta);
  return std::exp(2.0 * exponent.real());
}

complex coherent_fock_amplitude(const WeiNormanCoefficients& c,
                                const CoherentPair& initial, FockOutcome outcome) {
  const double na = std::abs(initial.alpha);
  const double nb = std::abs(initial.beta);
  // Poisson weights beyond these are far below double resolution.
  const int r_max = static_cast<int>(std::ceil(na * na + 10.0 * na + 25.0));
  const int s_max = static_cast<int>(std::ceil(nb * nb + 10.0 * nb + 25.0));
  const double log_norm = -0.5 * (na * na + nb * nb);
  complex sum = 0.0;
  for (int r = 0; r <= r_max; ++r) {
    const int s = outcome.m - outcome.n + r;
    if (s < 0) continue;
    if (s > s_max) break;
    if ((r > 0 && na == 0.0) || (s > 0 && nb == 0.0)) continue;
    const double log_w = log_norm - 0.5 * (log_factorial(r) + log_factorial(s)) +
                         (r > 0 ? r * std::log(na) : 0.0) + (s > 0 ? s * std::log(nb) : 0.0);
    const double phase = (r > 0 ? r * std::arg(initial.alpha) : 0.0) +
                         (s > 0 ? s * std::arg(initial.beta) : 0.0);
    sum += std::polar(std::exp(log_w), phase) * fock_amplitude(c, {r, s}, outcome);
  }
  return sum;
}

RevivalProbability coherent_revival_prob(const WeiNormanCoefficients& c,
                                         const CoherentPair& pair) {
  const complex e0 = std::exp(c.a_zero);
  return {coherent_transition_prob(c, pair, pair),
          std::abs(2.0 - 2.0 * e0.real())};
}

MeanNumbers coherent_mean_numbers(const WeiNormanCoefficients& c,
                                  const DerivedScalars& d,
                                  const CoherentPair& pair) {
  const double na = std::norm(pair.alpha);
  const double nb = std::norm(pair.beta);
  const double cross = (pair.alpha * pair.beta * c.a_minus).real();
  const double mean_a = na + d.n0 * (na + nb + 1.0) - 2.0 * cross * (1.0 + d.n0);
  return {mean_a, mean_a + nb - na};
}

}  // namespace ndpa
