#include "ndpa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

#include "ndpa/detail/dormand_prince.hpp"
#include "ndpa/errors.hpp"
#include "ndpa/series.hpp"

namespace ndpa {

namespace {

struct Tridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;
};

// Rotating-frame block Hamiltonian -Omega K0 + i g (K- - K+), conjugated by
// diag(i^j) so that it becomes real symmetric.
Tridiagonal rotating_block(int cutoff, int q, double g, double detuning) {
  const int first = std::max(0, q);
  const int n = cutoff - std::abs(q) + 1;
  Tridiagonal h{Eigen::VectorXd(n), Eigen::VectorXd(std::max(0, n - 1))};
  for (int j = 0; j < n; ++j) {
    const double na = first + j;
    const double nb = na - q;
    h.diag[j] = -detuning * (na + nb + 1.0) / 2.0;
    if (j + 1 < n) h.off[j] = -g * std::sqrt((na + 1.0) * (nb + 1.0));
  }
  return h;
}

complex i_power(int j) {
  switch (j & 3) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

void to_real_frame(Eigen::VectorXcd& v) {
  for (Eigen::Index j = 0; j < v.size(); ++j)
    v[j] *= std::conj(i_power(static_cast<int>(j)));
}

void from_real_frame(Eigen::VectorXcd& v) {
  for (Eigen::Index j = 0; j < v.size(); ++j)
    v[j] *= i_power(static_cast<int>(j));
}

Eigen::VectorXcd tridiag_apply(const Tridiagonal& h, const Eigen::VectorXcd& v,
                               double shift, double scale) {
  const Eigen::Index n = v.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    complex acc = (h.diag[j] - shift) * v[j];
    if (j > 0) acc += h.off[j - 1] * v[j - 1];
    if (j + 1 < n) acc += h.off[j] * v[j + 1];
    out[j] = acc / scale;
  }
  return out;
}

// exp(-i H t) v by Chebyshev expansion; coefficients shared across blocks.
struct ChebyshevPropagator {
  double center;
  double half_width;
  double t;
  std::vector<complex> coeffs;

  ChebyshevPropagator(double lo, double hi, double t_) : t(t_) {
    center = 0.5 * (lo + hi);
    half_width = std::max(0.5 * (hi - lo), 1e-300);
    const double z = half_width * t;
    for (int k = 0;; ++k) {
      const double j = boost::math::cyl_bessel_j(k, z);
      const double weight = k == 0 ? 1.0 : 2.0;
      coeffs.push_back(weight * i_power(-k) * j);
      if (k > z + 10 && std::abs(j) < 1e-18) break;
    }
  }

  Eigen::VectorXcd apply(const Tridiagonal& h, const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd prev = v;
    Eigen::VectorXcd cur = tridiag_apply(h, v, center, half_width);
    Eigen::VectorXcd sum = coeffs[0] * prev;
    if (coeffs.size() > 1) sum += coeffs[1] * cur;
    for (std::size_t k = 2; k < coeffs.size(); ++k) {
      Eigen::VectorXcd next =
          2.0 * tridiag_apply(h, cur, center, half_width) - prev;
      sum += coeffs[k] * next;
      prev.swap(cur);
      cur.swap(next);
    }
    return std::exp(complex(0, -center * t)) * sum;
  }
};

void gershgorin(const Tridiagonal& h, double& lo, double& hi) {
  const Eigen::Index n = h.diag.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    double radius = 0.0;
    if (j > 0) radius += std::abs(h.off[j - 1]);
    if (j + 1 < n) radius += std::abs(h.off[j]);
    lo = std::min(lo, h.diag[j] - radius);
    hi = std::max(hi, h.diag[j] + radius);
  }
}

void apply_outer_phase(Eigen::VectorXcd& v, int first, int q, double detuning,
                       double t) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double na = first + static_cast<double>(j);
    const double nb = na - q;
    v[j] *= std::exp(complex(0, -detuning * t * (na + nb + 1.0) / 2.0));
  }
}

TruncatedState evolve_harmonic(const HarmonicPump& pump,
                               const ModelParams& params,
                               const TruncatedState& initial, double t,
                               OracleMethod method, int samples) {
  const double detuning = pump.omega - params.omega_a() - params.omega_b();
  const int cutoff = initial.cutoff();
  TruncatedState out(cutoff);
  const double dt = t / samples;

  std::map<int, Tridiagonal> hams;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [q, v] : initial.blocks()) {
    hams.emplace(q, rotating_block(cutoff, q, pump.g, detuning));
    gershgorin(hams.at(q), lo, hi);
  }
  std::optional<ChebyshevPropagator> cheb;
  if (method != OracleMethod::Spectral && !hams.empty())
    cheb.emplace(lo, hi, dt);

  // Edge weight is unaffected by the frame phases, so it can be read off in
  // the rotating real frame.
  std::vector<double> edge(static_cast<std::size_t>(samples), 0.0);
  for (const auto& [q, v] : initial.blocks()) {
    const Tridiagonal& h = hams.at(q);
    Eigen::VectorXcd w = v;
    to_real_frame(w);
    const Eigen::Index last = w.size() - 1;
    if (method == OracleMethod::Spectral) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(h.diag, h.off, Eigen::ComputeEigenvectors);
      const Eigen::MatrixXcd vecs = es.eigenvectors().cast<complex>();
      const Eigen::VectorXcd coeff0 = vecs.transpose() * w;
      for (int step = 1; step <= samples; ++step) {
        const double ts = step == samples ? t : step * dt;
        Eigen::VectorXcd coeff = coeff0;
        for (Eigen::Index j = 0; j < coeff.size(); ++j)
          coeff[j] *= std::exp(complex(0, -es.eigenvalues()[j] * ts));
        w = vecs * coeff;
        edge[static_cast<std::size_t>(step - 1)] += std::norm(w[last]);
      }
    } else {
      for (int step = 1; step <= samples; ++step) {
        w = cheb->apply(h, w);
        edge[static_cast<std::size_t>(step - 1)] += std::norm(w[last]);
      }
    }
    from_real_frame(w);
    apply_outer_phase(w, out.first_na(q), q, detuning, t);
    out.block(q) = w;
  }
  for (double e : edge) out.record_edge_population(e);
  return out;
}

TruncatedState evolve_integrated(const PumpProfile& pump,
                                 const ModelParams& params,
                                 const TruncatedState& initial, double t,
                                 double tol, int samples) {
  const double omega_sum = params.omega_a() + params.omega_b();
  const int cutoff = initial.cutoff();
  TruncatedState out(cutoff);
  std::vector<double> edge(static_cast<std::size_t>(samples), 0.0);
  for (const auto& [q, v] : initial.blocks()) {
    const int first = initial.first_na(q);
    const Eigen::Index n = v.size();
    std::vector<double> up(static_cast<std::size_t>(std::max<Eigen::Index>(n, 1)));
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      const double na = first + static_cast<double>(j);
      up[static_cast<std::size_t>(j)] = std::sqrt((na + 1.0) * (na - q + 1.0));
    }
    // d psi/dt = (g~ K- - g~* K+) psi
    auto rhs = [&](double s, const detail::DormandPrince45::State& y,
                   detail::DormandPrince45::State& dy) {
      const complex gt = pump(s) * std::exp(complex(0, -omega_sum * s));
      const complex gc = std::conj(gt);
      const std::size_t m = y.size();
      for (std::size_t j = 0; j < m; ++j) {
        complex acc{};
        if (j + 1 < m) acc += gt * up[j] * y[j + 1];
        if (j > 0) acc -= gc * up[j - 1] * y[j - 1];
        dy[j] = acc;
      }
    };
    detail::DormandPrince45 solver(rhs, tol);
    detail::DormandPrince45::State y(v.data(), v.data() + n);
    double s = 0.0;
    for (int step = 1; step <= samples; ++step) {
      solver.integrate_to(s, y, step == samples ? t : t * step / samples);
      edge[static_cast<std::size_t>(step - 1)] += std::norm(y.back());
    }
    out.block(q) = Eigen::Map<Eigen::VectorXcd>(y.data(), n);
  }
  for (double e : edge) out.record_edge_population(e);
  return out;
}

double initial_mean(const OracleInitial& initial) {
  struct Visitor {
    double operator()(const FockPair& f) const { return f.r + f.s; }
    double operator()(const CoherentPair& c) const {
      return std::norm(c.alpha) + std::norm(c.beta);
    }
    double operator()(const PureAModeState& s) const { return s.mean(); }
  };
  return std::visit(Visitor{}, initial);
}

double max_change(const TruncatedState& coarse, const TruncatedState& fine) {
  double change = 0.0;
  double matched = 0.0;
  for (const auto& [q, v] : coarse.blocks()) {
    const int first = coarse.first_na(q);
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      const int na = first + static_cast<int>(j);
      const double p_coarse = std::norm(v[j]);
      const double p_fine = std::norm(fine.amplitude(na, na - q));
      change = std::max(change, std::abs(p_coarse - p_fine));
      matched += p_fine;
    }
  }
  return std::max(change, std::abs(fine.norm_squared() - matched));
}

double falling_root(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= n - i;
  return std::sqrt(v);
}

}  // namespace

TruncatedState::TruncatedState(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 4) throw std::invalid_argument("cutoff must be >= 4");
}

int TruncatedState::first_na(int q) const { return std::max(0, q); }

int TruncatedState::block_size(int q) const {
  return std::max(0, cutoff_ - std::abs(q) + 1);
}

complex TruncatedState::amplitude(int na, int nb) const {
  if (na < 0 || nb < 0 || na > cutoff_ || nb > cutoff_) return {};
  const auto it = blocks_.find(na - nb);
  if (it == blocks_.end()) return {};
  return it->second[na - first_na(na - nb)];
}

void TruncatedState::set_amplitude(int na, int nb, complex value) {
  if (na < 0 || nb < 0 || na > cutoff_ || nb > cutoff_)
    throw std::out_of_range("state outside the truncated space");
  block(na - nb)[na - first_na(na - nb)] = value;
}

Eigen::VectorXcd& TruncatedState::block(int q) {
  auto it = blocks_.find(q);
  if (it == blocks_.end()) {
    if (block_size(q) == 0) throw std::out_of_range("charge outside cutoff");
    it = blocks_.emplace(q, Eigen::VectorXcd::Zero(block_size(q))).first;
  }
  return it->second;
}

double TruncatedState::norm_squared() const {
  double total = 0.0;
  for (const auto& [q, v] : blocks_) total += v.squaredNorm();
  return total;
}

double TruncatedState::norm_deficit() const {
  return std::max(0.0, 1.0 - norm_squared());
}

double TruncatedState::edge_population() const {
  double total = 0.0;
  for (const auto& [q, v] : blocks_)
    if (v.size() > 0) total += std::norm(v[v.size() - 1]);
  return total;
}

BlockGenerators build_generators(int cutoff, int q) {
  if (std::abs(q) > cutoff) throw std::out_of_range("|q| exceeds the cutoff");
  const int first = std::max(0, q);
  const int n = cutoff - std::abs(q) + 1;
  BlockGenerators gen{q, first, Eigen::SparseMatrix<double>(n, n),
                      Eigen::SparseMatrix<double>(n, n), Eigen::VectorXd(n)};
  std::vector<Eigen::Triplet<double>> up;
  std::vector<Eigen::Triplet<double>> down;
  for (int j = 0; j < n; ++j) {
    const double na = first + j;
    const double nb = na - q;
    gen.k_zero[j] = (na + nb + 1.0) / 2.0;
    if (j + 1 < n) {
      const double element = std::sqrt((na + 1.0) * (nb + 1.0));
      up.emplace_back(j + 1, j, element);
      down.emplace_back(j, j + 1, element);
    }
  }
  gen.k_plus.setFromTriplets(up.begin(), up.end());
  gen.k_minus.setFromTriplets(down.begin(), down.end());
  return gen;
}

TruncatedState make_initial(const OracleInitial& initial, int cutoff) {
  TruncatedState state(cutoff);
  if (const auto* f = std::get_if<FockPair>(&initial)) {
    if (f->r < 0 || f->s < 0) throw std::invalid_argument("negative photon number");
    if (f->r > cutoff || f->s > cutoff)
      throw TruncationError("Fock state above the cutoff", 1.0);
    state.set_amplitude(f->r, f->s, 1.0);
  } else if (const auto* c = std::get_if<CoherentPair>(&initial)) {
    auto log_coeffs = [cutoff](complex z) {
      std::vector<complex> out(static_cast<std::size_t>(cutoff) + 1,
                               complex(-std::numeric_limits<double>::infinity()));
      const double log_abs = std::log(std::abs(z));
      for (int n = 0; n <= cutoff; ++n) {
        if (n > 0 && z == complex{}) break;
        const double re = (n == 0 ? 0.0 : n * log_abs) - 0.5 * log_factorial(n) -
                          0.5 * std::norm(z);
        out[static_cast<std::size_t>(n)] = complex(re, n * std::arg(z));
      }
      return out;
    };
    const auto la = log_coeffs(c->alpha);
    const auto lb = log_coeffs(c->beta);
    for (int na = 0; na <= cutoff; ++na) {
      for (int nb = 0; nb <= cutoff; ++nb) {
        const complex l = la[static_cast<std::size_t>(na)] +
                          lb[static_cast<std::size_t>(nb)];
        if (l.real() < -90.0) continue;
        state.set_amplitude(na, nb, std::exp(l));
      }
    }
  } else {
    const auto& psi = std::get<PureAModeState>(initial);
    for (std::size_t s = 0; s < psi.probs().size(); ++s) {
      if (static_cast<int>(s) > cutoff) break;
      if (psi.probs()[s] == 0.0) continue;
      state.set_amplitude(static_cast<int>(s), 0,
                          std::polar(std::sqrt(psi.probs()[s]), psi.phases()[s]));
    }
  }
  return state;
}

TruncatedState evolve_truncated(const PumpProfile& pump,
                                const ModelParams& params,
                                const TruncatedState& initial, double t,
                                const OracleConfig& cfg) {
  if (!(t >= 0.0)) throw std::invalid_argument("oracle time must be >= 0");
  if (initial.norm_deficit() > cfg.tail_limit)
    throw TruncationError("initial state not captured by the cutoff",
                          initial.norm_deficit());

  const int samples = std::max(1, cfg.samples);
  TruncatedState out(initial.cutoff());
  const HarmonicPump* harmonic = pump.as_harmonic();
  if (harmonic && harmonic->g == 0.0) {
    out = initial;
  } else if (harmonic && cfg.method != OracleMethod::Integrate) {
    out = evolve_harmonic(*harmonic, params, initial, t, cfg.method, samples);
  } else {
    if (cfg.method == OracleMethod::Spectral)
      throw std::invalid_argument("spectral method needs a harmonic pump");
    out = evolve_integrated(pump, params, initial, t, cfg.tol, samples);
  }

  const double leak = std::max(out.norm_deficit(), out.peak_edge_population());
  if (leak > cfg.tail_limit)
    throw TruncationError("population reached the cutoff", leak);
  return out;
}

OracleRun evolve_converged(const PumpProfile& pump, const ModelParams& params,
                           const OracleInitial& initial, double t,
                           const OracleConfig& cfg, double mean_hint) {
  const double mean = mean_hint >= 0.0 ? mean_hint : initial_mean(initial);
  int cutoff = cfg.cutoff > 0
                   ? cfg.cutoff
                   : std::max(16, static_cast<int>(std::ceil(4.0 * mean)));
  std::optional<TruncatedState> prev;
  double last_leak = 1.0;
  while (cutoff <= cfg.max_cutoff) {
    std::optional<TruncatedState> cur;
    try {
      cur = evolve_truncated(pump, params, make_initial(initial, cutoff), t, cfg);
    } catch (const TruncationError& e) {
      last_leak = e.deficit();
    }
    if (cur && prev) {
      const double change = max_change(*prev, *cur);
      if (change < 1e-9) return {std::move(*cur), change};
    }
    // Near convergence a smaller step is enough, and cost grows like cutoff^3.
    const double growth = cur ? 1.25 : (last_leak < 1e-6 ? 1.5 : 2.0);
    prev = std::move(cur);
    cutoff = (static_cast<int>(std::ceil(cutoff * growth)) + 15) / 16 * 16;
  }
  throw TruncationError("no converged cutoff below the limit", last_leak);
}

double oracle_probability(const TruncatedState& state, FockOutcome outcome) {
  return std::norm(state.amplitude(outcome.n, outcome.m));
}

complex oracle_moment(const TruncatedState& state, int i, int j, int k, int l) {
  if (i < 0 || j < 0 || k < 0 || l < 0)
    throw std::invalid_argument("negative moment index");
  complex total{};
  for (const auto& [q, v] : state.blocks()) {
    const int first = state.first_na(q);
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
      const int na = first + static_cast<int>(idx);
      const int nb = na - q;
      if (na < k || nb < l || v[idx] == complex{}) continue;
      const int pa = na - k;
      const int pb = nb - l;
      const complex right = v[idx] * falling_root(na, k) * falling_root(nb, l);
      const complex left = state.amplitude(pa + i, pb + j) *
                           falling_root(pa + i, i) * falling_root(pb + j, j);
      total += std::conj(left) * right;
    }
  }
  return total;
}

complex oracle_coherent_overlap(const TruncatedState& state,
                                const CoherentPair& final_state) {
  auto coeff = [](complex z, int n) {
    if (n == 0) return std::exp(complex(-0.5 * std::norm(z)));
    if (z == complex{}) return complex{};
    const complex l(n * std::log(std::abs(z)) - 0.5 * log_factorial(n) -
                        0.5 * std::norm(z),
                    -n * std::arg(z));
    return std::exp(l);
  };
  complex total{};
  for (const auto& [q, v] : state.blocks()) {
    const int first = state.first_na(q);
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
      const int na = first + static_cast<int>(idx);
      total += coeff(final_state.alpha, na) * coeff(final_state.beta, na - q) *
               v[idx];
    }
  }
  return total;
}

double oracle_marginal_a(const TruncatedState& state, int n) {
  double total = 0.0;
  for (int nb = 0; nb <= state.cutoff(); ++nb)
    total += std::norm(state.amplitude(n, nb));
  return total;
}

double oracle_marginal_b(const TruncatedState& state, int m) {
  double total = 0.0;
  for (int na = 0; na <= state.cutoff(); ++na)
    total += std::norm(state.amplitude(na, m));
  return total;
}

}  // namespace ndpa
