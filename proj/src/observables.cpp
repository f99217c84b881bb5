#include "ndpa/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <boost/math/tools/minima.hpp>

#include "ndpa/errors.hpp"
#include "ndpa/series.hpp"

namespace ndpa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BogoliubovCoefficients bogoliubov(const ModelParams& params, double t,
                                  double free_omega) {
  const auto c = solve_analytic(params, t);
  const complex u = std::exp(-std::conj(c.a_zero) - complex(0, free_omega * t));
  return {u, -u * std::conj(c.a_minus), t};
}

// --- single-mode words --------------------------------------------------
// A word is read left to right; `true` is a creation operator.
using Word = std::vector<bool>;

// Normal-ordered expansion: (creators p, annihilators q) -> coefficient.
void normal_order(const Word& w, double coeff,
                  std::map<std::pair<int, int>, double>& out) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (!w[i] && w[i + 1]) {
      Word swapped = w;
      swapped[i] = true;
      swapped[i + 1] = false;
      normal_order(swapped, coeff, out);
      Word contracted;
      contracted.reserve(w.size() - 2);
      for (std::size_t j = 0; j < w.size(); ++j)
        if (j != i && j != i + 1) contracted.push_back(w[j]);
      normal_order(contracted, coeff, out);
      return;
    }
  }
  int p = 0;
  for (bool b : w) p += b ? 1 : 0;
  out[{p, static_cast<int>(w.size()) - p}] += coeff;
}

struct ModeState {
  bool coherent;
  int n;
  complex amplitude;

  complex normal_moment(int p, int q) const {
    if (coherent)
      return std::pow(std::conj(amplitude), p) * std::pow(amplitude, q);
    if (p != q || p > n) return {};
    return std::exp(log_factorial(n) - log_factorial(n - p));
  }
};

complex word_expectation(const Word& w, const ModeState& state) {
  std::map<std::pair<int, int>, double> terms;
  normal_order(w, 1.0, terms);
  complex sum{};
  for (const auto& [pq, coeff] : terms)
    sum += coeff * state.normal_moment(pq.first, pq.second);
  return sum;
}

// One factor of the product: coefficient on the a-mode operator and on the
// b-mode operator, plus which of them is a creator.
struct Factor {
  complex ca;
  bool a_creator;
  complex cb;
  bool b_creator;
};

void expand(const std::vector<Factor>& factors, std::size_t pos, complex coeff,
            Word& wa, Word& wb, const ModeState& sa, const ModeState& sb,
            complex& total) {
  if (coeff == complex{}) return;
  if (pos == factors.size()) {
    total += coeff * word_expectation(wa, sa) * word_expectation(wb, sb);
    return;
  }
  const Factor& f = factors[pos];
  wa.push_back(f.a_creator);
  expand(factors, pos + 1, coeff * f.ca, wa, wb, sa, sb, total);
  wa.pop_back();
  wb.push_back(f.b_creator);
  expand(factors, pos + 1, coeff * f.cb, wa, wb, sa, sb, total);
  wb.pop_back();
}

double stable_t_sq(const KernelTerms& kt, double theta) {
  const double x = 1.0 + kt.sn * kt.sn;
  const double root_x = std::sqrt(x);
  const double abs_sn = std::abs(kt.sn);
  const double psi0 = std::atan2(kt.k * kt.sn, kt.cn);
  const double phi = kt.phase - 2.0 * theta;
  const double sgn = kt.sn < 0 ? -1.0 : 1.0;
  const double base = 1.0 / ((root_x + abs_sn) * (root_x + abs_sn));
  return base + 2.0 * abs_sn * root_x * (1.0 - sgn * std::cos(phi - psi0));
}

double occupation_factor(const InitialProduct& state) {
  if (const auto* f = std::get_if<FockPair>(&state))
    return static_cast<double>(f->r + f->s + 1);
  return 1.0;
}

template <class Compare>
std::vector<Extremum> find_extrema(const std::function<double(double)>& f,
                                   double t0, double t1, int grid,
                                   Compare better) {
  if (grid < 2) throw std::invalid_argument("grid needs at least 2 intervals");
  if (!(t1 > t0)) throw std::invalid_argument("empty search interval");
  std::vector<double> ts(static_cast<std::size_t>(grid) + 1);
  std::vector<double> fs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / grid;
    fs[i] = f(ts[i]);
  }
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    if (!(better(fs[i], fs[i - 1]) && !better(fs[i + 1], fs[i]))) continue;
    auto signed_f = [&](double t) { return better(-1.0, 1.0) ? f(t) : -f(t); };
    const auto [t, v] = boost::math::tools::brent_find_minima(
        signed_f, ts[i - 1], ts[i + 1], std::numeric_limits<double>::digits / 2);
    out.push_back({t, better(-1.0, 1.0) ? v : -v});
  }
  return out;
}

}  // namespace

BogoliubovCoefficients heisenberg_a(const ModelParams& params, double t) {
  return bogoliubov(params, t, params.omega_a());
}

BogoliubovCoefficients heisenberg_b(const ModelParams& params, double t) {
  return bogoliubov(params, t, params.omega_b());
}

std::size_t MomentTable::index(int i, int j, int k, int l) {
  if (i < 0 || j < 0 || k < 0 || l < 0 || i + j + k + l > kMaxDegree)
    throw std::out_of_range("moment index outside degree <= 4");
  return static_cast<std::size_t>(((i * 5 + j) * 5 + k) * 5 + l);
}

complex MomentTable::operator()(int i, int j, int k, int l) const {
  return values_[index(i, j, k, l)];
}

void MomentTable::set(int i, int j, int k, int l, complex value) {
  values_[index(i, j, k, l)] = value;
}

MomentTable second_moments(const InitialProduct& state,
                           const WeiNormanCoefficients& c) {
  ModeState sa{};
  ModeState sb{};
  if (const auto* f = std::get_if<FockPair>(&state)) {
    if (f->r < 0 || f->s < 0)
      throw std::invalid_argument("negative photon number");
    sa = {false, f->r, {}};
    sb = {false, f->s, {}};
  } else {
    const auto& p = std::get<CoherentPair>(state);
    sa = {true, 0, p.alpha};
    sb = {true, 0, p.beta};
  }

  const complex u = std::exp(-std::conj(c.a_zero));
  const complex v = -u * std::conj(c.a_minus);
  // a_I = u a + v b^dag, b_I = u b + v a^dag and their adjoints.
  const Factor a_dag{std::conj(u), true, std::conj(v), false};
  const Factor b_dag{std::conj(v), false, std::conj(u), true};
  const Factor a_ann{u, false, v, true};
  const Factor b_ann{v, true, u, false};

  MomentTable table;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j)
      for (int k = 0; i + j + k <= 4; ++k)
        for (int l = 0; i + j + k + l <= 4; ++l) {
          std::vector<Factor> factors;
          factors.insert(factors.end(), static_cast<std::size_t>(i), a_dag);
          factors.insert(factors.end(), static_cast<std::size_t>(j), b_dag);
          factors.insert(factors.end(), static_cast<std::size_t>(k), a_ann);
          factors.insert(factors.end(), static_cast<std::size_t>(l), b_ann);
          Word wa;
          Word wb;
          complex total{};
          expand(factors, 0, 1.0, wa, wb, sa, sb, total);
          table.set(i, j, k, l, total);
        }
  return table;
}

MeanPhotons mean_photon_fock(const DerivedScalars& d, FockPair f) {
  const double gain = d.n0 * (f.r + f.s + 1);
  return {f.r + gain, f.s + gain};
}

double mandel_q_fock(const DerivedScalars& d, FockPair f) {
  const double r = f.r;
  const double s = f.s;
  const double c = r + s + 1.0;
  const double dd = 2.0 * r * s + c;
  if (d.n0 == 0.0) return f.r == 0 ? 0.0 : -1.0;
  if (d.n0 > 1.0) {
    const double inv = std::exp(-d.log_n0);
    return (2.0 * r * s + d.n0 * dd - r * inv) / (r * inv + c);
  }
  return (d.n0 * 2.0 * r * s + d.n0 * d.n0 * dd - r) / (r + d.n0 * c);
}

std::optional<double> mandel_q_coherent(const MomentTable& m) {
  const double mean = m.mean_a();
  if (!(mean > 0.0)) return std::nullopt;
  return (m(2, 0, 2, 0).real() - mean * mean) / mean;
}

CrossCorrelation cross_correlation_fock(const DerivedScalars& d, FockPair f) {
  const double r = f.r;
  const double s = f.s;
  const double y = d.y;
  const double first =
      std::sqrt(std::max(0.0, r * (r - 1) + 4 * r * (s + 1) * y +
                                  (s + 1) * (s + 2) * y * y)) *
      std::sqrt(std::max(0.0, s * (s - 1) + 4 * s * (r + 1) * y +
                                  (r + 1) * (r + 2) * y * y));
  const double second =
      r * s + (r + 1) * (s + 1) * y * y +
      (r * s + r * (r + 1) + s * (s + 1) + (r + 1) * (s + 1)) * y;
  double bracket = first - second;
  if (y > 0.5 && first + second > 0.0) {
    // first^2 - second^2 in powers of e = 1 - y, which has no constant term;
    // avoids cancelling two numbers of order (r+s)^2 when x is large.
    const double e = std::exp(-d.log_x);
    const double c = r + s + 1;
    const double c1 = -2.0 * c * (r * r + 4 * r * s + 3 * r + s * s + 3 * s + 2);
    const double c2 = 2 * r * r * r * s + 4 * r * r * r - 4 * r * r * s * s + 14 * r * r * s +
                      17 * r * r + 2 * r * s * s * s + 14 * r * s * s + 38 * r * s + 24 * r +
                      4 * s * s * s + 17 * s * s + 24 * s + 11;
    const double c3 = -2.0 * (r + 1) * (s + 1) * (r * r - 2 * r * s + 4 * r + s * s + 4 * s + 5);
    const double c4 = (r + 1) * (s + 1) * (r + s + 3);
    bracket = e * (c1 + e * (c2 + e * (c3 + e * c4))) / (first + second);
  }

  CrossCorrelation out{};
  out.f = bracket == 0.0 ? 0.0 : bracket * std::exp(2.0 * d.log_x);
  const double inv_x = std::exp(-d.log_x);
  const double c = r + s + 1;
  const double norm = (r * inv_x + y * c) * (s * inv_x + y * c);
  // f = bracket x^2 and <n_a><n_b> = x^2 norm.
  if (norm > 0.0)
    out.normalized = bracket == 0.0 ? 0.0 : bracket * std::exp(d.log_x - 0.5 * std::log(norm));
  return out;
}

CrossCorrelation cross_correlation_general(const MomentTable& m) {
  const double aa = std::max(0.0, m(2, 0, 2, 0).real());
  const double bb = std::max(0.0, m(0, 2, 0, 2).real());
  CrossCorrelation out{};
  out.f = std::sqrt(aa) * std::sqrt(bb) - m(1, 1, 1, 1).real();
  const double na = m.mean_a();
  const double nb = m.mean_b();
  if (na > 0.0 && nb > 0.0) out.normalized = out.f / std::sqrt(na * nb);
  return out;
}

SqueezingKernel squeezing_kernel(const ModelParams& params, double theta,
                                 double t) {
  const KernelTerms kt = kernel_terms(params, t);
  const double x = 1.0 + kt.sn * kt.sn;
  return {theta, stable_t_sq(kt, theta), kt.sn * kt.cn / x,
          kt.k * kt.sn * kt.sn / x};
}

double quadrature_variance(const SqueezingKernel& kernel,
                           const InitialProduct& state) {
  return kernel.t_sq * occupation_factor(state);
}

double uncertainty_product(const ModelParams& params, double theta, double t,
                           const InitialProduct& state) {
  const KernelTerms kt = kernel_terms(params, t);
  const double phi = kt.phase - 2.0 * theta;
  const double w = kt.sn * (kt.cn * std::sin(phi) - kt.k * kt.sn * std::cos(phi));
  return std::sqrt(1.0 + 4.0 * w * w) * occupation_factor(state);
}

std::vector<Extremum> find_local_minima(const std::function<double(double)>& f,
                                        double t0, double t1, int grid) {
  return find_extrema(f, t0, t1, grid, std::less<double>{});
}

std::vector<Extremum> find_local_maxima(const std::function<double(double)>& f,
                                        double t0, double t1, int grid) {
  return find_extrema(f, t0, t1, grid, std::greater<double>{});
}

SqueezingExtrema squeezing_extrema(const ModelParams& params, double theta,
                                   double t0, double t1, int grid) {
  SqueezingExtrema out;
  out.minima = find_local_minima(
      [&](double t) { return squeezing_kernel(params, theta, t).t_sq; }, t0,
      t1, grid);
  const std::size_t n = out.minima.size();
  if (n >= 2) {
    const std::size_t first = n > 4 ? n - 4 : 0;
    out.observed_spacing =
        (out.minima[n - 1].t - out.minima[first].t) /
        static_cast<double>(n - 1 - first);
  }
  if (classify_regime(params).tag == RegimeTag::Sub && params.k() != 0.0)
    out.asymptotic_spacing = std::numbers::pi / (params.g() * std::abs(params.k()));
  return out;
}

double SnrValue::as_double() const { return infinite ? kInf : value; }

SnrValue snr_rho_fock(const DerivedScalars& d, FockPair f) {
  const double r = f.r;
  const double c = f.r + f.s + 1.0;
  const double dd = 2.0 * f.r * f.s + c;
  if (d.n0 == 0.0) return f.r > 0 ? SnrValue::infinity() : SnrValue::finite(0.0);
  const double inv = std::exp(-d.log_n0);
  return SnrValue::finite((r * inv + c) / (std::sqrt(1.0 + inv) * std::sqrt(dd)));
}

const char* to_string(ExtremumKind kind) {
  switch (kind) {
    case ExtremumKind::LocalMax:
      return "local_max";
    case ExtremumKind::GlobalMin:
      return "global_min";
    case ExtremumKind::GlobalMax:
      return "global_max";
  }
  return "unknown";
}

double snr_rho_half_period(double k_squared, FockPair f) {
  const double dd = 2.0 * f.r * f.s + f.r + f.s + 1.0;
  return (f.r * k_squared + f.s + 1.0) / std::sqrt(k_squared * dd);
}

std::vector<SnrExtremum> snr_rho_extrema(const ModelParams& params,
                                         FockPair f, double t_max) {
  if (classify_regime(params).tag != RegimeTag::Super)
    throw RegimeError("rho extrema exist only above threshold (k^2 > 1)");
  const double k2 = params.k_squared();
  const double rate = params.g() * std::sqrt(k2 - 1.0);
  const double pi = std::numbers::pi;

  const double denom = f.s - f.r + 1.0;
  const bool interior = f.r > 0 && denom > 0.0 && f.r / denom < 1.0 / (k2 - 1.0);

  ExtremumKind half_kind = ExtremumKind::GlobalMin;
  if (f.r == 0) {
    half_kind = ExtremumKind::GlobalMax;
  } else if (interior) {
    half_kind = ExtremumKind::LocalMax;
  }

  std::vector<SnrExtremum> out;
  const double half_value = snr_rho_half_period(k2, f);
  for (long j = 0;; ++j) {
    const double t = (2.0 * j + 1.0) * pi / 2.0 / rate;
    if (t > t_max) break;
    out.push_back({t, half_value, half_kind});
  }

  if (interior) {
    const double n_star = f.r / denom;
    const double dd = 2.0 * f.r * f.s + f.r + f.s + 1.0;
    const double value = (f.r + n_star * (f.r + f.s + 1.0)) /
                         (std::sqrt(n_star * (1.0 + n_star)) * std::sqrt(dd));
    const double u0 = std::asin(std::sqrt((k2 - 1.0) * n_star));
    for (long j = 0;; ++j) {
      const double lo = (u0 + j * pi) / rate;
      const double hi = (pi - u0 + j * pi) / rate;
      if (lo > t_max) break;
      out.push_back({lo, value, ExtremumKind::GlobalMin});
      if (hi <= t_max) out.push_back({hi, value, ExtremumKind::GlobalMin});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SnrExtremum& a, const SnrExtremum& b) { return a.t < b.t; });
  return out;
}

SnrReport snr_eta_coherent(const WeiNormanCoefficients& c,
                           const DerivedScalars& d, const CoherentPair& pair) {
  const complex alpha = pair.alpha;
  const complex beta = pair.beta;
  const complex shifted = alpha - std::conj(beta) * std::conj(c.a_minus);
  const double k_term =
      (std::exp(-2.0 * std::conj(c.a_zero)) * shifted * shifted).real();
  const double signal =
      k_term + d.x * (std::norm(alpha) - 2.0 * (alpha * beta * c.a_minus).real() +
                      std::norm(beta) * d.y);

  SnrReport out;
  out.eta = signal / (d.n0 + 0.5);
  const double mean = coherent_mean_numbers(c, d, pair).a;
  out.yuen_bound = 4.0 * mean * (mean + 1.0);

  // a_I = w + (thermal-like fluctuation with <n> = n0), w = u (alpha - beta* A-*),
  // so Var[n_a] = n0 (n0 + 1) + |w|^2 (2 n0 + 1).
  const double w2 = d.x * std::norm(shifted);
  const double var = d.n0 * (d.n0 + 1.0) + w2 * (2.0 * d.n0 + 1.0);
  const double n_mean = w2 + d.n0;
  if (var > 0.0) {
    out.rho = SnrValue::finite(n_mean / std::sqrt(var));
  } else {
    out.rho = n_mean > 0.0 ? SnrValue::infinity() : SnrValue::finite(0.0);
  }
  return out;
}

SnrReport snr_eta_fock(const DerivedScalars& d, FockPair f) {
  SnrReport out;
  out.rho = snr_rho_fock(d, f);
  out.eta = 0.0;
  const double mean = mean_photon_fock(d, f).a;
  out.yuen_bound = 4.0 * mean * (mean + 1.0);
  return out;
}

DiagonalizationResult instantaneous_diagonalization(const ModelParams& params,
                                                    double t) {
  DiagonalizationResult out{};
  out.omega_plus = 0.5 * (params.omega_a() + params.omega_b());
  out.omega_minus = 0.5 * (params.omega_a() - params.omega_b());
  const double ratio = params.g() * params.g() / (out.omega_plus * out.omega_plus);
  out.stable = ratio < 1.0;
  if (!out.stable) return out;
  const double root = std::sqrt(1.0 - ratio);
  out.omega_0 = out.omega_plus * root;
  out.omega_A = out.omega_minus + *out.omega_0;
  out.omega_B = -out.omega_minus + *out.omega_0;
  out.squeeze_r = 0.5 * std::acosh(1.0 / root);
  out.squeeze_phi = std::numbers::pi / 2.0 - params.omega() * t;
  return out;
}

}  // namespace ndpa
