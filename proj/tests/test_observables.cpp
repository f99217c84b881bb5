#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "ndpa/errors.hpp"
#include "ndpa/observables.hpp"
#include "ndpa/oracle.hpp"

using namespace ndpa;
using std::numbers::pi;

namespace {

double grid_max(const std::function<double(double)>& f, double t0, double t1, int n) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) best = std::max(best, f(t0 + (t1 - t0) * i / n));
  return best;
}

double grid_min(const std::function<double(double)>& f, double t0, double t1, int n) {
  return -grid_max([&](double t) { return -f(t); }, t0, t1, n);
}

// Var[X_theta] from oracle moments, X = [(a+b) e^{i theta} + h.c.]/sqrt(2).
double oracle_quadrature_variance(const TruncatedState& psi, double theta) {
  auto m = [&](int i, int j, int k, int l) { return oracle_moment(psi, i, j, k, l); };
  const complex e = std::exp(complex(0.0, theta));
  const complex mean_A = m(0, 0, 1, 0) + m(0, 0, 0, 1);
  const double mean_x = std::sqrt(2.0) * (e * mean_A).real();
  const complex AA = m(0, 0, 2, 0) + m(0, 0, 0, 2) + 2.0 * m(0, 0, 1, 1);
  const double AdA = (m(1, 0, 1, 0) + m(0, 1, 0, 1) + 2.0 * m(1, 0, 0, 1)).real();
  const double x2 = (e * e * AA).real() + AdA + 1.0;
  return x2 - mean_x * mean_x;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("Bogoliubov coefficients") {
  const auto p = ModelParams::from_k_squared(1.5, 1.0, 1.2, 0.9);
  const auto b0 = heisenberg_a(p, 0.0);
  CHECK(near(b0.u, complex(1.0), 1e-15));
  CHECK(near(b0.v, complex(0.0), 1e-15));

  const auto pk = ModelParams::from_k(0.0);
  const auto bk = heisenberg_a(pk, 0.8);
  CHECK(std::abs(bk.u) == doctest::Approx(std::cosh(0.8)));
  CHECK(std::abs(bk.v) == doctest::Approx(std::sinh(0.8)));

  for (double k2 : {0.0, 0.5, 1.0, 1.5, 3.0})
    for (double t : {0.3, 2.0, 7.5}) {
      const auto q = ModelParams::from_k_squared(k2, 1.0, 1.1, 0.7);
      for (const auto& b : {heisenberg_a(q, t), heisenberg_b(q, t)})
        CHECK(near(std::norm(b.u) - std::norm(b.v), 1.0, 1e-10 * std::norm(b.u)));
    }
}

TEST_CASE("moment table indexing") {
  MomentTable m;
  m.set(1, 2, 0, 1, {2.0, 3.0});
  CHECK(m(1, 2, 0, 1) == complex(2.0, 3.0));
  CHECK_THROWS_AS(m(3, 2, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(m(-1, 0, 0, 0), std::out_of_range);
}

TEST_CASE("moments at t = 0") {
  const auto c = solve_analytic(ModelParams::from_k_squared(1.5), 0.0);
  const auto f = second_moments(FockPair{3, 2}, c);
  CHECK(near(f(2, 0, 2, 0), complex(6.0), 1e-14));
  CHECK(near(f(1, 1, 1, 1), complex(6.0), 1e-14));
  CHECK(near(f(1, 0, 0, 0), complex(0.0), 1e-14));
  const CoherentPair pair{{0.5, 0.2}, {-1.0, 0.7}};
  const auto m = second_moments(pair, c);
  CHECK(near(m(1, 1, 1, 1), complex(std::norm(pair.alpha) * std::norm(pair.beta)), 1e-14));
  CHECK(near(m(0, 0, 1, 0), pair.alpha, 1e-14));
}

TEST_CASE("coherent moments against the oracle") {
  const auto p = ModelParams::from_k_squared(0.5);
  const CoherentPair pair{{0.8, -0.3}, {0.2, 0.6}};
  const double t = 1.2;
  const auto table = second_moments(pair, solve_analytic(p, t));
  const auto run = evolve_converged(PumpProfile::harmonic(p), p, pair, t);
  double worst = 0.0;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j)
      for (int k = 0; i + j + k <= 4; ++k)
        for (int l = 0; i + j + k + l <= 4; ++l)
          worst = std::max(worst, std::abs(oracle_moment(run.state, i, j, k, l) - table(i, j, k, l)));
  CHECK(worst < 1e-8);
}

TEST_CASE("mean photon numbers") {
  const auto p = ModelParams::from_k_squared(1.5);
  const auto m0 = mean_photon_fock(derived_scalars(p, 0.0), {4, 2});
  CHECK(m0.a == 4.0);
  CHECK(m0.b == 2.0);
  for (double t : {0.5, 1.5, 3.0}) {
    const auto m = mean_photon_fock(derived_scalars(p, t), {4, 2});
    CHECK(m.a - m.b == doctest::Approx(2.0));
  }
  const auto d = derived_scalars(p, 1.0);
  CHECK(mean_photon_fock(d, {1, 1}).a == doctest::Approx(1.0 + 3.0 * d.n0));
  const auto run = evolve_converged(PumpProfile::harmonic(p), p, FockPair{2, 0}, 1.0);
  CHECK(near(mean_photon_fock(d, {2, 0}).a, oracle_moment(run.state, 1, 0, 1, 0).real(), 1e-8));
  CHECK(near(mean_photon_fock(d, {2, 0}).b, oracle_moment(run.state, 0, 1, 0, 1).real(), 1e-8));

  // Coherent difference is conserved as well.
  const CoherentPair pair{{1.0, 0.5}, {0.3, -0.2}};
  for (double t : {0.5, 2.5}) {
    const auto mm = coherent_mean_numbers(solve_analytic(p, t), derived_scalars(p, t), pair);
    CHECK(mm.a - mm.b == doctest::Approx(std::norm(pair.alpha) - std::norm(pair.beta)));
  }
}

TEST_CASE("Mandel Q for Fock starts") {
  const auto p = ModelParams::from_k_squared(1.5);
  const auto d0 = derived_scalars(p, 0.0);
  CHECK(mandel_q_fock(d0, {3, 1}) == doctest::Approx(-1.0));
  CHECK(mandel_q_fock(d0, {0, 2}) == 0.0);
  for (double k2 : {1.5, 2.0})
    for (int s : {1, 5}) {
      const auto q = ModelParams::from_k_squared(k2);
      const double best = grid_max(
          [&](double t) { return mandel_q_fock(derived_scalars(q, t), {0, s}); }, 0.0, 10.0, 20000);
      CHECK(best == doctest::Approx(1.0 / (k2 - 1.0)).epsilon(1e-6));
    }
  const double best10 = grid_max(
      [&](double t) { return mandel_q_fock(derived_scalars(p, t), {1, 0}); }, 0.0, 10.0, 20000);
  CHECK(best10 == doctest::Approx(1.4).epsilon(1e-6));

  // Closed form against the moment engine.
  for (double t : {0.4, 2.2}) {
    const auto mt = second_moments(FockPair{2, 3}, solve_analytic(p, t));
    const double mean = mt.mean_a();
    const double var = mt(2, 0, 2, 0).real() + mean - mean * mean;
    CHECK(mandel_q_fock(derived_scalars(p, t), {2, 3}) ==
          doctest::Approx((var - mean) / mean).epsilon(1e-10));
  }
}

TEST_CASE("Mandel Q for coherent starts") {
  const auto p = ModelParams::from_k_squared(1.5);
  const CoherentPair pair{{1.3, 0.4}, {0.2, 0.1}};
  const auto q0 = mandel_q_coherent(second_moments(pair, solve_analytic(p, 0.0)));
  REQUIRE(q0);
  CHECK(std::abs(*q0) < 1e-12);
  CHECK_FALSE(mandel_q_coherent(second_moments(CoherentPair{0.0, 0.0}, solve_analytic(p, 0.0))));
  for (double t : {0.5, 2.0}) {
    const auto c = solve_analytic(p, t);
    const auto qv = mandel_q_coherent(second_moments(CoherentPair{0.0, 0.0}, c));
    REQUIRE(qv);
    CHECK(*qv == doctest::Approx(mandel_q_fock(derived_scalars(p, t), {0, 0})));
  }
  const CoherentPair big{std::sqrt(50.0), 0.0};
  const auto run = evolve_converged(PumpProfile::harmonic(p), p, big, 1.0);
  const double mean = oracle_moment(run.state, 1, 0, 1, 0).real();
  const double var = oracle_moment(run.state, 2, 0, 2, 0).real() + mean - mean * mean;
  const auto q = mandel_q_coherent(second_moments(big, solve_analytic(p, 1.0)));
  REQUIRE(q);
  CHECK(near(*q, (var - mean) / mean, 1e-8));
}

TEST_CASE("cross correlation") {
  for (double k2 : {0.5, 1.0, 1.5})
    for (int r : {1, 3, 10})
      for (double t : {0.2, 1.0, 4.0, 9.9}) {
        const auto F = cross_correlation_fock(derived_scalars(ModelParams::from_k_squared(k2), t), {r, r});
        REQUIRE(F.normalized);
        CHECK(near(*F.normalized, -1.0, 1e-10));
      }

  const auto p = ModelParams::from_k_squared(1.5);
  for (int r : {1, 4, 50})
    for (int i = 1; i <= 200; ++i) {
      const auto F = cross_correlation_fock(derived_scalars(p, i * 0.05), {r, 0});
      CHECK(F.f <= 1e-10);
    }

  // Positive excursion for (50, 10) below threshold.
  const auto ps = ModelParams::from_k_squared(0.5);
  auto F5010 = [&](double t) {
    return *cross_correlation_fock(derived_scalars(ps, t), {50, 10}).normalized;
  };
  CHECK(grid_max(F5010, 0.1, 1.3, 1000) > 0.0);
  CHECK(F5010(10.0) == doctest::Approx(-1.0).epsilon(1e-3));

  // Closed form against the moment engine.
  for (int r = 0; r <= 5; ++r)
    for (int s = 0; s <= 5; ++s)
      for (double t : {0.3, 1.7}) {
        const auto d = derived_scalars(p, t);
        const auto a = cross_correlation_fock(d, {r, s});
        const auto b = cross_correlation_general(second_moments(FockPair{r, s}, solve_analytic(p, t)));
        CHECK(near(a.f, b.f, 1e-9 * std::max(1.0, std::abs(a.f))));
      }

  // Vacuum consistency.
  const auto dv = derived_scalars(p, 0.9);
  CHECK(near(cross_correlation_fock(dv, {0, 0}).f,
             cross_correlation_general(second_moments(FockPair{0, 0}, solve_analytic(p, 0.9))).f,
             1e-12));
  CHECK_FALSE(cross_correlation_fock(derived_scalars(p, 0.0), {0, 3}).normalized);

  // Coherent (sqrt50, sqrt10) mostly negative; Fock (50, 10) mostly positive.
  const CoherentPair coh{std::sqrt(50.0), std::sqrt(10.0)};
  int coh_negative = 0;
  int fock_positive = 0;
  const int n = 400;
  for (int i = 1; i <= n; ++i) {
    const double t = 10.0 * i / n;
    const auto c = solve_analytic(p, t);
    if (*cross_correlation_general(second_moments(coh, c)).normalized < 0.0) ++coh_negative;
    if (*cross_correlation_fock(derived_scalars(p, t), {50, 10}).normalized > 0.0) ++fock_positive;
  }
  CHECK(coh_negative > n / 2);
  CHECK(fock_positive > n / 2);
}

TEST_CASE("squeezing kernel") {
  const auto p = ModelParams::from_k_squared(1.5);
  CHECK(squeezing_kernel(p, 0.3, 0.0).t_sq == doctest::Approx(1.0));
  const auto pk = ModelParams::from_k(0.0);
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(squeezing_kernel(pk, 0.0, t).t_sq == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-12));
    CHECK(squeezing_kernel(pk, pi / 2.0, t).t_sq ==
          doctest::Approx(std::exp(2.0 * t)).epsilon(1e-12));
  }
  // t_sq against the G/H form.
  for (double k2 : {0.5, 1.0, 1.8})
    for (double t : {0.7, 3.1}) {
      const auto q = ModelParams::from_k_squared(k2);
      const auto kern = squeezing_kernel(q, 0.4, t);
      const auto d = derived_scalars(q, t);
      const double phi = q.detuning() * t - 2.0 * 0.4;
      const double expected =
          d.x * (1.0 + d.y - 2.0 * (std::cos(phi) * kern.g_kernel + std::sin(phi) * kern.h_kernel));
      CHECK(kern.t_sq == doctest::Approx(expected).epsilon(1e-10));
      CHECK(kern.t_sq >= 0.0);
    }
  // Continuity across the critical point.
  for (double t : {0.5, 3.0}) {
    const double mid = squeezing_kernel(ModelParams::from_k_squared(1.0), 0.2, t).t_sq;
    CHECK(squeezing_kernel(ModelParams::from_k_squared(1.0 + 1e-6), 0.2, t).t_sq ==
          doctest::Approx(mid).epsilon(1e-4));
    CHECK(squeezing_kernel(ModelParams::from_k_squared(1.0 - 1e-6), 0.2, t).t_sq ==
          doctest::Approx(mid).epsilon(1e-4));
  }
}

TEST_CASE("quadrature variances") {
  const auto p = ModelParams::from_k_squared(0.5);
  const auto kern = squeezing_kernel(p, 0.6, 2.0);
  CHECK(quadrature_variance(kern, FockPair{1, 1}) == doctest::Approx(3.0 * kern.t_sq));
  CHECK(quadrature_variance(kern, CoherentPair{{2.0, 1.0}, {-0.5, 0.3}}) == kern.t_sq);

  const auto run = evolve_converged(PumpProfile::harmonic(p), p, FockPair{1, 1}, 2.0);
  CHECK(near(oracle_quadrature_variance(run.state, 0.6), 3.0 * kern.t_sq, 1e-8));

  // Coherent variance from the moment engine equals the vacuum value.
  const auto q = ModelParams::from_k_squared(1.5);
  const CoherentPair pair{{1.2, -0.4}, {0.3, 0.8}};
  for (double theta : {0.0, 0.7, pi / 2.0})
    for (double t : {0.5, 2.0, 5.0}) {
      const auto mt = second_moments(pair, solve_analytic(q, t));
      const complex e = std::exp(complex(0.0, theta));
      const complex mean_A = mt(0, 0, 1, 0) + mt(0, 0, 0, 1);
      const double mean_x = std::sqrt(2.0) * (e * mean_A).real();
      const complex AA = mt(0, 0, 2, 0) + mt(0, 0, 0, 2) + 2.0 * mt(0, 0, 1, 1);
      const double AdA = (mt(1, 0, 1, 0) + mt(0, 1, 0, 1) + 2.0 * mt(1, 0, 0, 1)).real();
      const double var = (e * e * AA).real() + AdA + 1.0 - mean_x * mean_x;
      CHECK(near(var, squeezing_kernel(q, theta, t).t_sq, 1e-10));
    }
}

TEST_CASE("uncertainty product") {
  for (double k2 : {0.5, 1.0, 1.8})
    for (int i = 0; i <= 300; ++i) {
      const auto q = ModelParams::from_k_squared(k2);
      CHECK(uncertainty_product(q, 0.0, i * 0.05, FockPair{0, 0}) >= 1.0 - 1e-10);
    }
  const auto p = ModelParams::from_k_squared(9.0 / 5.0);
  const double period = pi * std::sqrt(5.0);
  for (int j = 0; j <= 3; ++j)
    CHECK(near(uncertainty_product(p, 0.0, j * period, FockPair{0, 0}), 1.0, 1e-8));
  // Half period of the product, full period of each variance.
  for (double t : {0.4, 1.3, 2.6}) {
    CHECK(near(uncertainty_product(p, 0.0, t, FockPair{0, 0}),
               uncertainty_product(p, 0.0, t + period / 2.0, FockPair{0, 0}), 1e-10));
    CHECK(near(squeezing_kernel(p, 0.0, t).t_sq, squeezing_kernel(p, 0.0, t + period).t_sq, 1e-10));
    // X_0 shifted by half a period equals X_{pi/2}.
    CHECK(near(squeezing_kernel(p, 0.0, t + period / 2.0).t_sq,
               squeezing_kernel(p, pi / 2.0, t).t_sq, 1e-10));
  }
  // Direct product of the two variances agrees.
  const double t = 1.7;
  const double direct = std::sqrt(squeezing_kernel(p, 0.0, t).t_sq * squeezing_kernel(p, pi / 2.0, t).t_sq);
  CHECK(uncertainty_product(p, 0.0, t, FockPair{2, 1}) == doctest::Approx(4.0 * direct).epsilon(1e-10));
  CHECK(uncertainty_product(p, 0.0, t, CoherentPair{1.0, 2.0}) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("extremum search") {
  const auto minima = find_local_minima([](double t) { return std::cos(t); }, 0.0, 20.0, 400);
  REQUIRE(minima.size() == 3);
  CHECK(std::abs(minima[0].t - pi) < 1e-7);
  CHECK(minima[2].value == doctest::Approx(-1.0));
  const auto maxima = find_local_maxima([](double t) { return std::cos(t); }, 0.5, 20.0, 400);
  REQUIRE(maxima.size() == 3);
  CHECK(std::abs(maxima[0].t - 2.0 * pi) < 1e-7);
  CHECK(find_local_minima([](double t) { return t; }, 0.0, 1.0, 100).empty());
}

TEST_CASE("squeezing extrema") {
  const auto p = ModelParams::from_k_squared(0.5);
  const auto ex = squeezing_extrema(p, 0.0, 5.0, 40.0);
  REQUIRE(ex.observed_spacing);
  REQUIRE(ex.asymptotic_spacing);
  CHECK(*ex.asymptotic_spacing == doctest::Approx(pi / std::sqrt(0.5)));
  CHECK(std::abs(*ex.observed_spacing / *ex.asymptotic_spacing - 1.0) < 0.02);

  const auto q = ModelParams::from_k_squared(9.0 / 5.0);
  const auto ev = squeezing_extrema(q, 0.0, 0.5, 30.0);
  CHECK_FALSE(ev.asymptotic_spacing);
  CHECK_FALSE(ev.minima.empty());
  for (int j = 1; j <= 4; ++j)
    CHECK(near(squeezing_kernel(q, 0.0, j * pi * std::sqrt(5.0)).t_sq, 1.0, 1e-8));

  // The deepest and highest extrema of Delta X_0 and Delta X_{pi/2} sit where
  // the uncertainty product returns to its minimum.
  auto v0 = [&](double t) { return squeezing_kernel(q, 0.0, t).t_sq; };
  auto v1 = [&](double t) { return squeezing_kernel(q, pi / 2.0, t).t_sq; };
  auto prod = [&](double t) { return uncertainty_product(q, 0.0, t, FockPair{0, 0}); };
  const double resolution = 14.0 / 2000;
  const auto ep = find_local_minima(prod, 0.1, 14.0, 2000);
  for (const auto& f : ep) CHECK(near(f.value, 1.0, 1e-8));
  int matched = 0;
  for (const auto& v : {std::function<double(double)>(v0), std::function<double(double)>(v1)}) {
    auto mins = find_local_minima(v, 0.1, 14.0, 2000);
    auto maxs = find_local_maxima(v, 0.1, 14.0, 2000);
    double lo = 1e300;
    double hi = 0.0;
    for (const auto& e : mins) lo = std::min(lo, e.value);
    for (const auto& e : maxs) hi = std::max(hi, e.value);
    std::vector<Extremum> global;
    for (const auto& e : mins)
      if (e.value < lo * (1.0 + 1e-6)) global.push_back(e);
    for (const auto& e : maxs)
      if (e.value > hi * (1.0 - 1e-6)) global.push_back(e);
    for (const auto& e : global) {
      double best = 1e9;
      for (const auto& f : ep) best = std::min(best, std::abs(f.t - e.t));
      CHECK(best < 2.0 * resolution);
      ++matched;
    }
  }
  CHECK(matched >= 8);
}

TEST_CASE("signal-to-noise ratio rho") {
  const auto d0 = derived_scalars(ModelParams::from_k_squared(1.5), 0.0);
  CHECK(snr_rho_fock(d0, {0, 3}).value == 0.0);
  CHECK_FALSE(snr_rho_fock(d0, {0, 3}).infinite);
  CHECK(snr_rho_fock(d0, {2, 3}).infinite);
  CHECK(std::isinf(snr_rho_fock(d0, {2, 3}).as_double()));

  // Asymptote below threshold.
  const double k2 = 0.5;
  const auto ds = derived_scalars(ModelParams::from_k_squared(k2), 25.0 / std::sqrt(1.0 - k2));
  CHECK(snr_rho_fock(ds, {100, 1}).value == doctest::Approx(102.0 / std::sqrt(302.0)).epsilon(1e-3));

  // Global minimum for (1, 100), independent of k^2.
  for (double kk : {1.2, 1.5, 2.0}) {
    const auto p = ModelParams::from_k_squared(kk);
    const auto ex = snr_rho_extrema(p, {1, 100}, 10.0);
    bool found = false;
    for (const auto& e : ex)
      if (e.kind == ExtremumKind::GlobalMin) {
        found = true;
        CHECK(near(e.value, 2.0 * std::sqrt(101.0 / 302.0), 1e-6));
        CHECK(near(snr_rho_fock(derived_scalars(p, e.t), {1, 100}).value, e.value, 1e-9));
      }
    CHECK(found);
    const double numeric = grid_min(
        [&](double t) { return snr_rho_fock(derived_scalars(p, t), {1, 100}).as_double(); }, 0.01,
        10.0, 20000);
    CHECK(numeric >= 2.0 * std::sqrt(101.0 / 302.0) - 1e-9);
  }
}

TEST_CASE("rho extrema above threshold") {
  const auto p = ModelParams::from_k_squared(1.5);
  const auto ex = snr_rho_extrema(p, {1, 100}, 10.0);
  REQUIRE_FALSE(ex.empty());
  const double half = pi / (2.0 * std::sqrt(0.5));
  bool has_local_max = false;
  for (const auto& e : ex) {
    if (std::abs(e.t - half) < 1e-12) {
      has_local_max = true;
      CHECK(e.kind == ExtremumKind::LocalMax);
      CHECK(e.value == doctest::Approx(205.0 / (2.0 * std::sqrt(453.0))));
      CHECK(std::abs(e.value - 205.0 / (2.0 * std::sqrt(452.0))) < 0.02);
    }
    // Every analytic extremum is a numerical extremum.
    const auto f = [&](double t) { return snr_rho_fock(derived_scalars(p, t), {1, 100}).value; };
    const auto sign = e.kind == ExtremumKind::LocalMax ? -1.0 : 1.0;
    const auto found = find_local_minima([&](double t) { return sign * f(t); }, e.t - 0.05, e.t + 0.05, 200);
    REQUIRE(found.size() == 1);
    CHECK(std::abs(found[0].t - e.t) < 1e-6);
  }
  CHECK(has_local_max);

  const auto e2 = snr_rho_extrema(p, {100, 1}, 3.0);
  REQUIRE(e2.size() == 1);
  CHECK(e2[0].kind == ExtremumKind::GlobalMin);
  CHECK(e2[0].value == doctest::Approx(152.0 / std::sqrt(453.0)));
  CHECK(std::abs(e2[0].value - 152.0 / std::sqrt(452.0)) < 0.02);
  CHECK(near(e2[0].value, snr_rho_half_period(1.5, {100, 1}), 1e-12));

  const auto e3 = snr_rho_extrema(p, {0, 10}, 3.0);
  REQUIRE(e3.size() == 1);
  CHECK(e3[0].kind == ExtremumKind::GlobalMax);
  CHECK(e3[0].value == doctest::Approx(std::sqrt(11.0 / 1.5)));
  const double numeric = grid_max(
      [&](double t) { return snr_rho_fock(derived_scalars(p, t), {0, 10}).value; }, 0.0, 3.0, 30000);
  CHECK(numeric == doctest::Approx(e3[0].value).epsilon(1e-6));

  CHECK_THROWS_AS(snr_rho_extrema(ModelParams::from_k_squared(0.5), {1, 1}, 5.0), RegimeError);
  CHECK_THROWS_AS(snr_rho_extrema(ModelParams::from_k_squared(1.0), {1, 1}, 5.0), RegimeError);
  CHECK(std::string(to_string(ExtremumKind::LocalMax)) == "local_max");
}

TEST_CASE("quadrature signal-to-noise eta") {
  const auto p = ModelParams::from_k_squared(1.5);
  const double alpha = 1.7;
  const auto r0 = snr_eta_coherent(solve_analytic(p, 0.0), derived_scalars(p, 0.0), {alpha, 0.0});
  CHECK(r0.eta == doctest::Approx(4.0 * alpha * alpha));
  CHECK(snr_eta_fock(derived_scalars(p, 1.0), {2, 1}).eta == 0.0);

  auto max_ratio = [](double k2, double t1) {
    const auto q = ModelParams::from_k_squared(k2);
    double eta_max = 0.0;
    double bound_max = 0.0;
    bool below = true;
    for (int i = 0; i <= 3000; ++i) {
      const double t = t1 * i / 3000;
      const auto rep = snr_eta_coherent(solve_analytic(q, t), derived_scalars(q, t), {0.0, 3.0});
      below = below && rep.eta <= rep.yuen_bound + 1e-9;
      eta_max = std::max(eta_max, rep.eta);
      bound_max = std::max(bound_max, rep.yuen_bound);
    }
    return std::tuple{eta_max, bound_max, below};
  };
  const auto [eta10, bound10, ok10] = max_ratio(10.0, 10.0);
  CHECK(ok10);
  CHECK(bound10 / eta10 >= 1.5);
  CHECK(bound10 / eta10 <= 4.0);
  const auto [eta15, bound15, ok15] = max_ratio(1.5, 10.0);
  CHECK(ok15);

  // rho from the closed form against the moment engine.
  for (double t : {0.4, 1.9}) {
    const CoherentPair pair{{1.1, 0.3}, {-0.7, 0.9}};
    const auto c = solve_analytic(p, t);
    const auto mt = second_moments(pair, c);
    const double mean = mt.mean_a();
    const double var = mt(2, 0, 2, 0).real() + mean - mean * mean;
    CHECK(snr_eta_coherent(c, derived_scalars(p, t), pair).rho.value ==
          doctest::Approx(mean / std::sqrt(var)).epsilon(1e-10));
  }
  CHECK(eta15 >= 10.0);
  CHECK(eta15 < 100.0);
  CHECK(bound15 >= 1000.0);
  CHECK(bound15 < 10000.0);
}

TEST_CASE("instantaneous diagonalization") {
  const ModelParams weak(1.3, 0.7, 1e-9, 2.0);
  const auto w = instantaneous_diagonalization(weak);
  REQUIRE(w.stable);
  CHECK(*w.omega_A == doctest::Approx(1.3));
  CHECK(*w.omega_B == doctest::Approx(0.7));
  CHECK(*w.squeeze_r == doctest::Approx(0.0));

  const ModelParams edge(1.3, 0.7, 1.0, 2.0);
  CHECK_FALSE(instantaneous_diagonalization(edge).stable);
  CHECK_FALSE(instantaneous_diagonalization(edge).omega_A);

  const ModelParams mid(1.3, 0.7, 0.6, 2.0);
  const auto m = instantaneous_diagonalization(mid, 0.5);
  REQUIRE(m.stable);
  CHECK(std::cosh(2.0 * *m.squeeze_r) == doctest::Approx(1.0 / std::sqrt(1.0 - 0.36)));
  CHECK(*m.squeeze_phi == doctest::Approx(pi / 2.0 - 2.0 * 0.5));
  CHECK(*m.omega_0 == doctest::Approx(std::sqrt(1.0 - 0.36)));

  // Unstable below threshold: n0 grows at rate 2 g sqrt(1 - k^2).
  const ModelParams strong(0.5, 0.5, 2.0, 1.0 + 2.0 * 2.0 * std::sqrt(0.3));
  CHECK_FALSE(instantaneous_diagonalization(strong).stable);
  const double l1 = derived_scalars(strong, 10.0).log_n0;
  const double l2 = derived_scalars(strong, 12.0).log_n0;
  CHECK((l2 - l1) / 2.0 == doctest::Approx(2.0 * 2.0 * std::sqrt(1.0 - 0.3)).epsilon(1e-6));
}

}
