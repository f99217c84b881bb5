#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "ndpa/amplitudes.hpp"
#include "ndpa/oracle.hpp"

using namespace ndpa;
using std::numbers::pi;

namespace {

// Brute-force maximum of f over (t0, t1] on a fine grid.
template <class F>
double grid_max(F f, double t0, double t1, int n, double* arg = nullptr) {
  double best = -1.0;
  for (int i = 1; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    const double v = f(t);
    if (v > best) {
      best = v;
      if (arg) *arg = t;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("amplitudes") {

TEST_CASE("identity at t = 0") {
  const auto c = solve_analytic(ModelParams::from_k_squared(1.5), 0.0);
  CHECK(near(fock_amplitude(c, {2, 3}, {3, 2}), complex(1.0), 1e-15));
  CHECK(fock_amplitude(c, {2, 3}, {4, 3}) == complex(0.0));
}

TEST_CASE("selection rule") {
  const auto c = solve_analytic(ModelParams::from_k_squared(0.5), 1.3);
  CHECK(fock_amplitude(c, {2, 1}, {3, 3}) == complex(0.0));
  CHECK(std::abs(fock_amplitude(c, {2, 1}, {2, 3})) > 0.0);
}

TEST_CASE("vacuum amplitudes match the vacuum distribution") {
  const auto p = ModelParams::from_k_squared(1.5);
  for (double t : {0.4, 1.7, 3.3}) {
    const auto c = solve_analytic(p, t);
    const auto d = derived_scalars(p, t);
    for (int n = 0; n < 6; ++n) {
      const double direct = std::norm(fock_amplitude(c, {0, 0}, {n, n}));
      CHECK(direct == doctest::Approx(vacuum_prob(d, n)).epsilon(1e-12));
      CHECK(direct == doctest::Approx(std::exp(2.0 * c.a_zero.real()) *
                                      std::pow(std::abs(c.a_plus), 2 * n))
                          .epsilon(1e-12));
    }
  }
}

TEST_CASE("vacuum distribution") {
  const auto d0 = derived_scalars(ModelParams::from_k_squared(1.5), 0.0);
  CHECK(vacuum_prob(d0, 0) == 1.0);
  CHECK(vacuum_prob(d0, 1) == 0.0);
  const auto dk = derived_scalars(ModelParams::from_k(0.0), 1.0);
  CHECK(vacuum_prob(dk, 1) ==
        doctest::Approx(std::pow(std::tanh(1.0), 2) / std::pow(std::cosh(1.0), 2)));
  const auto dr = derived_scalars(ModelParams::from_k_squared(1.5), pi * std::sqrt(2.0));
  CHECK(near(vacuum_prob(dr, 0), 1.0, 1e-12));
}

TEST_CASE("|1,1> distribution") {
  const auto d0 = derived_scalars(ModelParams::from_k_squared(1.5), 0.0);
  CHECK(fock11_prob(d0, 1) == 1.0);
  CHECK(fock11_prob(d0, 3) == 0.0);
  CHECK(fock11_prob(d0, 0) == 0.0);

  const auto p = ModelParams::from_k_squared(1.5);
  for (double t : {0.7, 2.0, 4.0}) {
    const auto c = solve_analytic(p, t);
    const auto d = derived_scalars(p, t);
    for (int n = 0; n < 6; ++n)
      CHECK(fock11_prob(d, n) ==
            doctest::Approx(std::norm(fock_amplitude(c, {1, 1}, {n, n}))).epsilon(1e-12));
    double mean = 0.0;
    for (int n = 0; n < 400; ++n) mean += n * fock11_prob(d, n);
    CHECK(mean == doctest::Approx(fock11_mean_a(d)).epsilon(1e-10));
    CHECK(fock11_mean_a(d) == doctest::Approx(1.0 + 3.0 * d.n0));
  }

  // Revival pattern with period pi*sqrt(2).
  const double t_rev = pi * std::sqrt(2.0);
  for (double t : {0.5, 1.9, 3.1}) {
    const auto a = derived_scalars(p, t);
    const auto b = derived_scalars(p, t + t_rev);
    CHECK(near(fock11_prob(a, 1), fock11_prob(b, 1), 1e-10));
    CHECK(near(fock11_prob(a, 3), fock11_prob(b, 3), 1e-10));
  }

  // Below threshold the initial-state probability decays.
  const auto ds = derived_scalars(ModelParams::from_k_squared(0.5), 8.0);
  CHECK(fock11_prob(ds, 1) <= 1e-3);
  const auto total = fock11_total(ds);
  CHECK(total.tail_bound < 1e-12);
  CHECK(near(total.sum, 1.0, 1e-8));
}

TEST_CASE("Poisson states") {
  const auto psi = PureAModeState::poisson(0.85);
  CHECK(psi.mean() == doctest::Approx(0.85 * 0.85).epsilon(1e-12));
  CHECK(psi.prob(0) == doctest::Approx(std::exp(-0.7225)));
  CHECK(psi.prob(-1) == 0.0);
  CHECK(psi.prob(10000) == 0.0);
  CHECK_THROWS_AS(PureAModeState({0.5, 0.4}, {}), std::invalid_argument);
  CHECK_THROWS_AS(PureAModeState({1.2, -0.2}, {}), std::invalid_argument);
  CHECK(PureAModeState::fock(2).prob(2) == 1.0);
}

TEST_CASE("a-mode distribution") {
  const auto psi = PureAModeState::poisson(0.85);
  const auto d0 = derived_scalars(ModelParams::from_k_squared(1.5), 0.0);
  CHECK(amode_prob(d0, psi, {0, 2}) == doctest::Approx(psi.prob(2)));
  CHECK(amode_prob(d0, psi, {1, 2}) == 0.0);
  CHECK(amode_prob(d0, psi, {3, 2}) == 0.0);

  // Phases never enter.
  std::vector<double> phases(psi.probs().size());
  for (std::size_t i = 0; i < phases.size(); ++i) phases[i] = 0.37 * double(i * i);
  const PureAModeState shifted(psi.probs(), phases);
  const auto d = derived_scalars(ModelParams::from_k_squared(0.5), 1.4);
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m <= n; ++m)
      CHECK(amode_prob(d, psi, {m, n}) == amode_prob(d, shifted, {m, n}));

  // Peak of p_12 above threshold.
  const auto p = ModelParams::from_k_squared(1.5);
  const double peak = grid_max(
      [&](double t) { return amode_prob(derived_scalars(p, t), psi, {1, 2}); }, 0.0, 20.0, 20000);
  const double a2 = 0.85 * 0.85;
  CHECK(peak == doctest::Approx(8.0 * a2 * std::exp(-a2) / 27.0).epsilon(1e-4));
  CHECK(peak == doctest::Approx(0.104).epsilon(0.01));

  // Means from the distribution.
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (int n = 0; n < 300; ++n)
    for (int m = 0; m <= n; ++m) {
      const double w = amode_prob(d, psi, {m, n});
      mean_a += n * w;
      mean_b += m * w;
    }
  const double na = psi.mean();
  CHECK(mean_a == doctest::Approx(na + d.n0 * (na + 1.0)).epsilon(1e-10));
  CHECK(mean_b == doctest::Approx(d.n0 * (na + 1.0)).epsilon(1e-10));
}

TEST_CASE("reduced densities") {
  const auto vac = PureAModeState::fock(0);
  const auto d = derived_scalars(ModelParams::from_k_squared(0.5), 1.2);
  for (int m = 0; m < 5; ++m) {
    CHECK(reduced_density_b(d, vac, m) == doctest::Approx(vacuum_prob(d, m)));
    CHECK(reduced_density_a(d, vac, m) == doctest::Approx(vacuum_prob(d, m)));
  }

  // Thermal ratio deep below threshold.
  const double k2 = 0.5;
  const auto dt = derived_scalars(ModelParams::from_k_squared(k2), 20.0 / std::sqrt(1.0 - k2));
  const auto psi = PureAModeState::poisson(0.85);
  for (int m = 0; m < 4; ++m)
    CHECK(near(reduced_density_b(dt, psi, m + 1) / reduced_density_b(dt, psi, m), dt.y, 1e-6));

  // Against the oracle's partial traces.
  const auto p = ModelParams::from_k_squared(1.5);
  const auto d2 = derived_scalars(p, 2.0);
  const auto run = evolve_converged(PumpProfile::harmonic(p), p, psi, 2.0);
  for (int n = 0; n < 8; ++n) {
    CHECK(near(reduced_density_a(d2, psi, n), oracle_marginal_a(run.state, n), 1e-8));
    CHECK(near(reduced_density_b(d2, psi, n), oracle_marginal_b(run.state, n), 1e-8));
  }
}

TEST_CASE("effective temperature") {
  CHECK(effective_temperature(std::exp(-1.0), 1.0) == doctest::Approx(1.0));
  CHECK(effective_temperature(0.0, 1.0) == 0.0);
  CHECK(effective_temperature(1e-300, 1.0) < 0.01);
  CHECK_THROWS_AS(effective_temperature(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(effective_temperature(-0.1, 1.0), std::domain_error);
  const auto p = ModelParams::from_k_squared(0.5);
  const double t5 = effective_temperature(derived_scalars(p, 5.0).y, 1.0);
  const double t10 = effective_temperature(derived_scalars(p, 10.0).y, 1.0);
  CHECK(t10 > 10.0 * t5);
}

TEST_CASE("coherent transition probabilities") {
  const auto p = ModelParams::from_k_squared(1.5);
  const CoherentPair pair{{0.6, -0.2}, {0.3, 0.9}};
  CHECK(near(coherent_transition_prob(solve_analytic(p, 0.0), pair, pair), 1.0, 1e-15));
  const auto c = solve_analytic(p, 1.1);
  const auto d = derived_scalars(p, 1.1);
  CHECK(coherent_transition_prob(c, {0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(1.0 / d.x));
  CHECK(coherent_transition_prob(c, {0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(vacuum_prob(d, 0)));

  // Against the oracle overlap.
  const auto run = evolve_converged(PumpProfile::harmonic(p), p, pair, 1.1);
  const CoherentPair fin{{0.2, 0.1}, {-0.4, 0.5}};
  CHECK(near(coherent_transition_prob(c, pair, fin),
             std::norm(oracle_coherent_overlap(run.state, fin)), 1e-10));

  // Revival at pi*sqrt(20) for k^2 = 9/5.
  const auto rev = coherent_revival_params(6, 4);
  const auto pr = ModelParams::from_k_squared(rev.k_squared);
  const CoherentPair one{1.0, 1.0};
  CHECK(near(coherent_transition_prob(solve_analytic(pr, rev.gt_rev), one, one), 1.0, 1e-8));
}

TEST_CASE("coherent state in the Fock basis") {
  const CoherentPair pair{{1.1, -0.4}, {0.0, 0.8}};
  const auto p = ModelParams::from_k_squared(0.5);
  // At t = 0 the amplitudes are the Poisson coefficients.
  const auto c0 = solve_analytic(p, 0.0);
  const complex expected = std::exp(-0.5 * (std::norm(pair.alpha) + std::norm(pair.beta))) *
                           pair.alpha * pair.alpha * pair.beta / std::sqrt(2.0);
  CHECK(near(coherent_fock_amplitude(c0, pair, {1, 2}), expected, 1e-14));

  const auto c = solve_analytic(p, 1.2);
  const auto run = evolve_converged(PumpProfile::harmonic(p), p, pair, 1.2);
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m)
      CHECK(near(std::norm(coherent_fock_amplitude(c, pair, {m, n})),
                 oracle_probability(run.state, {m, n}), 1e-10));
}

TEST_CASE("coherent revival probability") {
  const CoherentPair one{1.0, 1.0};
  CHECK(coherent_revival_prob(solve_analytic(ModelParams::from_k_squared(1.5), 0.0), one).prob == 1.0);

  const auto pr = ModelParams::from_k_squared(9.0 / 5.0);
  const double t_rev = pi * std::sqrt(20.0);
  for (int j = 1; j <= 3; ++j)
    CHECK(near(coherent_revival_prob(solve_analytic(pr, j * t_rev), one).prob, 1.0, 1e-8));
  const auto c = solve_analytic(pr, 3.7);
  CHECK(coherent_revival_prob(c, one).prob ==
        doctest::Approx(coherent_transition_prob(c, one, one)).epsilon(1e-12));

  // Irrational k^2: no full revival.
  const auto pi_p = ModelParams::from_k_squared(pi);
  const double best = grid_max(
      [&](double t) { return coherent_revival_prob(solve_analytic(pi_p, t), one).prob; }, 1.0,
      50.0, 20000);
  CHECK(best < 1.0 - 1e-3);

  // Peaks for alpha = beta = 5 near gt = 22 and 41.
  const CoherentPair five{5.0, 5.0};
  auto prob5 = [&](double t) { return coherent_revival_prob(solve_analytic(pi_p, t), five).prob; };
  double t22 = 0.0;
  double t41 = 0.0;
  grid_max(prob5, 18.0, 26.0, 8000, &t22);
  grid_max(prob5, 37.0, 45.0, 8000, &t41);
  CHECK(std::abs(t22 - 22.0) <= 0.5);
  CHECK(std::abs(t41 - 41.0) <= 0.5);
  // The diagnostic is small at the peaks.
  CHECK(coherent_revival_prob(solve_analytic(pi_p, t41), five).diagnostic < 0.05);
}

TEST_CASE("coherent mean numbers") {
  const auto p = ModelParams::from_k_squared(1.5);
  const auto c = solve_analytic(p, 1.0);
  const auto d = derived_scalars(p, 1.0);
  const auto vac = coherent_mean_numbers(c, d, {0.0, 0.0});
  CHECK(vac.a == doctest::Approx(d.n0));
  CHECK(vac.b == doctest::Approx(d.n0));
  const CoherentPair pair{{0.4, 0.3}, {1.2, -0.5}};
  const auto m0 = coherent_mean_numbers(solve_analytic(p, 0.0), derived_scalars(p, 0.0), pair);
  CHECK(m0.a == doctest::Approx(std::norm(pair.alpha)));
  CHECK(m0.b == doctest::Approx(std::norm(pair.beta)));

  const CoherentPair big{std::sqrt(50.0), std::sqrt(10.0)};
  const auto m = coherent_mean_numbers(c, d, big);
  const auto run = evolve_converged(PumpProfile::harmonic(p), p, big, 1.0);
  CHECK(near(m.a, oracle_moment(run.state, 1, 0, 1, 0).real(), 1e-6));
  CHECK(near(m.b, oracle_moment(run.state, 0, 1, 0, 1).real(), 1e-6));
  CHECK(m.a - m.b == doctest::Approx(50.0 - 10.0));
}

TEST_CASE("normalization across regimes") {
  const auto poisson = PureAModeState::poisson(0.85);
  for (double k2 : {0.5, 1.0, 1.5}) {
    const auto p = ModelParams::from_k_squared(k2);
    for (double t : {1.0, 3.0, 6.0}) {
      CAPTURE(k2);
      CAPTURE(t);
      const auto d = derived_scalars(p, t);
      CHECK(near(vacuum_total(d).sum, 1.0, 1e-8));
      CHECK(near(fock11_total(d).sum, 1.0, 1e-8));
      CHECK(near(amode_total(d, poisson).sum, 1.0, 1e-8));

      // General Fock start straight from the amplitudes.
      const auto c = solve_analytic(p, t);
      const int n_max = static_cast<int>(60.0 * (d.n0 + 10.0));
      double total = 0.0;
      for (int n = 1; n < n_max; ++n) total += std::norm(fock_amplitude(c, {2, 1}, {n - 1, n}));
      CHECK(near(total, 1.0, 1e-8));
    }
  }
}

}
