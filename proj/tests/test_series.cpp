#include <doctest.h>

#include <cmath>

#include "ndpa/series.hpp"

using namespace ndpa;

TEST_SUITE("series") {

TEST_CASE("log factorial and binomial") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)));
  CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120.0));
  CHECK(log_binomial(4, 0) == doctest::Approx(0.0));
  CHECK(std::isinf(log_binomial(4, 5)));
  CHECK(std::isinf(log_binomial(4, -1)));
  // Large arguments stay finite.
  CHECK(std::isfinite(log_factorial(100000)));
}

TEST_CASE("geometric series with certified tail") {
  const double q = 0.9;
  const auto res = sum_with_tail_bound([&](std::size_t n) { return std::pow(q, double(n)); },
                                       [&](std::size_t n) { return std::pow(q, double(n)); },
                                       [&](std::size_t) { return q; }, 1e-12);
  CHECK(res.sum == doctest::Approx(10.0).epsilon(1e-11));
  CHECK(res.tail_bound <= 1e-12);
  CHECK(10.0 - res.sum <= res.tail_bound * (1.0 + 1e-9));
}

TEST_CASE("series that never converges throws") {
  CHECK_THROWS(sum_with_tail_bound([](std::size_t) { return 1.0; },
                                   [](std::size_t) { return 1.0; },
                                   [](std::size_t) { return 1.0; }, 1e-12, 1000));
}

}
