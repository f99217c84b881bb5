#include "ndpa/series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ndpa {

SeriesSum sum_with_tail_bound(const std::function<double(std::size_t)>& term,
                              const std::function<double(std::size_t)>& envelope,
                              const std::function<double(std::size_t)>& ratio,
                              double tail_tol, std::size_t max_terms) {
  double sum = 0.0;
  double comp = 0.0;  // Kahan compensation
  for (std::size_t n = 0; n < max_terms; ++n) {
    const double q = ratio(n);
    if (q < 1.0) {
      const double tail = envelope(n) / (1.0 - q);
      if (tail < tail_tol) return {sum, tail, n};
    }
    const double y = term(n) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  throw std::runtime_error("series did not converge within the term budget");
}

double log_factorial(long n) {
  if (n < 0) return std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(long n, long k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace ndpa
