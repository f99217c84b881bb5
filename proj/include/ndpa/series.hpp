#pragma once

#include <cstddef>
#include <functional>

namespace ndpa {

struct SeriesSum {
  double sum;
  /// Rigorous upper bound on the omitted tail (sum of terms n >= terms).
  double tail_bound;
  std::size_t terms;
};

/// Sums non-negative terms t_0 + t_1 + ... until the geometric envelope tail
/// drops below `tail_tol`.
///
/// `envelope(n)` must dominate t_j for j >= n up to the ratio: for all
/// j >= n, t_j <= envelope(n) * ratio(n)^(j-n), with ratio(n) non-increasing
/// once below one. Throws std::runtime_error if `max_terms` is reached first.
SeriesSum sum_with_tail_bound(const std::function<double(std::size_t)>& term,
                              const std::function<double(std::size_t)>& envelope,
                              const std::function<double(std::size_t)>& ratio,
                              double tail_tol, std::size_t max_terms = 50'000'000);

/// log(n!) via lgamma.
double log_factorial(long n);
/// log of the binomial coefficient C(n, k); -inf when k is out of range.
double log_binomial(long n, long k);

}  // namespace ndpa
