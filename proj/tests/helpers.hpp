#pragma once

#include <cmath>
#include <complex>

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool near(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(a - b) <= tol;
}
