#pragma once

#include <stdexcept>
#include <string>

namespace ndpa {

/// Requested quantity does not exist in the parameter regime (e.g. Fock
/// revivals with k^2 <= 1).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Revival index pair (n, p) with mismatched parity.
class ParityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive integration could not proceed; `time()` is where it stopped.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Truncated Fock space too small for the requested accuracy.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double deficit)
      : std::runtime_error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

}  // namespace ndpa
