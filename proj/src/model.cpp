#include "ndpa/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ndpa/errors.hpp"

namespace ndpa {

ModelParams::ModelParams(double omega_a, double omega_b, double g,
                         double omega)
    : omega_a_(omega_a), omega_b_(omega_b), g_(g), omega_(omega) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw std::invalid_argument("pump amplitude g must be a finite real > 0");
  }
  if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
    throw std::invalid_argument("mode frequencies must be > 0");
  }
  if (!std::isfinite(omega)) {
    throw std::invalid_argument("pump frequency must be finite");
  }
}

ModelParams ModelParams::from_k(double k, double g, double omega_a,
                                double omega_b) {
  return ModelParams(omega_a, omega_b, g, omega_a + omega_b + 2.0 * g * k);
}

ModelParams ModelParams::from_k_squared(double k2, double g, double omega_a,
                                        double omega_b,
                                        bool negative_detuning) {
  if (k2 < 0.0) throw std::invalid_argument("k^2 must be non-negative");
  const double k = negative_detuning ? -std::sqrt(k2) : std::sqrt(k2);
  return from_k(k, g, omega_a, omega_b);
}

std::string to_config(const ModelParams& params) {
  std::ostringstream out;
  out.precision(17);
  out << "omega_a = " << params.omega_a() << '\n'
      << "omega_b = " << params.omega_b() << '\n'
      << "omega = " << params.omega() << '\n'
      << "g = " << params.g() << '\n';
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double require_number(const std::map<std::string, std::string>& kv,
                      const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing key: " + key);
  std::size_t used = 0;
  double value = std::stod(it->second, &used);
  if (used != it->second.size()) {
    throw std::invalid_argument("not a number for key " + key + ": " +
                                it->second);
  }
  return value;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

ModelParams params_from_config(const std::string& text) {
  const auto kv = parse_key_values(text);
  return ModelParams(require_number(kv, "omega_a"),
                     require_number(kv, "omega_b"), require_number(kv, "g"),
                     require_number(kv, "omega"));
}

Regime classify_regime(const ModelParams& params, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double k2 = params.k_squared();
  if (k2 < 1.0 - epsilon) return {RegimeTag::Sub, epsilon};
  if (k2 > 1.0 + epsilon) return {RegimeTag::Super, epsilon};
  return {RegimeTag::Critical, epsilon};
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Sub:
      return "sub";
    case RegimeTag::Critical:
      return "critical";
    case RegimeTag::Super:
      return "super";
  }
  return "?";
}

// ---------------------------------------------------------------------------

PumpProfile PumpProfile::harmonic(double g, double omega) {
  return PumpProfile(HarmonicPump{g, omega});
}

PumpProfile PumpProfile::harmonic(const ModelParams& params) {
  return harmonic(params.g(), params.omega());
}

PumpProfile PumpProfile::tabulated(std::vector<double> times,
                                   std::vector<complex> values,
                                   Interpolation rule) {
  if (times.size() != values.size() || times.size() < 2) {
    throw std::invalid_argument(
        "tabulated pump needs matching time/value lists of length >= 2");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("tabulated pump times must increase");
    }
  }
  return PumpProfile(TabulatedPump{std::move(times), std::move(values), rule});
}

PumpProfile PumpProfile::custom(std::function<complex(double)> evaluate) {
  if (!evaluate) throw std::invalid_argument("custom pump needs a callable");
  return PumpProfile(CustomPump{std::move(evaluate)});
}

namespace {

complex interpolate(const TabulatedPump& tab, double t) {
  const auto& ts = tab.times;
  const auto& vs = tab.values;
  if (t < ts.front() || t > ts.back()) {
    throw std::out_of_range("time outside tabulated pump range");
  }
  auto upper = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t i = upper == ts.end()
                      ? ts.size() - 2
                      : static_cast<std::size_t>(upper - ts.begin()) - 1;
  i = std::min(i, ts.size() - 2);
  const double h = ts[i + 1] - ts[i];
  const double s = (t - ts[i]) / h;
  if (tab.rule == Interpolation::Linear) {
    return vs[i] * (1.0 - s) + vs[i + 1] * s;
  }
  // Hermite with finite-difference slopes (one-sided at the ends).
  auto slope = [&](std::size_t j) -> complex {
    if (j == 0) return (vs[1] - vs[0]) / (ts[1] - ts[0]);
    const std::size_t last = ts.size() - 1;
    if (j == last) return (vs[last] - vs[last - 1]) / (ts[last] - ts[last - 1]);
    const double h0 = ts[j] - ts[j - 1];
    const double h1 = ts[j + 1] - ts[j];
    // Three-point derivative, second order on non-uniform grids.
    return (vs[j + 1] - vs[j]) * (h0 / (h1 * (h0 + h1))) +
           (vs[j] - vs[j - 1]) * (h1 / (h0 * (h0 + h1)));
  };
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return vs[i] * h00 + slope(i) * (h10 * h) + vs[i + 1] * h01 +
         slope(i + 1) * (h11 * h);
}

}  // namespace

complex PumpProfile::operator()(double t) const {
  return std::visit(
      [t](const auto& kind) -> complex {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, HarmonicPump>) {
          return kind.g * std::exp(complex(0.0, kind.omega * t));
        } else if constexpr (std::is_same_v<K, TabulatedPump>) {
          return interpolate(kind, t);
        } else {
          return kind.evaluate(t);
        }
      },
      kind_);
}

// ---------------------------------------------------------------------------

std::vector<RevivalSpec> fock_revival_times(const ModelParams& params,
                                            int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  if (classify_regime(params).tag != RegimeTag::Super) {
    throw RegimeError("Fock revivals require k^2 > 1");
  }
  const double rate = params.g() * std::sqrt(params.k_squared() - 1.0);
  std::vector<RevivalSpec> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    out.push_back({n, 0, n * std::numbers::pi / rate});
  }
  return out;
}

CoherentRevival coherent_revival_params(int n, int p, RevivalKind kind) {
  if (n <= 0 || p < 0 || p >= n) {
    throw std::domain_error("coherent revival needs n > p >= 0");
  }
  if (kind == RevivalKind::Full && (n - p) % 2 != 0) {
    throw ParityError("n and p must have equal parity for a full revival");
  }
  const double ratio = static_cast<double>(p) / n;
  CoherentRevival out;
  out.n = n;
  out.p = p;
  out.k_squared = 1.0 / (1.0 - ratio * ratio);
  out.gt_rev = std::numbers::pi *
               std::sqrt(static_cast<double>(n) * n - static_cast<double>(p) * p);
  out.kind = (n - p) % 2 == 0 ? RevivalKind::Full : RevivalKind::SecondFactor;
  out.super_regime = p >= 1;
  return out;
}

}  // namespace ndpa
