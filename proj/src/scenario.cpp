#include "ndpa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ndpa/observables.hpp"
#include "ndpa/oracle.hpp"
#include "ndpa/wei_norman.hpp"

namespace ndpa {

namespace {

const std::map<std::string, ObservableKind>& observable_names() {
  static const std::map<std::string, ObservableKind> names{
      {"prob", ObservableKind::Probability},
      {"revival", ObservableKind::Revival},
      {"transition", ObservableKind::Transition},
      {"mandel_q", ObservableKind::MandelQ},
      {"correlation", ObservableKind::Correlation},
      {"quadrature", ObservableKind::Quadrature},
      {"uncertainty", ObservableKind::Uncertainty},
      {"rho", ObservableKind::Rho},
      {"eta", ObservableKind::Eta},
      {"mean", ObservableKind::Mean},
      {"reduced", ObservableKind::Reduced},
      {"coefficients", ObservableKind::Coefficients},
  };
  return names;
}

double to_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::invalid_argument("'" + key + "': not a number: '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_number(key, text);
  if (v != std::floor(v) || v < 0 || v > 1e7)
    throw std::invalid_argument("'" + key + "': expected a non-negative integer");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double get(const std::map<std::string, std::string>& kv, const std::string& key,
           double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : to_number(key, it->second);
}

complex get_complex(const std::map<std::string, std::string>& kv,
                    const std::string& key) {
  return {get(kv, key, 0.0), get(kv, key + "_im", 0.0)};
}

ModelParams params_from(const std::map<std::string, std::string>& kv) {
  const double g = get(kv, "g", 1.0);
  const double wa = get(kv, "omega_a", 1.0);
  const double wb = get(kv, "omega_b", 1.0);
  const bool has_k2 = kv.count("k2") > 0;
  const bool has_omega = kv.count("omega") > 0;
  if (has_k2 && has_omega)
    throw std::invalid_argument("give either k2 or omega, not both");
  if (has_omega) return ModelParams(wa, wb, g, get(kv, "omega", 0.0));
  const double k2 = get(kv, "k2", 1.5);
  if (!(k2 >= 0.0)) throw std::invalid_argument("k2 must be >= 0");
  return ModelParams::from_k_squared(k2, g, wa, wb);
}

std::vector<FockOutcome> parse_outcomes(const std::string& text,
                                        const StateSpec& state) {
  std::vector<FockOutcome> out;
  for (const auto& token : split(text, ',')) {
    const auto colon = token.find(':');
    if (colon != std::string::npos) {
      out.push_back({to_int("outcomes", token.substr(0, colon)),
                     to_int("outcomes", token.substr(colon + 1))});
      continue;
    }
    const int n = to_int("outcomes", token);
    if (const auto* f = std::get_if<FockPair>(&state)) {
      out.push_back({f->s - f->r + n, n});
    } else {
      out.push_back({n, n});
    }
  }
  return out;
}

StateSpec state_from(const std::map<std::string, std::string>& kv) {
  const auto it = kv.find("state");
  const std::string kind = it == kv.end() ? "fock" : it->second;
  if (kind == "fock")
    return FockPair{kv.count("r") ? to_int("r", kv.at("r")) : 0,
                    kv.count("s") ? to_int("s", kv.at("s")) : 0};
  if (kind == "coherent")
    return CoherentPair{get_complex(kv, "alpha"), get_complex(kv, "beta")};
  if (kind == "poisson") return PoissonAMode{get_complex(kv, "alpha")};
  throw std::invalid_argument("unknown state '" + kind +
                              "' (fock, coherent, poisson)");
}

std::string fock_label(FockPair f) {
  return std::to_string(f.r) + ":" + std::to_string(f.s);
}

// The Poisson a-mode state with phases s*arg(alpha) is the coherent state
// |alpha, 0>; observables beyond photon counting use that form.
const CoherentPair* as_coherent(const StateSpec& state, CoherentPair& storage) {
  if (const auto* c = std::get_if<CoherentPair>(&state)) return c;
  if (const auto* p = std::get_if<PoissonAMode>(&state)) {
    storage = {p->alpha, 0.0};
    return &storage;
  }
  return nullptr;
}

[[noreturn]] void mismatch(const Series& s, const char* needs) {
  throw std::invalid_argument("observable '" +
                              std::string(to_string(s.observable.kind)) +
                              "' needs " + needs);
}

std::vector<std::string> column_names(const Series& s) {
  const auto& obs = s.observable;
  switch (obs.kind) {
    case ObservableKind::Probability: {
      std::vector<std::string> out;
      for (const auto& o : obs.outcomes)
        out.push_back("p_" + std::to_string(o.m) + "_" + std::to_string(o.n));
      return out;
    }
    case ObservableKind::Revival:
      return {"p_return", "diagnostic"};
    case ObservableKind::Transition:
      return {"p_transition"};
    case ObservableKind::MandelQ:
      return {"Q"};
    case ObservableKind::Correlation:
      return {"f", "F"};
    case ObservableKind::Quadrature:
      return {"var_x"};
    case ObservableKind::Uncertainty:
      return {"dx_theta", "dx_theta_perp", "product"};
    case ObservableKind::Rho:
      return {"rho"};
    case ObservableKind::Eta:
      return {"eta", "yuen_bound"};
    case ObservableKind::Mean:
      return {"mean_a", "mean_b"};
    case ObservableKind::Reduced: {
      std::vector<std::string> out;
      for (long m : obs.levels) out.push_back("pb_" + std::to_string(m));
      for (long n : obs.levels) out.push_back("pa_" + std::to_string(n));
      return out;
    }
    case ObservableKind::Coefficients:
      return {"a_plus_re", "a_plus_im", "a_zero_re", "a_zero_im",
              "a_minus_re", "a_minus_im", "x", "n0"};
  }
  return {};
}

void check_fits(const Series& s) {
  const bool fock = std::holds_alternative<FockPair>(s.state);
  const bool coherent = std::holds_alternative<CoherentPair>(s.state);
  const bool poisson = std::holds_alternative<PoissonAMode>(s.state);
  switch (s.observable.kind) {
    case ObservableKind::Probability:
      if (coherent) mismatch(s, "a fock or poisson state");
      if (s.observable.outcomes.empty())
        throw std::invalid_argument("observable 'prob' needs outcomes");
      break;
    case ObservableKind::Reduced:
      if (!poisson) mismatch(s, "a poisson state");
      break;
    case ObservableKind::Revival:
    case ObservableKind::Transition:
      if (fock) mismatch(s, "a coherent or poisson state");
      break;
    default:
      break;
  }
}

std::vector<double> evaluate_at(const Series& s, double t,
                                const WeiNormanCoefficients& c) {
  const auto& obs = s.observable;
  const DerivedScalars d = derived_scalars(s.params, t);
  CoherentPair coherent_storage{};
  const CoherentPair* coh = as_coherent(s.state, coherent_storage);
  const FockPair* fock = std::get_if<FockPair>(&s.state);

  switch (obs.kind) {
    case ObservableKind::Probability: {
      std::vector<double> out;
      if (fock) {
        for (const auto& o : obs.outcomes)
          out.push_back(std::norm(fock_amplitude(c, *fock, o)));
      } else {
        const auto psi =
            PureAModeState::poisson(std::get<PoissonAMode>(s.state).alpha);
        for (const auto& o : obs.outcomes) out.push_back(amode_prob(d, psi, o));
      }
      return out;
    }
    case ObservableKind::Revival: {
      const auto r = coherent_revival_prob(c, *coh);
      return {r.prob, r.diagnostic};
    }
    case ObservableKind::Transition:
      return {coherent_transition_prob(c, *coh, obs.final_state)};
    case ObservableKind::MandelQ: {
      if (fock) return {mandel_q_fock(d, *fock)};
      const auto q = mandel_q_coherent(second_moments(*coh, c));
      return {q ? *q : std::nan("")};
    }
    case ObservableKind::Correlation: {
      const CrossCorrelation cc =
          fock ? cross_correlation_fock(d, *fock)
               : cross_correlation_general(second_moments(*coh, c));
      return {cc.f, cc.normalized ? *cc.normalized : std::nan("")};
    }
    case ObservableKind::Quadrature: {
      const auto kernel = squeezing_kernel(s.params, obs.theta, t);
      return {fock ? quadrature_variance(kernel, *fock)
                   : quadrature_variance(kernel, *coh)};
    }
    case ObservableKind::Uncertainty: {
      const InitialProduct state =
          fock ? InitialProduct{*fock} : InitialProduct{*coh};
      const double v0 =
          quadrature_variance(squeezing_kernel(s.params, obs.theta, t), state);
      const double v1 = quadrature_variance(
          squeezing_kernel(s.params, obs.theta + std::numbers::pi / 2, t), state);
      return {std::sqrt(v0), std::sqrt(v1),
              uncertainty_product(s.params, obs.theta, t, state)};
    }
    case ObservableKind::Rho: {
      if (fock) return {snr_rho_fock(d, *fock).as_double()};
      return {snr_eta_coherent(c, d, *coh).rho.as_double()};
    }
    case ObservableKind::Eta: {
      const auto report =
          fock ? snr_eta_fock(d, *fock) : snr_eta_coherent(c, d, *coh);
      return {report.eta, report.yuen_bound};
    }
    case ObservableKind::Mean: {
      if (fock) {
        const auto m = mean_photon_fock(d, *fock);
        return {m.a, m.b};
      }
      const auto m = coherent_mean_numbers(c, d, *coh);
      return {m.a, m.b};
    }
    case ObservableKind::Reduced: {
      const auto psi =
          PureAModeState::poisson(std::get<PoissonAMode>(s.state).alpha);
      std::vector<double> out;
      for (long m : obs.levels) out.push_back(reduced_density_b(d, psi, m));
      for (long n : obs.levels) out.push_back(reduced_density_a(d, psi, n));
      return out;
    }
    case ObservableKind::Coefficients: {
      // From the coefficients themselves, which may come from the ODE.
      const DerivedScalars dc = derived_scalars(c);
      return {c.a_plus.real(),  c.a_plus.imag(),  c.a_zero.real(),
              c.a_zero.imag(),  c.a_minus.real(), c.a_minus.imag(),
              dc.x,             dc.n0};
    }
  }
  return {};
}

// Columns of one series over the whole grid (column-major).
std::vector<std::vector<double>> evaluate_series(const Series& s,
                                                 const std::vector<double>& gts) {
  check_fits(s);
  std::vector<double> times;
  times.reserve(gts.size());
  for (double gt : gts) times.push_back(s.params.time_at(gt));

  std::vector<WeiNormanCoefficients> coeffs;
  if (s.observable.kind == ObservableKind::Coefficients && s.observable.use_ode) {
    if (times.front() != 0.0)
      throw std::invalid_argument("the ODE solver needs a grid starting at 0");
    coeffs = solve_ode(PumpProfile::harmonic(s.params), s.params, times,
                       s.observable.tol);
  } else {
    for (double t : times) coeffs.push_back(solve_analytic(s.params, t));
  }

  const std::size_t ncols = column_names(s).size();
  std::vector<std::vector<double>> cols(ncols, std::vector<double>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::vector<double> row = evaluate_at(s, times[i], coeffs[i]);
    for (std::size_t j = 0; j < ncols; ++j) cols[j][i] = row[j];
  }
  return cols;
}

Series fock_series(const std::string& label, double k2, FockPair f,
                   ObservableKind kind, std::vector<FockOutcome> outcomes = {}) {
  Series s{label, ModelParams::from_k_squared(k2), f, {}};
  s.observable.kind = kind;
  s.observable.outcomes = std::move(outcomes);
  return s;
}

Series coherent_series(const std::string& label, double k2, CoherentPair p,
                       ObservableKind kind) {
  Series s{label, ModelParams::from_k_squared(k2), p, {}};
  s.observable.kind = kind;
  return s;
}

Series fock_theta_series(const std::string& label, double k2, double theta,
                         ObservableKind kind) {
  Series s = fock_series(label, k2, {0, 0}, kind);
  s.observable.theta = theta;
  return s;
}

}  // namespace

const char* to_string(ObservableKind kind) {
  for (const auto& [name, k] : observable_names())
    if (k == kind) return name.c_str();
  return "unknown";
}

ObservableKind observable_from_string(const std::string& name) {
  const auto it = observable_names().find(name);
  if (it == observable_names().end()) {
    std::string known;
    for (const auto& [n, k] : observable_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown observable '" + name + "' (" + known + ")");
  }
  return it->second;
}

std::vector<double> TimeGrid::points() const {
  if (steps < 2) throw std::invalid_argument("grid needs at least 2 steps");
  if (!(end > start) || !std::isfinite(start) || !std::isfinite(end))
    throw std::invalid_argument("grid needs tmax > tmin");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    out[static_cast<std::size_t>(i)] =
        i == steps - 1 ? end : start + (end - start) * i / (steps - 1);
  return out;
}

Scenario scenario_from_config(const std::map<std::string, std::string>& kv) {
  static const std::vector<std::string> known{
      "k2", "g", "omega_a", "omega_b", "omega", "state", "r", "s", "alpha",
      "alpha_im", "beta", "beta_im", "observable", "outcomes", "levels",
      "theta", "w", "w_im", "z", "z_im", "tmin", "tmax", "steps", "solver",
      "tol", "label", "name"};
  for (const auto& [key, value] : kv)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown scenario key '" + key + "'");

  Series s{kv.count("label") ? kv.at("label") : "", params_from(kv), state_from(kv), {}};
  s.observable.kind = observable_from_string(
      kv.count("observable") ? kv.at("observable") : "prob");
  if (kv.count("outcomes")) {
    s.observable.outcomes = parse_outcomes(kv.at("outcomes"), s.state);
  } else if (const auto* f = std::get_if<FockPair>(&s.state)) {
    s.observable.outcomes = {{f->s, f->r}};
  } else {
    s.observable.outcomes = {{0, 0}};
  }
  if (kv.count("levels")) {
    s.observable.levels.clear();
    for (const auto& tok : split(kv.at("levels"), ','))
      s.observable.levels.push_back(to_int("levels", tok));
  }
  s.observable.theta = get(kv, "theta", 0.0);
  s.observable.final_state = {get_complex(kv, "w"), get_complex(kv, "z")};
  if (kv.count("solver")) {
    const auto& solver = kv.at("solver");
    if (solver != "closed" && solver != "ode")
      throw std::invalid_argument("solver must be 'closed' or 'ode'");
    s.observable.use_ode = solver == "ode";
  }
  s.observable.tol = get(kv, "tol", 1e-10);

  Scenario sc;
  sc.name = kv.count("name") ? kv.at("name") : "scenario";
  sc.grid.start = get(kv, "tmin", 0.0);
  sc.grid.end = get(kv, "tmax", 10.0);
  sc.grid.steps = kv.count("steps") ? to_int("steps", kv.at("steps")) : 1001;
  sc.series.push_back(std::move(s));
  return sc;
}

Scenario parse_scenario(const std::string& text) {
  return scenario_from_config(parse_key_values(text));
}

std::vector<std::string> figure_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5",
          "fig6", "fig7", "fig7log", "fig8", "fig9"};
}

Scenario figure_preset(const std::string& name) {
  using K = ObservableKind;
  Scenario sc;
  sc.name = name;
  sc.grid.steps = 1001;
  const double pi = std::numbers::pi;
  if (name == "fig1" || name == "fig2") {
    const bool above = name == "fig1";
    sc.grid.end = above ? 12.0 : 8.0;
    sc.series.push_back(fock_series("", above ? 1.5 : 0.5, {1, 1},
                                    K::Probability, {{1, 1}, {3, 3}}));
  } else if (name == "fig3") {
    sc.grid.end = 20.0;
    for (double k2 : {1.5, 0.5}) {
      Series s{k2 > 1 ? "k2=1.5" : "k2=0.5", ModelParams::from_k_squared(k2),
               PoissonAMode{0.85}, {}};
      s.observable.outcomes = {{1, 2}};
      sc.series.push_back(s);
    }
  } else if (name == "fig4") {
    sc.grid.end = 10.0;
    sc.series.push_back(fock_series("1:0", 1.5, {1, 0}, K::MandelQ));
    sc.series.push_back(fock_series("0:1", 1.5, {0, 1}, K::MandelQ));
    sc.series.push_back(fock_series("1:0", 1.5, {1, 0}, K::Correlation));
    sc.series.push_back(fock_series("50:10", 1.5, {50, 10}, K::Correlation));
    sc.series.push_back(fock_series("50:0", 1.5, {50, 0}, K::Correlation));
    sc.series.push_back(fock_series("1:1", 1.5, {1, 1}, K::Correlation));
  } else if (name == "fig5") {
    sc.grid.end = 50.0;
    sc.grid.steps = 5001;
    sc.series.push_back(coherent_series("k2=9/5", 9.0 / 5.0, {1.0, 1.0}, K::Revival));
    sc.series.push_back(coherent_series("k2=pi", pi, {5.0, 5.0}, K::Revival));
  } else if (name == "fig6") {
    sc.grid.end = 10.0;
    for (FockPair f : {FockPair{50, 10}, FockPair{50, 0}}) {
      sc.series.push_back(fock_series("k2=0.5 " + fock_label(f), 0.5, f, K::Correlation));
      sc.series.push_back(fock_series("k2=0.5 " + fock_label(f), 0.5, f, K::MandelQ));
    }
    sc.series.push_back(coherent_series("k2=1.5 coherent 50:10", 1.5,
                                        {std::sqrt(50.0), std::sqrt(10.0)},
                                        K::Correlation));
    sc.series.push_back(coherent_series("k2=1.5 coherent 50:0", 1.5,
                                        {std::sqrt(50.0), 0.0}, K::Correlation));
  } else if (name == "fig7" || name == "fig7log") {
    const bool above = name == "fig7";
    sc.grid.end = above ? 15.0 : 6.0;
    sc.series.push_back(fock_theta_series("", above ? 9.0 / 5.0 : 0.5, 0.0,
                                          K::Uncertainty));
  } else if (name == "fig8") {
    sc.grid.end = 10.0;
    sc.series.push_back(coherent_series("", 10.0, {0.0, 3.0}, K::Eta));
  } else if (name == "fig9") {
    sc.grid.end = 10.0;
    for (FockPair f : {FockPair{1, 1}, FockPair{0, 10}, FockPair{100, 1}, FockPair{1, 100}})
      for (double k2 : {1.5, 0.5})
        sc.series.push_back(fock_series(
            fock_label(f) + (k2 > 1 ? " k2=1.5" : " k2=0.5"), k2, f, K::Rho));
  } else {
    std::string known;
    for (const auto& n : figure_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown figure '" + name + "' (" + known + ")");
  }
  return sc;
}

Table run(const Scenario& scenario) {
  if (scenario.series.empty()) throw std::invalid_argument("scenario has no series");
  const auto gts = scenario.grid.points();
  Table table;
  table.columns.push_back("gt");
  std::vector<std::vector<double>> cols{gts};
  const bool tagged = scenario.series.size() > 1;
  for (const auto& s : scenario.series) {
    const auto names = column_names(s);
    auto values = evaluate_series(s, gts);
    for (std::size_t j = 0; j < names.size(); ++j) {
      table.columns.push_back(tagged && !s.label.empty()
                                  ? names[j] + "[" + s.label + "]"
                                  : names[j]);
      cols.push_back(std::move(values[j]));
    }
  }
  table.rows.assign(gts.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < gts.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) table.rows[i][j] = cols[j][i];
  return table;
}

Table sweep(const Scenario& scenario, const std::string& parameter,
            const std::vector<std::string>& values) {
  if (scenario.series.size() != 1)
    throw std::invalid_argument("sweep needs a single-series scenario");
  if (values.empty()) throw std::invalid_argument("sweep needs values");
  Table out;
  for (const auto& value : values) {
    Scenario sc = scenario;
    Series& s = sc.series.front();
    const ModelParams& p = s.params;
    auto need_fock = [&]() -> FockPair& {
      auto* f = std::get_if<FockPair>(&s.state);
      if (!f) throw std::invalid_argument("sweeping '" + parameter + "' needs a fock state");
      return *f;
    };
    auto need_coherent = [&]() -> CoherentPair& {
      auto* c = std::get_if<CoherentPair>(&s.state);
      if (!c) throw std::invalid_argument("sweeping '" + parameter + "' needs a coherent state");
      return *c;
    };
    if (parameter == "k2") {
      s.params = ModelParams::from_k_squared(to_number(parameter, value), p.g(),
                                             p.omega_a(), p.omega_b());
    } else if (parameter == "g") {
      // Keeps k fixed by scaling the detuning with g.
      const double g = to_number(parameter, value);
      s.params = ModelParams::from_k(p.k(), g, p.omega_a(), p.omega_b());
    } else if (parameter == "omega") {
      s.params = ModelParams(p.omega_a(), p.omega_b(), p.g(), to_number(parameter, value));
    } else if (parameter == "omega_a") {
      s.params = ModelParams(to_number(parameter, value), p.omega_b(), p.g(), p.omega());
    } else if (parameter == "omega_b") {
      s.params = ModelParams(p.omega_a(), to_number(parameter, value), p.g(), p.omega());
    } else if (parameter == "theta") {
      s.observable.theta = to_number(parameter, value);
    } else if (parameter == "alpha") {
      if (auto* pa = std::get_if<PoissonAMode>(&s.state)) {
        pa->alpha = to_number(parameter, value);
      } else {
        need_coherent().alpha = to_number(parameter, value);
      }
    } else if (parameter == "beta") {
      need_coherent().beta = to_number(parameter, value);
    } else if (parameter == "r") {
      need_fock().r = to_int(parameter, value);
    } else if (parameter == "s") {
      need_fock().s = to_int(parameter, value);
    } else if (parameter == "fock") {
      const auto parts = split(value, ':');
      if (parts.size() != 2) throw std::invalid_argument("fock values look like r:s");
      need_fock() = {to_int(parameter, parts[0]), to_int(parameter, parts[1])};
    } else {
      throw std::invalid_argument("cannot sweep '" + parameter + "'");
    }
    if (std::holds_alternative<FockPair>(s.state) &&
        s.observable.kind == ObservableKind::Probability &&
        (parameter == "r" || parameter == "s" || parameter == "fock")) {
      const auto& f = std::get<FockPair>(s.state);
      for (auto& o : s.observable.outcomes) o.m = f.s - f.r + o.n;
    }

    const Table t = run(sc);
    if (out.columns.empty()) {
      out.columns.push_back("gt");
      out.rows.assign(t.rows.size(), {});
      for (std::size_t i = 0; i < t.rows.size(); ++i) out.rows[i].push_back(t.rows[i][0]);
    }
    for (std::size_t j = 1; j < t.columns.size(); ++j) {
      out.columns.push_back(t.columns[j] + "[" + parameter + "=" + value + "]");
      for (std::size_t i = 0; i < t.rows.size(); ++i) out.rows[i].push_back(t.rows[i][j]);
    }
  }
  return out;
}

std::vector<OracleCheckRow> oracle_check(const Series& series,
                                         const std::vector<double>& gts,
                                         const OracleConfig& cfg) {
  const PumpProfile pump = PumpProfile::harmonic(series.params);
  OracleInitial initial = FockPair{0, 0};
  InitialProduct product = FockPair{0, 0};
  std::optional<PureAModeState> psi;
  if (const auto* f = std::get_if<FockPair>(&series.state)) {
    initial = *f;
    product = *f;
  } else if (const auto* c = std::get_if<CoherentPair>(&series.state)) {
    initial = *c;
    product = *c;
  } else {
    psi = PureAModeState::poisson(std::get<PoissonAMode>(series.state).alpha);
    initial = *psi;
    product = CoherentPair{std::get<PoissonAMode>(series.state).alpha, 0.0};
  }

  std::vector<OracleCheckRow> rows;
  for (double gt : gts) {
    const double t = series.params.time_at(gt);
    const auto c = solve_analytic(series.params, t);
    const auto d = derived_scalars(series.params, t);
    const OracleRun run = evolve_converged(pump, series.params, initial, t, cfg);
    const TruncatedState& state = run.state;

    double prob_diff = 0.0;
    const int top = std::min(state.cutoff(), 40);
    if (const auto* f = std::get_if<FockPair>(&series.state)) {
      for (int n = 0; n <= top; ++n) {
        const FockOutcome o{f->s - f->r + n, n};
        if (o.m < 0) continue;
        prob_diff = std::max(prob_diff, std::abs(std::norm(fock_amplitude(c, *f, o)) -
                                                 oracle_probability(state, o)));
      }
    } else if (const auto* cp = std::get_if<CoherentPair>(&series.state)) {
      const complex a = cp->alpha;
      const complex b = cp->beta;
      for (const CoherentPair& fin : {*cp, CoherentPair{0.5 * a + complex(0.0, 0.3), -b},
                                      CoherentPair{1.0 - a, 0.7 * b + 1.0}})
        prob_diff = std::max(prob_diff, std::abs(coherent_transition_prob(c, *cp, fin) -
                                                 std::norm(oracle_coherent_overlap(state, fin))));
      const int fock_top = std::min(top, 12);
      for (int n = 0; n <= fock_top; ++n)
        for (int m = 0; m <= fock_top; ++m)
          prob_diff = std::max(prob_diff,
                               std::abs(std::norm(coherent_fock_amplitude(c, *cp, {m, n})) -
                                        oracle_probability(state, {m, n})));
    } else {
      for (int n = 0; n <= top; ++n) {
        for (int m = 0; m <= n; ++m)
          prob_diff = std::max(prob_diff, std::abs(amode_prob(d, *psi, {m, n}) -
                                                   oracle_probability(state, {m, n})));
        prob_diff = std::max(prob_diff, std::abs(reduced_density_a(d, *psi, n) -
                                                 oracle_marginal_a(state, n)));
        prob_diff = std::max(prob_diff, std::abs(reduced_density_b(d, *psi, n) -
                                                 oracle_marginal_b(state, n)));
      }
    }

    double moment_diff = 0.0;
    const MomentTable table = second_moments(product, c);
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j)
        for (int k = 0; i + j + k <= 4; ++k)
          for (int l = 0; i + j + k + l <= 4; ++l) {
            const complex exact = table(i, j, k, l);
            const double diff = std::abs(exact - oracle_moment(state, i, j, k, l));
            moment_diff = std::max(moment_diff, diff / std::max(1.0, std::abs(exact)));
          }

    OracleCheckRow row{};
    row.gt = gt;
    row.cutoff = state.cutoff();
    row.prob_diff = prob_diff;
    row.moment_diff = moment_diff;
    row.deficit = std::max(state.norm_deficit(), state.peak_edge_population());
    row.tolerance = 1e-8 + row.deficit + run.change;
    row.pass = prob_diff <= row.tolerance && moment_diff <= row.tolerance;
    rows.push_back(row);
  }
  return rows;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t j = 0; j < table.columns.size(); ++j)
    out << (j ? "," : "") << table.columns[j];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? "," : "") << format_number(row[j]);
    out << '\n';
  }
}

}  // namespace ndpa
