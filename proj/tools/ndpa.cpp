// Command-line front end: closed-form evolution, probabilities, observables,
// figure presets, parameter sweeps and oracle cross-checks, all as CSV.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ndpa/errors.hpp"
#include "ndpa/scenario.hpp"

namespace {

struct CommonOptions {
  std::optional<std::string> scenario_file;
  std::map<std::string, std::optional<std::string>> values;
  std::optional<std::string> fock;
  std::string out;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_file, "key = value scenario file")
        ->check(CLI::ExistingFile);
    const std::vector<std::pair<std::string, std::string>> flags{
        {"k2", "squared detuning ratio k^2"},
        {"g", "pump amplitude"},
        {"omega-a", "a-mode frequency"},
        {"omega-b", "b-mode frequency"},
        {"omega", "pump frequency (instead of --k2)"},
        {"tmin", "first g*t"},
        {"tmax", "last g*t"},
        {"steps", "number of grid points"},
        {"state", "fock, coherent or poisson"},
        {"r", "initial a-mode photons"},
        {"s", "initial b-mode photons"},
        {"alpha", "a-mode coherent amplitude (real part)"},
        {"alpha-im", "a-mode coherent amplitude (imaginary part)"},
        {"beta", "b-mode coherent amplitude (real part)"},
        {"beta-im", "b-mode coherent amplitude (imaginary part)"},
        {"theta", "local-oscillator phase"},
        {"tol", "ODE tolerance"},
    };
    for (const auto& [name, help] : flags)
      cmd->add_option("--" + name, values[name], help);
    cmd->add_option("--fock", fock, "initial Fock state as r,s");
    cmd->add_option("--out", out, "output file (default: stdout)");
  }

  std::map<std::string, std::string> config() const {
    std::map<std::string, std::string> kv;
    if (scenario_file) {
      std::ifstream in(*scenario_file);
      std::stringstream buf;
      buf << in.rdbuf();
      kv = ndpa::parse_key_values(buf.str());
    }
    for (const auto& [name, value] : values) {
      if (!value) continue;
      std::string key = name;
      for (char& ch : key)
        if (ch == '-') ch = '_';
      kv[key] = *value;
    }
    if (values.at("omega") && kv.count("k2") && !values.at("k2")) kv.erase("k2");
    if (values.at("k2") && kv.count("omega") && !values.at("omega")) kv.erase("omega");
    if (fock) {
      const auto comma = fock->find_first_of(",:");
      if (comma == std::string::npos)
        throw std::invalid_argument("--fock expects r,s");
      kv["state"] = "fock";
      kv["r"] = fock->substr(0, comma);
      kv["s"] = fock->substr(comma + 1);
    }
    return kv;
  }
};

void emit(const ndpa::Table& table, const std::string& path) {
  if (path.empty() || path == "-") {
    ndpa::write_csv(table, std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  ndpa::write_csv(table, out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-degenerate parametric amplifier: closed-form dynamics"};
  app.require_subcommand(1);

  CommonOptions evolve_opts;
  bool use_ode = false;
  auto* evolve = app.add_subcommand("evolve", "Evolution coefficients A+, A0, A- on a g*t grid");
  evolve_opts.add_to(evolve);
  evolve->add_flag("--ode", use_ode, "integrate the equations of motion");

  CommonOptions prob_opts;
  std::string outcomes;
  auto* prob = app.add_subcommand("prob", "Transition probabilities p_mn");
  prob_opts.add_to(prob);
  prob->add_option("--outcomes", outcomes, "list of m:n (or n) outcomes");

  CommonOptions obs_opts;
  std::string obs_name;
  std::optional<std::string> levels;
  std::optional<std::string> w_final;
  std::optional<std::string> z_final;
  auto* observable = app.add_subcommand("observable", "A named observable on a g*t grid");
  obs_opts.add_to(observable);
  observable->add_option("name", obs_name,
                         "prob, revival, transition, mandel_q, correlation, quadrature, "
                         "uncertainty, rho, eta, mean, reduced, coefficients")
      ->required();
  observable->add_option("--levels", levels, "photon numbers for 'reduced'");
  observable->add_option("--w", w_final, "final a-mode amplitude for 'transition'");
  observable->add_option("--z", z_final, "final b-mode amplitude for 'transition'");

  std::string figure_name;
  std::string figure_out;
  std::optional<int> figure_steps;
  auto* figure = app.add_subcommand("figure", "Built-in figure preset");
  figure->add_option("name", figure_name, "fig1 .. fig9, fig7log")->required();
  figure->add_option("--out", figure_out, "output file (default: stdout)");
  figure->add_option("--steps", figure_steps, "number of grid points");

  CommonOptions sweep_opts;
  std::string sweep_param;
  std::string sweep_values;
  std::string sweep_observable = "prob";
  auto* sweep = app.add_subcommand("sweep", "One column per parameter value");
  sweep_opts.add_to(sweep);
  sweep->add_option("--param", sweep_param, "k2, g, omega, omega_a, omega_b, theta, alpha, beta, r, s, fock")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values (fock: r:s)")->required();
  sweep->add_option("--observable", sweep_observable, "observable name");
  sweep->add_option("--outcomes", outcomes, "list of m:n (or n) outcomes");

  CommonOptions check_opts;
  int cutoff = 0;
  std::string check_times = "0.5,1,2";
  auto* check = app.add_subcommand("oracle-check", "Closed forms against the truncated propagator");
  check_opts.add_to(check);
  check->add_option("--cutoff", cutoff, "photons per mode (0: automatic)");
  check->add_option("--times", check_times, "comma-separated g*t values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (evolve->parsed()) {
      auto kv = evolve_opts.config();
      kv["observable"] = "coefficients";
      if (use_ode) kv["solver"] = "ode";
      emit(ndpa::run(ndpa::scenario_from_config(kv)), evolve_opts.out);
    } else if (prob->parsed()) {
      auto kv = prob_opts.config();
      kv["observable"] = "prob";
      if (!outcomes.empty()) kv["outcomes"] = outcomes;
      emit(ndpa::run(ndpa::scenario_from_config(kv)), prob_opts.out);
    } else if (observable->parsed()) {
      auto kv = obs_opts.config();
      kv["observable"] = obs_name;
      if (levels) kv["levels"] = *levels;
      if (w_final) kv["w"] = *w_final;
      if (z_final) kv["z"] = *z_final;
      emit(ndpa::run(ndpa::scenario_from_config(kv)), obs_opts.out);
    } else if (figure->parsed()) {
      auto sc = ndpa::figure_preset(figure_name);
      if (figure_steps) sc.grid.steps = *figure_steps;
      emit(ndpa::run(sc), figure_out);
    } else if (sweep->parsed()) {
      auto kv = sweep_opts.config();
      kv["observable"] = sweep_observable;
      if (!outcomes.empty()) kv["outcomes"] = outcomes;
      emit(ndpa::sweep(ndpa::scenario_from_config(kv), sweep_param,
                       split_list(sweep_values)),
           sweep_opts.out);
    } else if (check->parsed()) {
      auto kv = check_opts.config();
      ndpa::OracleConfig cfg;
      cfg.cutoff = cutoff;
      if (kv.count("tol")) cfg.tol = std::stod(kv.at("tol"));
      kv.erase("tol");
      const auto sc = ndpa::scenario_from_config(kv);
      std::vector<double> gts;
      for (const auto& item : split_list(check_times)) gts.push_back(std::stod(item));
      const auto rows = ndpa::oracle_check(sc.series.front(), gts, cfg);
      bool ok = true;
      std::ostringstream report;
      report << "gt,cutoff,prob_diff,moment_diff,deficit,tolerance,status\n";
      for (const auto& r : rows) {
        report << ndpa::format_number(r.gt) << ',' << r.cutoff << ','
               << ndpa::format_number(r.prob_diff) << ','
               << ndpa::format_number(r.moment_diff) << ','
               << ndpa::format_number(r.deficit) << ','
               << ndpa::format_number(r.tolerance) << ','
               << (r.pass ? "pass" : "FAIL") << '\n';
        ok = ok && r.pass;
      }
      if (check_opts.out.empty() || check_opts.out == "-") {
        std::cout << report.str();
      } else {
        std::ofstream(check_opts.out) << report.str();
      }
      if (!ok) {
        std::cerr << "error: closed form and oracle disagree beyond tolerance\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
