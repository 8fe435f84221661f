// Command-line front end: analyze, simulate, classify, sweep, verify.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pwell/pwell.hpp"

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  bool inject_fault = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw pwell::ConfigError("cannot read config file " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

pwell::Experiment load(const Options& o, bool allow_default) {
  using namespace pwell;
  if (!o.config.empty() && !o.preset.empty()) throw ConfigError("use either --config or --preset, not both");
  if (!o.preset.empty()) {
    PresetOptions po;
    if (o.seed) po.seed = *o.seed;
    if (o.budget) {
      AnalysisConfig a;
      a.directions = *o.budget;
      po.analysis = a;
    }
    return experiment_from_preset(parse_preset(o.preset), po);
  }
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = parse_config(read_file(o.config));
  } else if (!allow_default) {
    throw ConfigError("--config or --preset is required");
  }
  if (o.seed) cfg.set_seed(*o.seed);
  if (o.budget) cfg.analysis.directions = *o.budget;
  return experiment_from_config(std::move(cfg));
}

int report(const char* what, int code) {
  std::fprintf(stderr, "pwell: %s\n", what);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pwell;
  CLI::App app{"Spectral Galerkin simulator and potential-well analyzer for v_t - Lap v_t - Lap v = v|v|^{p-1} log|v|"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment configuration file");
    sub->add_option("--preset", o.preset, "scenario preset (S1..S5 or full name)");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "override every seed");
    sub->add_option("--budget", o.budget, "random directions for the well depth");
  };
  auto* analyze = app.add_subcommand("analyze", "well constants and curve");
  auto* simulate = app.add_subcommand("simulate", "integrate the configured initial data");
  auto* classify = app.add_subcommand("classify", "regime report of the initial data");
  auto* sweep = app.add_subcommand("sweep", "amplitude sweep along the initial data");
  auto* verify = app.add_subcommand("verify", "property suite");
  for (auto* s : {analyze, simulate, classify, sweep, verify}) add_common(s);
  verify->add_flag("--inject-fault", o.inject_fault, "evaluate I with the wrong sign on the log term");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const std::filesystem::path out(o.out);
    const auto exp = load(o, verify->parsed());
    write_text(out / "config.ini", format_config(exp.config));
    int code = kExitOk;
    if (analyze->parsed()) {
      const auto r = run_analyze(exp, out);
      std::printf("C = %.10g  d_hat = %.10g  d_formula(1) = %.10g  delta0 = %.10g\n", r.constants.sobolev_C,
                  r.constants.d_hat, r.constants.d_formula_at_1, r.constants.delta0);
      code = r.exit_code;
    } else if (classify->parsed()) {
      const auto r = run_classify(exp, out);
      std::printf("regime %s  J0 = %.10g  I0 = %.10g  d_hat = %.10g\n", to_string(r.report.predicted_regime).c_str(),
                  r.report.J0, r.report.I0, r.report.d_hat);
      code = r.exit_code;
    } else if (simulate->parsed()) {
      const auto r = run_simulate(exp, out);
      std::printf("%s at t = %.10g  energy residual %.3e  predicted %s\n", to_string(r.outcome.kind).c_str(),
                  r.outcome.final_state.t, r.energy_residual, to_string(r.report.predicted_regime).c_str());
      code = r.exit_code;
    } else if (sweep->parsed()) {
      const auto r = run_sweep(exp, out);
      if (r.transition)
        std::printf("transition between amplitudes %.10g and %.10g\n", r.transition->first, r.transition->second);
      else
        std::printf("no decay-to-blowup transition on the grid\n");
      code = r.exit_code;
    } else if (verify->parsed()) {
      const auto r = run_verify(exp, out, o.inject_fault ? Fault::WrongSignI : Fault::None);
      for (const auto& p : r.report.properties)
        std::printf("%-4s %-28s %zu/%zu\n", p.passed() ? "ok" : "FAIL", p.name.c_str(), p.cases - p.failures, p.cases);
      code = r.exit_code;
    }
    return code;
  } catch (const ConfigError& e) {
    return report(e.what(), kExitConfig);
  } catch (const HypothesisViolation& e) {
    return report(e.what(), kExitFailure);
  } catch (const NumericalFailure& e) {
    return report(e.what(), kExitNumerical);
  } catch (const InvalidArgument& e) {
    return report(e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return report(e.what(), kExitFailure);
  }
}
