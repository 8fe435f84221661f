#pragma once

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pwell/config.hpp"
#include "pwell/io.hpp"
#include "pwell/monitors.hpp"
#include "pwell/parallel.hpp"
#include "pwell/regime.hpp"
#include "pwell/scenarios.hpp"
#include "pwell/solver.hpp"
#include "pwell/verify.hpp"
#include "pwell/wells.hpp"

namespace pwell {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumerical = 3 };

/// A configuration plus, for presets, the generated data and its expectations.
struct Experiment {
  ExperimentConfig config;
  std::optional<ScenarioPreset> preset;
};

inline Experiment experiment_from_config(ExperimentConfig cfg) { return Experiment{std::move(cfg), std::nullopt}; }

inline Experiment experiment_from_preset(PresetId id, const PresetOptions& opt = {}) {
  auto s = make_preset(id, opt);
  Experiment e{s.config, std::move(s)};
  return e;
}

inline WellConstants constants_for(const Experiment& e) {
  if (e.preset) return e.preset->constants;
  const auto& c = e.config;
  return compute_well_constants(c.domain, c.model, c.analysis.budget(), c.solver.oversample);
}

inline std::vector<double> initial_data_for(const Experiment& e) {
  if (e.preset) return e.preset->q0;
  return initial_coefficients(e.config, Discretization(e.config.domain, e.config.solver.oversample));
}

struct AnalyzeResult {
  WellConstants constants;
  WellCurve curve;
  int exit_code = kExitOk;
};

/// constants.json and curve.csv.
inline AnalyzeResult run_analyze(const Experiment& e, const std::filesystem::path& out) {
  AnalyzeResult r{constants_for(e), {}};
  r.curve = well_curve(r.constants, e.config.analysis.delta_points);
  std::ostringstream csv;
  write_curve_csv(csv, r.curve);
  write_json(out / "constants.json", to_json(r.constants));
  write_text(out / "curve.csv", csv.str());
  return r;
}

struct ClassifyResult {
  RegimeReport report;
  int exit_code = kExitOk;
};

/// report.json.
inline ClassifyResult run_classify(const Experiment& e, const std::filesystem::path& out) {
  ClassifyResult r;
  if (e.preset) {
    r.report = e.preset->expected;
  } else {
    const auto k = constants_for(e);
    r.report = classify_initial(initial_data_for(e), k, e.config.analysis.alpha);
  }
  auto j = to_json(r.report);
  if (e.preset) {
    Json hs = Json::array();
    for (const auto& h : e.preset->hypotheses) hs.push_back({{"name", h.name}, {"holds", h.holds}});
    j["preset"] = to_string(e.preset->id);
    j["hypotheses"] = std::move(hs);
  }
  write_json(out / "report.json", j);
  return r;
}

struct SimulateResult {
  RunOutcome outcome;
  RegimeReport report;
  std::optional<DecayCheck> decay;
  BlowupCheck blowup;
  bool sign_persistent = false;
  double energy_residual = 0.0;
  bool expectation_met = true;
  int exit_code = kExitOk;
};

inline bool outcome_matches(Regime r, OutcomeKind k) {
  switch (r) {
    case Regime::GlobalDecay:
    case Regime::CriticalGlobal:
    case Regime::SupercriticalGlobal: return k == OutcomeKind::Completed;
    case Regime::Blowup:
    case Regime::CriticalBlowup:
    case Regime::HighEnergyBlowup: return k == OutcomeKind::BlownUp;
    default: return true;
  }
}

/// Evaluates the monitors that apply to a finished run.
inline SimulateResult assess_run(RunOutcome outcome, const RegimeReport& report) {
  SimulateResult r;
  r.report = report;
  const auto& tr = outcome.trajectory;
  r.energy_residual = energy_residual(tr);
  r.sign_persistent = sign_persistence_check(tr);
  r.blowup = blowup_monitor(tr);
  const bool decay_regime =
      report.predicted_regime == Regime::GlobalDecay || report.predicted_regime == Regime::CriticalGlobal;
  if (decay_regime && outcome.kind == OutcomeKind::Completed && tr.rows.size() >= 10)
    r.decay = decay_monitor(tr, report);
  r.expectation_met = outcome_matches(report.predicted_regime, outcome.kind);
  r.outcome = std::move(outcome);
  return r;
}

inline Json summary_json(const SimulateResult& r, const Experiment& e) {
  const auto& o = r.outcome;
  Json j;
  if (e.preset) j["preset"] = to_string(e.preset->id);
  j["outcome"] = to_string(o.kind);
  j["reason"] = o.reason ? Json(to_string(*o.reason)) : Json(nullptr);
  j["T_est"] = optional_number(o.T_est);
  j["t_final"] = o.final_state.t;
  j["accepted_steps"] = o.accepted_steps;
  j["rejected_steps"] = o.rejected_steps;
  j["rows"] = o.trajectory.rows.size();
  j["residuals"] = {{"energy", number(r.energy_residual)}};
  j["predicted_regime"] = to_string(r.report.predicted_regime);
  j["expectation_met"] = r.expectation_met;
  j["J0"] = number(r.report.J0);
  j["I0"] = number(r.report.I0);
  j["d_hat"] = r.report.d_hat;
  j["sign_persistence"] = r.sign_persistent;
  j["mu_pred"] = r.report.mu_pred;
  j["fitted_rate"] = r.decay ? number(r.decay->fitted_rate) : Json(nullptr);
  j["bound_holds"] = r.decay ? Json(r.decay->bound_holds) : Json(nullptr);
  j["blowup"] = {{"concavity_onset", optional_number(r.blowup.concavity_onset)},
                 {"T_est", optional_number(r.blowup.T_est)},
                 {"tail_linearity_R2", number(r.blowup.tail_linearity_R2)},
                 {"mdd_violations", r.blowup.mdd_violations}};
  return j;
}

/// trajectory.csv and summary.json.
inline SimulateResult run_simulate(const Experiment& e, const std::filesystem::path& out) {
  const auto& c = e.config;
  const auto q0 = initial_data_for(e);
  RegimeReport report;
  if (e.preset) {
    report = e.preset->expected;
  } else {
    report = classify_initial(q0, constants_for(e), c.analysis.alpha);
  }
  GalerkinSystem sys(Discretization(c.domain, c.solver.oversample), c.model, c.solver.disable_source);
  auto r = assess_run(integrate(q0, sys, c.solver), report);
  std::ostringstream csv;
  write_trajectory_csv(csv, r.outcome.trajectory);
  write_text(out / "trajectory.csv", csv.str());
  write_json(out / "summary.json", summary_json(r, e));
  if (r.outcome.kind == OutcomeKind::ToleranceFailure)
    r.exit_code = kExitNumerical;
  else if (e.preset && !r.expectation_met)
    r.exit_code = kExitFailure;
  return r;
}

struct SweepRow {
  double amplitude = 0.0;
  double J0 = 0.0;
  double I0 = 0.0;
  Regime regime = Regime::Indeterminate;
  std::optional<OutcomeKind> outcome;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<std::pair<double, double>> transition;  ///< (last GlobalDecay, first Blowup) amplitudes
  int exit_code = kExitOk;
};

/// Scales the configured initial data by every amplitude of the grid.
inline SweepResult run_sweep(const Experiment& e, const std::filesystem::path& out) {
  const auto& c = e.config;
  const auto k = constants_for(e);
  const auto dir = initial_data_for(e);
  const auto& a = c.analysis;
  SweepResult res;
  res.rows = parallel_map(a.sweep_count, [&](std::size_t i) {
    SweepRow row;
    row.amplitude = a.sweep_count == 1 ? a.sweep_min
                                       : a.sweep_min + (a.sweep_max - a.sweep_min) * static_cast<double>(i) /
                                                           static_cast<double>(a.sweep_count - 1);
    std::vector<double> q(dir);
    for (double& x : q) x *= row.amplitude;
    const auto rep = classify_initial(q, k, a.alpha);
    row.J0 = rep.J0;
    row.I0 = rep.I0;
    row.regime = rep.predicted_regime;
    if (a.sweep_simulate) {
      GalerkinSystem sys(Discretization(c.domain, c.solver.oversample), c.model);
      row.outcome = integrate(q, sys, c.solver).kind;
    }
    return row;
  });
  std::optional<double> last_decay;
  for (const auto& r : res.rows) {
    if (r.regime == Regime::GlobalDecay) last_decay = r.amplitude;
    if (r.regime == Regime::Blowup && last_decay) {
      res.transition = {{*last_decay, r.amplitude}};
      break;
    }
  }
  std::ostringstream csv;
  csv << "amplitude,J0,I0,regime,outcome\n";
  for (const auto& r : res.rows)
    csv << format_double(r.amplitude) << "," << format_double(r.J0) << "," << format_double(r.I0) << ","
        << to_string(r.regime) << "," << (r.outcome ? to_string(*r.outcome) : std::string()) << "\n";
  write_text(out / "sweep.csv", csv.str());
  Json j{{"rows", res.rows.size()}, {"d_hat", k.d_hat}};
  j["transition"] = res.transition ? Json{{"last_decay", res.transition->first}, {"first_blowup", res.transition->second}}
                                   : Json(nullptr);
  write_json(out / "sweep.json", j);
  for (const auto& r : res.rows)
    if (r.outcome == OutcomeKind::ToleranceFailure) res.exit_code = kExitNumerical;
  return res;
}

struct VerifyResult {
  VerifyReport report;
  int exit_code = kExitOk;
};

/// verify.json; exit code 1 when any property fails.
inline VerifyResult run_verify(const Experiment& e, const std::filesystem::path& out, Fault fault = Fault::None) {
  VerifyOptions opt;
  opt.fault = fault;
  VerifyResult r{run_property_suite(e.config, opt)};
  auto j = to_json(r.report);
  j["fault"] = fault == Fault::WrongSignI ? "wrong_sign_I" : "none";
  write_json(out / "verify.json", j);
  r.exit_code = r.report.passed() ? kExitOk : kExitFailure;
  return r;
}

}  // namespace pwell
