#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwell/config.hpp"
#include "pwell/error.hpp"
#include "pwell/fibering.hpp"
#include "pwell/regime.hpp"
#include "pwell/wells.hpp"

namespace pwell {

/// A generated initial datum failed the hypotheses its preset is meant to realise.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

enum class PresetId {
  S1_subcritical_decay,
  S2_subcritical_blowup,
  S3_critical,
  S4_high_energy_blowup,
  S5_supercritical_global,
};

inline constexpr PresetId kAllPresets[] = {PresetId::S1_subcritical_decay, PresetId::S2_subcritical_blowup,
                                           PresetId::S3_critical, PresetId::S4_high_energy_blowup,
                                           PresetId::S5_supercritical_global};

inline std::string to_string(PresetId id) {
  switch (id) {
    case PresetId::S1_subcritical_decay: return "S1_subcritical_decay";
    case PresetId::S2_subcritical_blowup: return "S2_subcritical_blowup";
    case PresetId::S3_critical: return "S3_critical";
    case PresetId::S4_high_energy_blowup: return "S4_high_energy_blowup";
    case PresetId::S5_supercritical_global: return "S5_supercritical_global";
  }
  return "";
}

inline PresetId parse_preset(const std::string& s) {
  for (PresetId id : kAllPresets) {
    const auto name = to_string(id);
    if (s == name || s == name.substr(0, 2)) return id;
  }
  throw ConfigError("unknown preset '" + s + "'");
}

struct Hypothesis {
  std::string name;
  bool holds = false;
};

struct ScenarioPreset {
  PresetId id{};
  ExperimentConfig config;
  std::vector<double> q0;
  WellConstants constants;
  RegimeReport expected;
  std::vector<Hypothesis> hypotheses;
  bool advisory = false;  ///< critical data: J0 = d_hat only approximates J0 = d
  std::optional<std::pair<double, double>> search_point;  ///< S4 (a, b)
};

/// Base configuration of a preset: domain, power and solver settings.
inline ExperimentConfig preset_base(PresetId id) {
  ExperimentConfig c;
  c.domain = DomainSpec::interval(1.0, 128);
  c.model = ModelParams(3.0);
  c.solver.t_end = 5.0;
  c.solver.rel_tol = 1e-8;
  switch (id) {
    case PresetId::S2_subcritical_blowup:
      // p = 3 is the borderline where int ||v||^2_{H^1_0} diverges only
      // logarithmically at blow-up; p = 5 gives a linear N^{-(p-1)/2} tail.
      c.model = ModelParams(5.0);
      c.solver.t_end = 1.0;
      break;
    case PresetId::S4_high_energy_blowup:
      c.solver.t_end = 1.0;
      break;
    case PresetId::S5_supercritical_global:
      // On (0,1) the Lambda_alpha bound sits far below d_hat for every p.
      c.domain = DomainSpec::interval(30.0, 128);
      c.model = ModelParams(10.0);
      break;
    default:
      break;
  }
  return c;
}

namespace detail {

inline double max_abs_fine(const Discretization& disc, std::span<const double> q) {
  double m = 0.0;
  for (double x : disc.fine_values(q)) m = std::max(m, std::abs(x));
  return m;
}

/// Amplitude beta on the chosen side of beta* with J(beta v) = target.
inline double amplitude_for_energy(const RaySummary& ray, const ModelParams& params, double target,
                                   bool beyond_peak) {
  const double bs = beta_star(ray, params);
  auto f = [&](double b) { return j_on_ray(ray, b, params) - target; };
  double lo, hi;
  if (beyond_peak) {
    lo = bs;
    hi = 2.0 * bs;
    for (int n = 0; f(hi) > 0.0; ++n) {
      hi *= 2.0;
      if (n > 200) throw NumericalFailure("no amplitude reaches the target energy");
    }
    if (f(lo) < 0.0) throw NumericalFailure("target energy above the ray maximum");
    return bisect_decreasing_zero(f, lo, hi, 1e-15);
  }
  lo = 0.0;
  hi = bs;
  if (f(hi) < 0.0) throw NumericalFailure("target energy above the ray maximum");
  // J is increasing on (0, beta*)
  return bisect_decreasing_zero([&](double b) { return -f(b); }, lo, hi, 1e-15);
}

inline std::vector<double> mode_vector(const Discretization& disc, std::size_t k, double amp) {
  std::vector<double> q(disc.modes(), 0.0);
  q.at(k - 1) = amp;
  return q;
}

}  // namespace detail

/// Data on the sin(pi x / L) ray with J0 = d_hat. Falls back to 0.99 d_hat on
/// the I >= 0 side when the ray maximum does not exceed d_hat.
inline std::vector<double> critical_data(const WellConstants& k, bool negative_branch) {
  Discretization disc(k.domain, k.oversample);
  auto dir = detail::mode_vector(disc, 1, 1.0);
  const auto ray = RaySummary::of(energy_terms(disc, dir, k.params));
  const double peak = j_on_ray(ray, beta_star(ray, k.params), k.params);
  const double target = (!negative_branch && peak <= k.d_hat) ? 0.99 * peak : k.d_hat;
  const double beta = detail::amplitude_for_energy(ray, k.params, std::min(target, peak), negative_branch);
  for (double& x : dir) x *= beta;
  return dir;
}

struct PresetOptions {
  std::uint64_t seed = 1;               ///< initial-data seed (S1, S2)
  std::optional<AnalysisConfig> analysis;
  std::optional<WellConstants> constants;  ///< reuse precomputed constants for this domain and p
  bool negative_branch = false;            ///< S3: take the I < 0 side
};

inline void require(std::vector<Hypothesis>& hs, std::string name, bool holds) {
  hs.push_back(Hypothesis{std::move(name), holds});
}

/// Builds a preset and checks its hypotheses; throws HypothesisViolation on failure.
inline ScenarioPreset make_preset(PresetId id, const PresetOptions& opt = {}) {
  ScenarioPreset s;
  s.id = id;
  s.config = preset_base(id);
  if (opt.analysis) s.config.analysis = *opt.analysis;
  auto& cfg = s.config;
  if (opt.constants && opt.constants->domain == cfg.domain && opt.constants->params.p() == cfg.model.p())
    s.constants = *opt.constants;
  else
    s.constants = compute_well_constants(cfg.domain, cfg.model, cfg.analysis.budget(), cfg.solver.oversample);
  const auto& k = s.constants;
  Discretization disc(cfg.domain, cfg.solver.oversample);
  const double band = kNearCriticalBand * k.d_hat;

  switch (id) {
    case PresetId::S1_subcritical_decay: {
      cfg.initial.random_seed = opt.seed;
      cfg.initial.random_amplitude = 0.5;
      break;
    }
    case PresetId::S2_subcritical_blowup: {
      auto q = random_smooth_coeffs(disc, opt.seed, 0);
      const auto ray = RaySummary::of(energy_terms(disc, q, cfg.model));
      const double beta = detail::amplitude_for_energy(ray, cfg.model, 0.5 * k.d_hat, true);
      for (double& x : q) x *= beta;
      cfg.initial.random_seed = opt.seed;
      cfg.initial.random_amplitude = detail::max_abs_fine(disc, q);
      break;
    }
    case PresetId::S3_critical: {
      const auto q = critical_data(k, opt.negative_branch);
      cfg.initial.modes = {InitialMode{{1}, q[0]}};
      s.advisory = true;
      break;
    }
    case PresetId::S4_high_energy_blowup: {
      bool found = false;
      for (int ia = 0; ia <= 20 && !found; ++ia) {
        for (int ib = 0; ib <= 20 && !found; ++ib) {
          const double a = 0.5 * ia, b = 0.5 * ib;
          std::vector<double> q(disc.modes(), 0.0);
          q[0] = a;
          q[1] = b;
          const auto t = energy_terms(disc, q, cfg.model);
          const double j0 = J(t, cfg.model), i0 = I(t, cfg.model);
          const bool ok = j0 > 0.0 && t.h1_sq() > high_energy_factor(k.lambda1, cfg.model) * j0 && i0 < 0.0 &&
                          j0 > k.d_hat + band;
          if (ok) {
            found = true;
            s.search_point = {a, b};
            cfg.initial.modes = {InitialMode{{1}, a}, InitialMode{{2}, b}};
          }
        }
      }
      if (!found) throw HypothesisViolation("no grid point satisfies the high-energy conditions");
      break;
    }
    case PresetId::S5_supercritical_global: {
      // A single high mode: I0 > 0 at small amplitude while J0 is close to
      // half of ||v0||^2_{H^1_0}.
      const std::size_t mode = 40;
      const double lower = std::pow(1.0 / k.C_eff(), 2.0 / cfg.model.p());
      auto q = detail::mode_vector(disc, mode, 1.0);
      const double h1 = disc.weighted_energy(q, [&] {
        std::vector<double> w(disc.modes());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + disc.spectrum().eigenvalues[i];
        return w;
      }());
      const double amp = std::sqrt(0.9 * lower / h1);
      cfg.initial.modes = {InitialMode{{mode}, amp}};
      const auto t = energy_terms(disc, detail::mode_vector(disc, mode, amp), cfg.model);
      cfg.analysis.alpha = 1.5 * J(t, cfg.model);
      break;
    }
  }

  s.q0 = initial_coefficients(cfg, disc);
  s.expected = classify_initial(s.q0, k, cfg.analysis.alpha);
  const auto& r = s.expected;
  switch (id) {
    case PresetId::S1_subcritical_decay:
      require(s.hypotheses, "I0 > 0", r.I0 > 0.0);
      require(s.hypotheses, "0 < J0 < d_hat", r.J0 > 0.0 && r.J0 < k.d_hat);
      require(s.hypotheses, "outside the critical band", !r.near_critical);
      break;
    case PresetId::S2_subcritical_blowup:
      require(s.hypotheses, "I0 < 0", r.I0 < 0.0);
      require(s.hypotheses, "0 < J0 < d_hat", r.J0 > 0.0 && r.J0 < k.d_hat);
      break;
    case PresetId::S3_critical:
      require(s.hypotheses, "|J0 - d_hat| within the critical band", r.near_critical);
      require(s.hypotheses, opt.negative_branch ? "I0 < 0" : "I0 >= 0",
              opt.negative_branch ? r.I0 < 0.0 : r.I0 >= 0.0);
      break;
    case PresetId::S4_high_energy_blowup:
      require(s.hypotheses, "(i) J0 > 0", r.high_energy_checks[0]);
      require(s.hypotheses, "(ii) ||v0||^2_{H^1_0} > 2(lambda1+1)(1+p)/(lambda1(p-1)) J0", r.high_energy_checks[1]);
      require(s.hypotheses, "(iii) I0 < 0", r.high_energy_checks[2]);
      break;
    case PresetId::S5_supercritical_global:
      require(s.hypotheses, "p admissible for n = 1", cfg.model.supercritical_admissible(1));
      require(s.hypotheses, "I0 > 0", r.I0 > 0.0);
      require(s.hypotheses, "d_hat < J0 < alpha", r.J0 > k.d_hat && r.alpha && r.J0 < *r.alpha);
      require(s.hypotheses, "||v0||^2_{H^1_0} < (1/C_eff)^{2/p}",
              r.lambda_alpha_lower && r.h1_sq0 < *r.lambda_alpha_lower);
      break;
  }
  for (const auto& h : s.hypotheses)
    if (!h.holds) throw HypothesisViolation(to_string(id) + ": hypothesis violated: " + h.name);
  return s;
}

}  // namespace pwell
