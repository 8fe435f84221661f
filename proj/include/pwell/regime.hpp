#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pwell/functionals.hpp"
#include "pwell/wells.hpp"

namespace pwell {

enum class Regime {
  GlobalDecay,
  Blowup,
  CriticalGlobal,
  CriticalBlowup,
  HighEnergyBlowup,
  SupercriticalGlobal,
  Indeterminate,
};

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::GlobalDecay: return "GlobalDecay";
    case Regime::Blowup: return "Blowup";
    case Regime::CriticalGlobal: return "CriticalGlobal";
    case Regime::CriticalBlowup: return "CriticalBlowup";
    case Regime::HighEnergyBlowup: return "HighEnergyBlowup";
    case Regime::SupercriticalGlobal: return "SupercriticalGlobal";
    case Regime::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

/// Relative half-width of the band around d_hat treated as critical.
inline constexpr double kNearCriticalBand = 0.05;

struct RegimeReport {
  double J0 = 0.0;
  double I0 = 0.0;
  double grad_sq0 = 0.0;  ///< ||grad v0||^2
  double h1_sq0 = 0.0;    ///< ||v0||_{H^1_0}^2
  double d_hat = 0.0;
  double d_formula_at_1 = 0.0;
  double lambda1 = 0.0;
  bool trivial = false;  ///< v0 = 0
  bool in_W = false;
  bool in_V = false;
  bool near_critical = false;
  std::vector<double> delta_grid;
  std::vector<bool> in_W_delta;
  std::vector<bool> in_V_delta;
  std::optional<double> delta1;
  std::optional<double> delta2;
  Regime predicted_regime = Regime::Indeterminate;
  double mu_pred = 0.0;
  /// J0 > 0; ||v0||^2_{H^1_0} > 2(lambda1+1)(1+p)/(lambda1(p-1)) J0; I0 < 0.
  std::array<bool, 3> high_energy_checks{false, false, false};
  std::optional<double> alpha;
  std::optional<double> lambda_alpha_lower;
  std::optional<double> lambda_alpha_estimate;
};

/// Threshold 2(lambda1+1)(1+p)/(lambda1(p-1)) multiplying J0 in the high-energy test.
inline double high_energy_factor(double lambda1, const ModelParams& params) {
  const double p = params.p();
  return 2.0 * (lambda1 + 1.0) * (1.0 + p) / (lambda1 * (p - 1.0));
}

/// Places v0 against the hypotheses of the existence, decay and blow-up
/// results. `alpha` enables the supercritical global-existence test.
inline RegimeReport classify_initial(std::span<const double> coeffs0, const WellConstants& k,
                                     std::optional<double> alpha = std::nullopt) {
  Discretization disc(k.domain, k.oversample);
  if (coeffs0.size() != disc.modes()) throw InvalidArgument("initial data does not match the analysed domain");
  const auto t = energy_terms(disc, coeffs0, k.params);
  RegimeReport r;
  r.J0 = J(t, k.params);
  r.I0 = I(t, k.params);
  r.grad_sq0 = t.gradient_sq;
  r.h1_sq0 = t.h1_sq();
  r.d_hat = k.d_hat;
  r.d_formula_at_1 = k.d_formula_at_1;
  r.lambda1 = k.lambda1;
  r.alpha = alpha;
  r.trivial = t.gradient_sq == 0.0;

  r.in_W = r.trivial || (r.I0 > 0.0 && r.J0 < k.d_hat);
  r.in_V = r.I0 < 0.0 && r.J0 < k.d_hat;
  r.near_critical = std::abs(r.J0 - k.d_hat) < kNearCriticalBand * k.d_hat;

  const bool cached = k.grid_delta.size() == 200 && k.grid_depth.size() == 200;
  r.delta_grid = cached ? k.grid_delta : delta_grid(k.delta0, 200);
  for (std::size_t i = 0; i < r.delta_grid.size(); ++i) {
    const double d = r.delta_grid[i];
    const double depth = cached ? k.grid_depth[i] : k.d_hat_at(d);
    const double id = I_delta(t, d, k.params);
    r.in_W_delta.push_back(r.trivial || (r.J0 < depth && id > 0.0));
    r.in_V_delta.push_back(r.J0 < depth && id < 0.0);
  }

  if (r.J0 > 0.0 && r.J0 < k.d_hat) {
    const auto [d1, d2] = delta_roots(r.J0, k);
    r.delta1 = d1;
    r.delta2 = d2;
  }

  r.high_energy_checks = {r.J0 > 0.0, r.h1_sq0 > high_energy_factor(k.lambda1, k.params) * r.J0,
                          r.I0 < 0.0};
  const bool high_energy = r.high_energy_checks[0] && r.high_energy_checks[1] && r.high_energy_checks[2];

  if (alpha && *alpha > k.d_hat) {
    const auto la = lambda_alpha(*alpha, k);
    r.lambda_alpha_lower = la.lower_bound;
    r.lambda_alpha_estimate = la.estimate;
  }
  const double edge = k.lambda1 / (1.0 + k.lambda1);

  if (r.trivial) {
    r.predicted_regime = Regime::Indeterminate;
  } else if (r.I0 < 0.0) {
    if (r.J0 < k.d_hat && !r.near_critical)
      r.predicted_regime = Regime::Blowup;
    else if (r.near_critical)
      r.predicted_regime = Regime::CriticalBlowup;
    else if (high_energy)
      r.predicted_regime = Regime::HighEnergyBlowup;
  } else {
    const bool supercritical = r.lambda_alpha_lower && r.J0 > k.d_hat && r.J0 < *alpha &&
                               r.I0 > 0.0 && r.h1_sq0 < *r.lambda_alpha_lower;
    if (supercritical && !r.near_critical)
      r.predicted_regime = Regime::SupercriticalGlobal;
    else if (r.J0 < k.d_hat && !r.near_critical)
      r.predicted_regime = Regime::GlobalDecay;
    else if (r.near_critical)
      r.predicted_regime = Regime::CriticalGlobal;
  }

  if ((r.predicted_regime == Regime::GlobalDecay || r.predicted_regime == Regime::CriticalGlobal) &&
      r.delta1)
    r.mu_pred = (1.0 - *r.delta1) * edge;
  return r;
}

inline RegimeReport classify_initial(const Field& v0, const WellConstants& k,
                                     std::optional<double> alpha = std::nullopt) {
  if (!(v0.domain() == k.domain)) throw InvalidArgument("initial data domain differs from the analysed domain");
  Discretization disc(k.domain, k.oversample);
  return classify_initial(disc.to_spectral(v0.values()), k, alpha);
}

}  // namespace pwell
