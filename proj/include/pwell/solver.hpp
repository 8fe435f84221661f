#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pwell/error.hpp"
#include "pwell/functionals.hpp"

namespace pwell {

struct SolverConfig {
  double t_end = 1.0;
  double dt_init = 1e-3;
  double dt_min = 0.0;  ///< 0 selects 1e-12 * t_end
  double dt_max = 0.25;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double blowup_threshold = 1e6;  ///< in ||v||_{H^1_0}
  int oversample = 2;
  std::size_t record_stride = 1;
  std::size_t max_rejections = 200;  ///< consecutive rejections before giving up
  std::size_t max_steps = 2000000;
  bool disable_source = false;  ///< integrate the linear part only

  double effective_dt_min() const noexcept { return dt_min > 0.0 ? dt_min : 1e-12 * t_end; }

  void validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(t_end)) throw InvalidArgument("t_end must be positive");
    if (!positive(dt_init) || !positive(dt_max)) throw InvalidArgument("time steps must be positive");
    if (!(effective_dt_min() < dt_init && dt_init <= dt_max))
      throw InvalidArgument("time steps must satisfy dt_min < dt_init <= dt_max");
    if (!positive(rel_tol) || !positive(abs_tol)) throw InvalidArgument("tolerances must be positive");
    if (!positive(blowup_threshold)) throw InvalidArgument("blow-up threshold must be positive");
    if (oversample < 1) throw InvalidArgument("oversample must be >= 1");
    if (record_stride < 1) throw InvalidArgument("record_stride must be >= 1");
  }
};

/// Galerkin unknowns q_k(t) with the current step size.
struct SpectralState {
  double t = 0.0;
  std::vector<double> q;
  double dt = 0.0;
};

/// The projected system (1 + lambda_k) q_k' + lambda_k q_k = f_k, with f_k the
/// sine coefficient of v|v|^{p-1}log|v| computed on the oversampled grid.
class GalerkinSystem {
 public:
  GalerkinSystem(Discretization disc, ModelParams params, bool disable_source = false)
      : disc_(std::move(disc)), params_(params), disable_source_(disable_source) {
    const auto& ev = disc_.spectrum().eigenvalues;
    rate_.resize(ev.size());
    mass_.resize(ev.size());
    for (std::size_t k = 0; k < ev.size(); ++k) {
      rate_[k] = ev[k] / (1.0 + ev[k]);
      mass_[k] = 1.0 + ev[k];
    }
  }

  const Discretization& discretization() const noexcept { return disc_; }
  const ModelParams& params() const noexcept { return params_; }
  bool source_disabled() const noexcept { return disable_source_; }

  /// Decay rates lambda_k / (1 + lambda_k) of the linear part.
  std::span<const double> linear_rates() const noexcept { return rate_; }

  /// f_k / (1 + lambda_k).
  std::vector<double> nonlinear(std::span<const double> q) const {
    if (disable_source_) return std::vector<double>(q.size(), 0.0);
    auto fine = disc_.fine_values(q);
    const double p = params_.p();
    for (double& v : fine) v = log_source_value(v, p);
    auto f = disc_.project_fine(fine);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] /= mass_[k];
    return f;
  }

  /// q' = (-lambda q + f) / (1 + lambda).
  std::vector<double> rhs(std::span<const double> q) const {
    auto n = nonlinear(q);
    for (std::size_t k = 0; k < n.size(); ++k) n[k] -= rate_[k] * q[k];
    return n;
  }

  /// ||w||^2_{H^1_0} = scale sum (1 + lambda_k) w_k^2.
  double h1_sq(std::span<const double> w) const { return disc_.weighted_energy(w, mass_); }

 private:
  Discretization disc_;
  ModelParams params_;
  bool disable_source_;
  std::vector<double> rate_;
  std::vector<double> mass_;
};

inline std::vector<double> rhs(std::span<const double> q, const ModelParams& params, const DomainSpec& domain,
                               int oversample = 2) {
  return GalerkinSystem(Discretization(domain, oversample), params).rhs(q);
}

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr std::array<std::array<double, 6>, 7> a{{
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  }};
  static constexpr std::array<double, 7> b{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr std::array<double, 7> b_hat{5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

}  // namespace detail

/// Result of one attempted step.
struct StepResult {
  bool accepted = false;
  bool collapsed = false;  ///< step size fell below dt_min
  double error = 0.0;      ///< scaled local error estimate (accept when <= 1)
  double dt_used = 0.0;
  double dissipation = 0.0;  ///< int over the step of ||v_t||^2_{H^1_0}
  double n_increment = 0.0;  ///< int over the step of ||v||^2_{H^1_0}
};

/// Integrating-factor (Lawson) Dormand-Prince 5(4) stepper. The diagonal
/// linear part is propagated exactly by exp(-rate h); only the source is
/// treated explicitly. Time integrals of ||v_t||^2_{H^1_0} and ||v||^2_{H^1_0}
/// are accumulated with the same stage weights.
class LawsonStepper {
 public:
  LawsonStepper(const GalerkinSystem& sys, SolverConfig config) : sys_(sys), cfg_(std::move(config)) {
    cfg_.validate();
  }

  const SolverConfig& config() const noexcept { return cfg_; }

  /// Reference magnitude for the dissipation integral, normally max(1, |J(v0)|).
  void set_energy_scale(double s) { energy_scale_ = s; }
  void set_ledger(double ledger) { ledger_ = ledger; }

  /// Attempts one step from `state`. On acceptance the state advances and the
  /// next step size is proposed; on rejection only dt shrinks.
  StepResult attempt(SpectralState& state) {
    using T = detail::DormandPrince;
    const auto rate = sys_.linear_rates();
    const std::size_t n = state.q.size();
    StepResult res;
    double h = std::min(state.dt, cfg_.dt_max);
    h = std::min(h, cfg_.t_end - state.t);
    res.dt_used = h;

    if (!fsal_ || fsal_t_ != state.t) {
      stage_n_[0] = sys_.nonlinear(state.q);
      fsal_ = true;
      fsal_t_ = state.t;
    }
    std::array<std::vector<double>, 7>& N = stage_n_;
    std::array<std::vector<double>, 7> Q;
    Q[0] = state.q;
    std::array<std::vector<double>, 7> growth;  // exp(rate c_j h)
    for (std::size_t j = 0; j < 7; ++j) {
      growth[j].resize(n);
      for (std::size_t k = 0; k < n; ++k) growth[j][k] = std::exp(rate[k] * T::c[j] * h);
    }
    for (std::size_t i = 1; i < 7; ++i) {
      std::vector<double> w(state.q);
      for (std::size_t j = 0; j < i; ++j) {
        const double aij = T::a[i][j];
        if (aij == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) w[k] += h * aij * growth[j][k] * N[j][k];
      }
      for (std::size_t k = 0; k < n; ++k) w[k] /= growth[i][k];
      Q[i] = std::move(w);
      N[i] = sys_.nonlinear(Q[i]);
    }

    bool finite = true;
    std::vector<double> err(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double e = 0.0;
      for (std::size_t j = 0; j < 7; ++j) e += (T::b[j] - T::b_hat[j]) * growth[j][k] * N[j][k];
      err[k] = h * e / growth[6][k];
      finite = finite && std::isfinite(err[k]) && std::isfinite(Q[6][k]);
    }
    // The dissipation integral is part of the error-controlled system.
    double ledger_err = 0.0;
    for (std::size_t j = 0; j < 7 && finite; ++j) {
      std::vector<double> qdot(n);
      for (std::size_t k = 0; k < n; ++k) qdot[k] = N[j][k] - rate[k] * Q[j][k];
      const double d = sys_.h1_sq(qdot);
      const double hn = sys_.h1_sq(Q[j]);
      res.dissipation += h * T::b[j] * d;
      res.n_increment += h * T::b[j] * hn;
      ledger_err += h * (T::b[j] - T::b_hat[j]) * d;
    }
    const double qnorm = std::sqrt(std::max(sys_.h1_sq(state.q), sys_.h1_sq(Q[6])));
    const double lscale = cfg_.abs_tol + cfg_.rel_tol * std::max(energy_scale_, ledger_ + res.dissipation);
    res.error = finite ? std::max(std::sqrt(sys_.h1_sq(err)) / (cfg_.abs_tol + cfg_.rel_tol * qnorm),
                                  std::abs(ledger_err) / lscale)
                       : std::numeric_limits<double>::infinity();
    if (!std::isfinite(res.error)) res.error = std::numeric_limits<double>::infinity();

    if (res.error <= 1.0) {
      ledger_ += res.dissipation;
      state.q = std::move(Q[6]);
      state.t = (h == cfg_.t_end - state.t) ? cfg_.t_end : state.t + h;
      stage_n_[0] = std::move(N[6]);
      fsal_t_ = state.t;
      res.accepted = true;
      const double factor = res.error == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(res.error, -0.2), 0.2, 5.0);
      state.dt = std::clamp(h * factor, cfg_.effective_dt_min(), cfg_.dt_max);
    } else {
      res.dissipation = res.n_increment = 0.0;
      const double factor = std::isfinite(res.error) ? std::clamp(0.9 * std::pow(res.error, -0.2), 0.1, 0.5) : 0.5;
      state.dt = h * factor;
      if (state.dt < cfg_.effective_dt_min()) res.collapsed = true;
    }
    return res;
  }

 private:
  const GalerkinSystem& sys_;
  SolverConfig cfg_;
  std::array<std::vector<double>, 7> stage_n_;
  double energy_scale_ = 1.0;
  double ledger_ = 0.0;
  bool fsal_ = false;
  double fsal_t_ = 0.0;
};

/// One adaptive step (repeats rejected attempts). Throws NumericalFailure on collapse.
inline StepResult step(const GalerkinSystem& sys, SpectralState& state, const SolverConfig& config) {
  if (!(state.t < config.t_end)) throw InvalidArgument("state already at t_end");
  LawsonStepper stepper(sys, config);
  for (std::size_t tries = 0; tries <= config.max_rejections; ++tries) {
    auto r = stepper.attempt(state);
    if (r.accepted) return r;
    if (r.collapsed) throw NumericalFailure("step size fell below dt_min");
  }
  throw NumericalFailure("too many consecutive step rejections");
}

/// One row per recorded step; column order is the CSV order.
struct TrajectoryRow {
  double t = 0.0;
  double l2 = 0.0;           ///< ||v||
  double grad = 0.0;         ///< ||grad v||
  double h1_sq = 0.0;        ///< ||v||^2_{H^1_0}
  double power = 0.0;        ///< ||v||_{1+p}^{1+p}
  double J = 0.0;
  double I = 0.0;
  double ledger = 0.0;       ///< int_0^t ||v_t||^2_{H^1_0}
  double energy_residual = 0.0;
  double N = 0.0;
  double Ndot = 0.0;
  double Nddot = 0.0;
  double concavity_margin = 0.0;  ///< N N'' - ((1+p)/2) N'^2
  double dt = 0.0;
};

inline constexpr std::array<const char*, 14> kTrajectoryColumns{
    "t", "l2", "grad", "h1_sq", "power", "J", "I", "ledger", "energy_residual",
    "N", "Ndot", "Nddot", "concavity_margin", "dt"};

struct Trajectory {
  double p = 0.0;
  double lambda1 = 0.0;
  double J0 = 0.0;
  std::vector<TrajectoryRow> rows;
};

enum class OutcomeKind { Completed, BlownUp, ToleranceFailure };
enum class BlowupReason { NormThreshold, StepCollapse };

inline std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Completed: return "Completed";
    case OutcomeKind::BlownUp: return "BlownUp";
    case OutcomeKind::ToleranceFailure: return "ToleranceFailure";
  }
  return "ToleranceFailure";
}

inline std::string to_string(BlowupReason r) {
  return r == BlowupReason::NormThreshold ? "NormThreshold" : "StepCollapse";
}

struct RunOutcome {
  OutcomeKind kind = OutcomeKind::Completed;
  std::optional<double> T_est;          ///< time of the blow-up declaration
  std::optional<BlowupReason> reason;
  SpectralState final_state;
  Trajectory trajectory;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

inline TrajectoryRow make_row(const GalerkinSystem& sys, const SpectralState& s, double ledger, double N,
                              double J0) {
  const auto t = energy_terms(sys.discretization(), s.q, sys.params());
  const double p = sys.params().p();
  TrajectoryRow r;
  r.t = s.t;
  r.l2 = std::sqrt(t.l2_sq);
  r.grad = std::sqrt(t.gradient_sq);
  r.h1_sq = t.h1_sq();
  r.power = t.power;
  if (sys.source_disabled()) {
    r.J = 0.5 * t.gradient_sq;
    r.I = t.gradient_sq;
  } else {
    r.J = J(t, sys.params());
    r.I = I(t, sys.params());
  }
  r.ledger = ledger;
  r.energy_residual = std::abs(ledger + r.J - J0) / std::max(1.0, std::abs(J0));
  r.N = N;
  r.Ndot = r.h1_sq;
  r.Nddot = -2.0 * r.I;
  r.concavity_margin = N * r.Nddot - 0.5 * (1.0 + p) * r.Ndot * r.Ndot;
  r.dt = s.dt;
  return r;
}

/// Integrates from v0 until t_end, the blow-up threshold, or step collapse.
inline RunOutcome integrate(std::span<const double> q0, const GalerkinSystem& sys, const SolverConfig& config) {
  config.validate();
  if (q0.size() != sys.discretization().modes()) throw InvalidArgument("initial coefficients do not match the domain");
  RunOutcome out;
  SpectralState s{0.0, std::vector<double>(q0.begin(), q0.end()), config.dt_init};
  LawsonStepper stepper(sys, config);
  double ledger = 0.0, N = 0.0;
  const auto terms0 = energy_terms(sys.discretization(), s.q, sys.params());
  const double J0 = sys.source_disabled() ? 0.5 * terms0.gradient_sq : J(terms0, sys.params());
  stepper.set_energy_scale(std::max(1.0, std::abs(J0)));
  out.trajectory.p = sys.params().p();
  out.trajectory.lambda1 = sys.discretization().lambda1();
  out.trajectory.J0 = J0;
  out.trajectory.rows.push_back(make_row(sys, s, ledger, N, J0));

  std::size_t consecutive = 0;
  while (s.t < config.t_end) {
    if (out.accepted_steps >= config.max_steps) {
      out.kind = OutcomeKind::ToleranceFailure;
      break;
    }
    const auto r = stepper.attempt(s);
    if (!r.accepted) {
      ++out.rejected_steps;
      if (r.collapsed) {
        out.kind = OutcomeKind::BlownUp;
        out.reason = BlowupReason::StepCollapse;
        out.T_est = s.t;
        break;
      }
      if (++consecutive > config.max_rejections) {
        out.kind = OutcomeKind::ToleranceFailure;
        break;
      }
      continue;
    }
    consecutive = 0;
    ++out.accepted_steps;
    ledger += r.dissipation;
    N += r.n_increment;
    const double norm = std::sqrt(sys.h1_sq(s.q));
    const bool blown = norm >= config.blowup_threshold;
    const bool done = s.t >= config.t_end;
    if (blown || done || out.accepted_steps % config.record_stride == 0)
      out.trajectory.rows.push_back(make_row(sys, s, ledger, N, J0));
    if (blown) {
      out.kind = OutcomeKind::BlownUp;
      out.reason = BlowupReason::NormThreshold;
      out.T_est = s.t;
      break;
    }
  }
  if (out.kind != OutcomeKind::Completed && out.trajectory.rows.back().t != s.t)
    out.trajectory.rows.push_back(make_row(sys, s, ledger, N, J0));
  out.final_state = std::move(s);
  return out;
}

inline RunOutcome integrate(const Field& v0, const ModelParams& params, const SolverConfig& config) {
  GalerkinSystem sys(Discretization(v0.domain(), config.oversample), params, config.disable_source);
  return integrate(sys.discretization().to_spectral(v0.values()), sys, config);
}

}  // namespace pwell
