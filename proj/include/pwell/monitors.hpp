#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "pwell/error.hpp"
#include "pwell/regime.hpp"
#include "pwell/solver.hpp"

namespace pwell {

/// max over rows of |ledger + J - J(v0)| / max(1, |J(v0)|).
inline double energy_residual(const Trajectory& tr) {
  if (tr.rows.empty()) throw InvalidArgument("empty trajectory");
  double m = 0.0;
  for (const auto& r : tr.rows) m = std::max(m, r.energy_residual);
  return m;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InvalidArgument("line fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

struct DecayCheck {
  bool bound_holds = false;
  double fitted_rate = 0.0;
  double mu_pred = 0.0;
  double worst_ratio = 0.0;  ///< max ||v||_{H^1_0} / (||v0||_{H^1_0} e^{-mu t})
};

/// Exponential bound with rate mu and fitted rate of ln ||v||_{H^1_0} over the
/// second half of the run.
inline DecayCheck decay_monitor(const Trajectory& tr, double mu_pred) {
  if (tr.rows.size() < 10) throw InvalidArgument("trajectory too short to fit (< 10 rows)");
  DecayCheck d;
  d.mu_pred = mu_pred;
  const double n0 = std::sqrt(tr.rows.front().h1_sq);
  for (const auto& r : tr.rows) {
    const double bound = n0 * std::exp(-mu_pred * r.t);
    const double ratio = bound > 0.0 ? std::sqrt(r.h1_sq) / bound : (r.h1_sq > 0.0 ? INFINITY : 0.0);
    d.worst_ratio = std::max(d.worst_ratio, ratio);
  }
  d.bound_holds = d.worst_ratio <= 1.0 + 1e-3;
  const double t_half = 0.5 * (tr.rows.front().t + tr.rows.back().t);
  std::vector<double> x, y;
  for (const auto& r : tr.rows) {
    if (r.t < t_half || !(r.h1_sq > 0.0)) continue;
    x.push_back(r.t);
    y.push_back(0.5 * std::log(r.h1_sq));
  }
  if (x.size() < 2) throw InvalidArgument("trajectory too short to fit (< 10 rows)");
  d.fitted_rate = -fit_line(x, y).slope;
  return d;
}

inline DecayCheck decay_monitor(const Trajectory& tr, const RegimeReport& report) {
  if (report.predicted_regime != Regime::GlobalDecay && report.predicted_regime != Regime::CriticalGlobal)
    throw InvalidArgument("decay monitor needs a decay regime");
  return decay_monitor(tr, report.mu_pred);
}

struct BlowupCheck {
  std::optional<double> concavity_onset;
  std::optional<double> T_est;
  double tail_linearity_R2 = 0.0;
  std::size_t tail_rows = 0;
  /// rows violating N'' >= -2(1+p)J + (p-1) lambda1/(1+lambda1) N'
  std::size_t mdd_violations = 0;
};

/// Concavity onset, extrapolated blow-up time from N^{-(p-1)/2} over the last
/// quarter of the run (in time), and a row-wise check of the lower bound for N''.
inline BlowupCheck blowup_monitor(const Trajectory& tr) {
  BlowupCheck b;
  const auto& rows = tr.rows;
  if (rows.empty()) return b;
  const double p = tr.p;

  for (std::size_t i = rows.size(); i-- > 0;) {
    if (!(rows[i].concavity_margin > 0.0)) break;
    b.concavity_onset = rows[i].t;
  }

  const double edge = tr.lambda1 / (1.0 + tr.lambda1);
  for (const auto& r : rows) {
    const double lower = -2.0 * (1.0 + p) * r.J + (p - 1.0) * edge * r.Ndot;
    const double scale = std::abs(r.Nddot) + 2.0 * (1.0 + p) * std::abs(r.J) + (p - 1.0) * r.Ndot;
    if (r.Nddot < lower - 1e-9 * scale) ++b.mdd_violations;
  }

  if (!b.concavity_onset) return b;
  const double t0 = rows.front().t, t1 = rows.back().t;
  const double start = t1 - 0.25 * (t1 - t0);
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (r.t < start || !(r.N > 0.0)) continue;
    x.push_back(r.t);
    y.push_back(std::pow(r.N, -0.5 * (p - 1.0)));
  }
  b.tail_rows = x.size();
  if (x.size() < 3) return b;
  const auto f = fit_line(x, y);
  b.tail_linearity_R2 = f.r2;
  if (f.slope < 0.0) b.T_est = -f.intercept / f.slope;
  return b;
}

/// sign(I) on every row equals sign(I(v0)); vacuous for I(v0) = 0.
inline bool sign_persistence_check(const Trajectory& tr) {
  if (tr.rows.empty()) return true;
  const double i0 = tr.rows.front().I;
  if (i0 == 0.0) return true;
  for (const auto& r : tr.rows)
    if ((r.I > 0.0) != (i0 > 0.0) || r.I == 0.0) return false;
  return true;
}

/// Largest relative gap between a three-point derivative of N' = ||v||^2_{H^1_0}
/// and the recorded N'' = -2I over interior rows.
inline double ndot_derivative_gap(const Trajectory& tr) {
  const auto& r = tr.rows;
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& row : r) scale = std::max(scale, std::abs(row.Nddot));
  if (!(scale > 0.0)) return 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double h0 = r[i].t - r[i - 1].t, h1 = r[i + 1].t - r[i].t;
    const double d = -h1 / (h0 * (h0 + h1)) * r[i - 1].Ndot + (h1 - h0) / (h0 * h1) * r[i].Ndot +
                     h0 / (h1 * (h0 + h1)) * r[i + 1].Ndot;
    worst = std::max(worst, std::abs(d - r[i].Nddot) / std::max(std::abs(r[i].Nddot), 1e-3 * scale));
  }
  return worst;
}

struct TrajectoryInvariants {
  bool times_increasing = true;
  bool ledger_nondecreasing = true;
  bool J_nonincreasing = true;
  bool row_consistent = true;        ///< Ndot = ||v||^2_{H^1_0}, Nddot = -2I
  bool a_priori_bounds = true;       ///< rows with I >= 0
  bool h1_increasing = true;         ///< ||v||^2_{H^1_0} strictly increasing
};

/// `slack` absorbs integration error in the monotonicity checks (relative to max(1,|J0|)).
inline TrajectoryInvariants check_invariants(const Trajectory& tr, double slack = 1e-9) {
  TrajectoryInvariants v;
  const double p = tr.p;
  const double tol = slack * std::max(1.0, std::abs(tr.J0));
  for (std::size_t i = 0; i < tr.rows.size(); ++i) {
    const auto& r = tr.rows[i];
    v.row_consistent = v.row_consistent && r.Ndot == r.h1_sq && r.Nddot == -2.0 * r.I;
    if (r.I >= 0.0) {
      const double jtol = 1e-12 * std::max(1.0, std::abs(r.J));
      v.a_priori_bounds = v.a_priori_bounds && r.grad * r.grad <= 2.0 * (1.0 + p) / (p - 1.0) * r.J + jtol &&
                          r.power <= (1.0 + p) * (1.0 + p) * r.J + jtol;
    }
    if (i == 0) continue;
    const auto& q = tr.rows[i - 1];
    v.times_increasing = v.times_increasing && r.t > q.t;
    v.ledger_nondecreasing = v.ledger_nondecreasing && r.ledger >= q.ledger;
    v.J_nonincreasing = v.J_nonincreasing && r.J <= q.J + tol;
    v.h1_increasing = v.h1_increasing && r.h1_sq > q.h1_sq;
  }
  return v;
}

}  // namespace pwell
