#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pwell/config.hpp"
#include "pwell/fibering.hpp"
#include "pwell/monitors.hpp"
#include "pwell/norms.hpp"
#include "pwell/parallel.hpp"
#include "pwell/regime.hpp"
#include "pwell/solver.hpp"
#include "pwell/wells.hpp"

namespace pwell {

enum class Fault { None, WrongSignI };

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  ///< largest violation measure seen (property specific)
  bool passed() const noexcept { return failures == 0; }
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed(); });
  }
};

struct VerifyOptions {
  std::size_t fields = 100;
  bool simulate = true;  ///< include the short decay and blow-up runs
  Fault fault = Fault::None;
};

namespace detail {

struct Sample {
  std::vector<double> q;
  EnergyTerms terms;
};

// Random smooth field with max |v| drawn log-uniformly in [0.05, 20].
inline Sample verify_sample(const Discretization& disc, const ModelParams& params, std::uint64_t seed,
                            std::size_t i) {
  auto q = random_smooth_coeffs(disc, seed, 70000 + i);
  auto rng = make_rng(seed, 90000 + i);
  std::uniform_real_distribution<double> u(std::log(0.05), std::log(20.0));
  const double target = std::exp(u(rng));
  double m = 0.0;
  for (double x : disc.fine_values(q)) m = std::max(m, std::abs(x));
  for (double& x : q) x *= target / m;
  auto t = energy_terms(disc, q, params);
  return {std::move(q), t};
}

class PropertyAccumulator {
 public:
  explicit PropertyAccumulator(std::string name) { r_.name = std::move(name); }
  void check(bool ok, double measure = 0.0) {
    ++r_.cases;
    if (!ok) ++r_.failures;
    if (std::isfinite(measure)) r_.worst = std::max(r_.worst, measure);
  }
  PropertyResult result() const { return r_; }

 private:
  PropertyResult r_;
};

}  // namespace detail

/// Runs the invariant suites on the configured domain and power.
inline VerifyReport run_property_suite(const ExperimentConfig& cfg, const VerifyOptions& opt = {}) {
  using detail::PropertyAccumulator;
  const auto& params = cfg.model;
  const double p = params.p();
  const std::uint64_t seed = cfg.analysis.seed;
  Discretization disc(cfg.domain, cfg.solver.oversample);
  const auto samples = parallel_map(opt.fields, [&](std::size_t i) { return detail::verify_sample(disc, params, seed, i); });
  VerifyReport rep;

  {
    PropertyAccumulator roundtrip("transform_roundtrip"), parseval("parseval"), poincare("poincare");
    for (const auto& s : samples) {
      const auto nodal = disc.from_spectral(s.q);
      const auto back = disc.to_spectral(nodal);
      double err = 0.0, mag = 0.0;
      for (std::size_t k = 0; k < back.size(); ++k) {
        err = std::max(err, std::abs(back[k] - s.q[k]));
        mag = std::max(mag, std::abs(s.q[k]));
      }
      roundtrip.check(err <= 1e-12 * mag, err / mag);
      const double nod = norm_l2(Field(cfg.domain, nodal));
      const double spec = norm_l2_spectral(disc, s.q);
      parseval.check(std::abs(nod - spec) <= 1e-12 * spec, std::abs(nod - spec) / spec);
      poincare.check(s.terms.gradient_sq >= disc.lambda1() * s.terms.l2_sq * (1.0 - 1e-12));
    }
    rep.properties.push_back(roundtrip.result());
    rep.properties.push_back(parseval.result());
    rep.properties.push_back(poincare.result());
  }

  {
    PropertyAccumulator combo("identity_combo"), family("delta_family_at_one"), odd("log_source_odd"),
        apriori("a_priori_bounds"), gamma("log_power_bound");
    for (const auto& s : samples) {
      const auto& t = s.terms;
      const double j = J(t, params);
      double i = I(t, params);
      if (opt.fault == Fault::WrongSignI) i = t.gradient_sq + t.log_int;
      const double res = identity_residual(t, params, j, i);
      combo.check(res <= 1e-10 * (1.0 + std::abs(j)), res / (1.0 + std::abs(j)));
      family.check(J_delta(t, 1.0, params) == j && I_delta(t, 1.0, params) == I(t, params));
      for (double v : {s.q[0], -s.q[0], 0.3, 2.5, 1e-200})
        odd.check(log_source_value(-v, p) == -log_source_value(v, p));
      if (I(t, params) >= 0.0) {
        const double tol = 1e-12 * std::max(1.0, std::abs(j));
        apriori.check(t.power <= (1.0 + p) * (1.0 + p) * j + tol &&
                      (p - 1.0) / (2.0 * (1.0 + p)) * t.gradient_sq <= j + tol);
      }
      const auto b = log_power_bound_check(disc, s.q, params);
      gamma.check(b.holds, b.lhs / b.rhs);
    }
    rep.properties.push_back(combo.result());
    rep.properties.push_back(family.result());
    rep.properties.push_back(odd.result());
    rep.properties.push_back(apriori.result());
    rep.properties.push_back(gamma.result());
  }

  {
    PropertyAccumulator root("fibering_root"), sign("fibering_sign_pattern"), large("fibering_large_beta"),
        scaling("fibering_scaling");
    for (const auto& s : samples) {
      const auto ray = RaySummary::of(s.terms);
      const double bs = beta_star(ray, params);
      const double ib = i_on_ray(ray, bs, params);
      const double scale = std::max(ray.G, bs * bs * ray.G);
      root.check(std::abs(ib) <= 1e-10 * scale, std::abs(ib) / scale);
      for (double f : {0.25, 0.5, 0.9}) sign.check(i_on_ray(ray, f * bs, params) > 0.0);
      for (double f : {1.1, 2.0, 4.0}) sign.check(i_on_ray(ray, f * bs, params) < 0.0);
      if (p >= 2.0) {
        // direction scaled to max |v| = 1
        double m = 0.0;
        for (double x : disc.fine_values(s.q)) m = std::max(m, std::abs(x));
        std::vector<double> unit(s.q);
        for (double& x : unit) x /= m;
        large.check(j_on_ray(RaySummary::of(energy_terms(disc, unit, params)), 1e3, params) < 0.0);
      }
      std::vector<double> products;
      for (double c : {0.5, 1.0, 2.0}) {
        std::vector<double> qc(s.q);
        for (double& x : qc) x *= c;
        products.push_back(c * beta_star(RaySummary::of(energy_terms(disc, qc, params)), params));
      }
      const double spread = (std::max({products[0], products[1], products[2]}) -
                             std::min({products[0], products[1], products[2]})) / products[1];
      scaling.check(spread <= 1e-8, spread);
    }
    rep.properties.push_back(root.result());
    rep.properties.push_back(sign.result());
    rep.properties.push_back(large.result());
    rep.properties.push_back(scaling.result());
  }

  const auto k = compute_well_constants(cfg.domain, params, cfg.analysis.budget(), cfg.solver.oversample);
  {
    PropertyAccumulator ball("sobolev_ball"), outside("sobolev_ball_contrapositive");
    for (const auto& s : samples) {
      for (double delta : {0.5, 1.0, 1.5}) {
        const double r = r_of_delta(delta, k);
        const double c = 0.99 * r / std::sqrt(s.terms.gradient_sq);
        std::vector<double> qc(s.q);
        for (double& x : qc) x *= c;
        const auto t = energy_terms(disc, qc, params);
        ball.check(I_delta(t, delta, params) > 0.0);
        if (I_delta(s.terms, delta, params) < 0.0) outside.check(std::sqrt(s.terms.gradient_sq) > r);
      }
    }
    rep.properties.push_back(ball.result());
    rep.properties.push_back(outside.result());
  }

  {
    PropertyAccumulator shape("well_curve_shape"), nehari("nehari_projection"), sign_between("delta_sign_constancy");
    const auto curve = well_curve(k, cfg.analysis.delta_points);
    const auto& d = curve.d_nehari;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
      if (d[i] > d[peak]) peak = i;
    shape.check(std::abs(curve.delta[peak] - 1.0) <= 1e-2);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      shape.check(d[i] > 0.0);
      if (curve.delta[i + 1] <= 1.0) shape.check(d[i + 1] >= d[i]);
      if (curve.delta[i] >= 1.0) shape.check(d[i + 1] <= d[i]);
    }
    shape.check(std::abs(d.back()) <= 1e-3 * k.d_hat);

    for (double delta : {0.5, 1.0, 1.5}) {
      const double r = r_of_delta(delta, k);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto ray = RaySummary::of(samples[i].terms);
        const double b = beta_star(ray, params, delta);
        const double id = i_on_ray(ray, b, params, delta);
        const double scale = std::max(ray.G, b * b * ray.G);
        nehari.check(std::abs(id) <= 1e-10 * scale && b * std::sqrt(ray.G) >= r * (1.0 - 1e-6));
      }
    }

    std::size_t eligible = 0;
    for (const auto& s : samples) {
      const double j = J(s.terms, params);
      if (!(j > 0.0 && j < k.d_hat) || ++eligible > 20) continue;
      const auto [d1, d2] = delta_roots(j, k);
      int sgn = 0;
      bool same = true;
      for (int g = 1; g <= 20; ++g) {
        const double delta = d1 + (d2 - d1) * g / 21.0;
        const double v = I_delta(s.terms, delta, params);
        const int sv = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (g == 1) sgn = sv;
        same = same && sv == sgn && sv != 0;
      }
      sign_between.check(same);
    }
    rep.properties.push_back(shape.result());
    rep.properties.push_back(nehari.result());
    rep.properties.push_back(sign_between.result());
  }

  if (opt.simulate) {
    PropertyAccumulator persist("sign_persistence"), energy("energy_identity"), invariants("trajectory_invariants"),
        derivative("h1_derivative");
    GalerkinSystem sys(disc, params);
    SolverConfig sc = cfg.solver;
    sc.t_end = 1.0;
    sc.dt_max = 1e-2;
    sc.dt_init = std::min(sc.dt_init, sc.dt_max);
    sc.record_stride = 1;

    for (std::size_t i = 0; i < 2; ++i) {
      auto q = random_smooth_coeffs(disc, seed, 80000 + i);
      double m = 0.0;
      for (double x : disc.fine_values(q)) m = std::max(m, std::abs(x));
      for (double& x : q) x *= 0.5 / m;
      const auto out = integrate(q, sys, sc);
      persist.check(out.kind == OutcomeKind::Completed && sign_persistence_check(out.trajectory));
      const double res = energy_residual(out.trajectory);
      energy.check(res <= 1e-6, res);
      const auto inv = check_invariants(out.trajectory);
      invariants.check(inv.times_increasing && inv.ledger_nondecreasing && inv.J_nonincreasing && inv.row_consistent &&
                       inv.a_priori_bounds);
      const double gap = ndot_derivative_gap(out.trajectory);
      derivative.check(gap <= 1e-3, gap);
    }
    for (std::size_t i = 0; i < 2; ++i) {
      auto q = random_smooth_coeffs(disc, seed, 85000 + i);
      const auto ray = RaySummary::of(energy_terms(disc, q, params));
      const double bs = beta_star(ray, params);
      const double target = 0.5 * k.d_hat;
      double lo = bs, hi = 2.0 * bs;
      while (j_on_ray(ray, hi, params) > target) hi *= 2.0;
      const double beta = detail::bisect_decreasing_zero(
          [&](double b) { return j_on_ray(ray, b, params) - target; }, lo, hi, 1e-15);
      for (double& x : q) x *= beta;
      SolverConfig bc = cfg.solver;
      bc.record_stride = 1;
      const auto out = integrate(q, sys, bc);
      persist.check(out.kind == OutcomeKind::BlownUp && sign_persistence_check(out.trajectory));
      const auto inv = check_invariants(out.trajectory);
      invariants.check(inv.times_increasing && inv.ledger_nondecreasing && inv.row_consistent && inv.h1_increasing);
    }
    rep.properties.push_back(persist.result());
    rep.properties.push_back(energy.result());
    rep.properties.push_back(invariants.result());
    rep.properties.push_back(derivative.result());
  }
  return rep;
}

}  // namespace pwell
