#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "pwell/fibering.hpp"
#include "pwell/functionals.hpp"
#include "pwell/parallel.hpp"
#include "pwell/random_fields.hpp"

namespace pwell {

struct DepthBudget {
  std::size_t directions = 1000;      ///< random directions sampled
  std::size_t refine_candidates = 2;  ///< best directions refined per anchor
  std::size_t refine_modes = 32;      ///< lowest modes moved by the pattern search
  std::size_t max_evaluations = 6000; ///< per refined candidate
  std::uint64_t seed = 7;
};

/// A sampled direction with the integrals needed to place it on any N_delta.
struct NehariDirection {
  RaySummary ray;
  double l2_sq = 0.0;
  std::vector<double> coeffs;
};

/// J at the point where the ray through `ray` meets N_delta.
inline double nehari_energy(const RaySummary& ray, double delta, const ModelParams& params) {
  return j_on_ray(ray, beta_star(ray, params, delta), params);
}

/// Upper estimate of d(delta) = inf_{N_delta} J as a minimum over a pool of
/// directions. Along any fixed ray the projected energy increases in delta on
/// (0,1] and decreases afterwards, so a minimum over one shared pool has the
/// same monotone shape for every pool.
class WellDepthEstimator {
 public:
  WellDepthEstimator(Discretization disc, ModelParams params)
      : disc_(std::move(disc)), params_(params) {}

  const Discretization& discretization() const noexcept { return disc_; }
  const ModelParams& params() const noexcept { return params_; }
  const std::vector<NehariDirection>& pool() const noexcept { return pool_; }

  NehariDirection make_direction(std::vector<double> coeffs) const {
    const auto t = energy_terms(disc_, coeffs, params_);
    return NehariDirection{RaySummary::of(t), t.l2_sq, std::move(coeffs)};
  }

  void add(NehariDirection d) { pool_.push_back(std::move(d)); }

  /// `count` random H^1-regular directions plus every single eigenmode.
  void sample(std::size_t count, std::uint64_t seed) {
    auto random = parallel_map(count, [&](std::size_t i) {
      return make_direction(random_smooth_coeffs(disc_, seed, 50000 + i));
    });
    auto modes = parallel_map(disc_.modes(), [&](std::size_t k) {
      std::vector<double> c(disc_.modes(), 0.0);
      c[k] = 1.0;
      return make_direction(std::move(c));
    });
    for (auto& d : random) pool_.push_back(std::move(d));
    for (auto& d : modes) pool_.push_back(std::move(d));
  }

  /// Projected energy of every pool member at delta (inf for degenerate rays).
  std::vector<double> energies(double delta) const {
    std::vector<double> e(pool_.size());
    for (std::size_t i = 0; i < pool_.size(); ++i) e[i] = safe_energy(pool_[i].ray, delta);
    return e;
  }

  double depth(double delta) const {
    if (pool_.empty()) throw NumericalFailure("well-depth pool is empty");
    double m = std::numeric_limits<double>::infinity();
    for (const auto& d : pool_) m = std::min(m, safe_energy(d.ray, delta));
    if (!std::isfinite(m)) throw NumericalFailure("no direction admits a Nehari projection");
    return m;
  }

  std::size_t argmin(double delta) const {
    if (pool_.empty()) throw NumericalFailure("well-depth pool is empty");
    const auto e = energies(delta);
    const auto it = std::min_element(e.begin(), e.end());
    if (!std::isfinite(*it)) throw NumericalFailure("no direction admits a Nehari projection");
    return static_cast<std::size_t>(it - e.begin());
  }

  /// Pattern search on the best candidates at delta; refined directions join the pool.
  void refine(double delta, const DepthBudget& budget) {
    const auto e = energies(delta);
    std::vector<std::size_t> order(e.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t k = std::min(budget.refine_candidates, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return e[a] < e[b]; });
    auto refined = parallel_map(k, [&](std::size_t i) {
      return make_direction(pattern_search(pool_[order[i]].coeffs, delta, budget));
    });
    for (auto& d : refined) pool_.push_back(std::move(d));
  }

 private:
  double safe_energy(const RaySummary& ray, double delta) const {
    if (!(ray.G > 0.0) || !(ray.P > 0.0)) return std::numeric_limits<double>::infinity();
    try {
      const double j = nehari_energy(ray, delta, params_);
      return std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
    } catch (const NumericalFailure&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  double objective(std::span<const double> c, double delta) const {
    return safe_energy(RaySummary::of(energy_terms(disc_, c, params_)), delta);
  }

  // Hooke-Jeeves search over the lowest modes, steps measured in the H^1_0
  // seminorm of a direction normalised to ||grad v|| = 1.
  std::vector<double> pattern_search(std::vector<double> base, double delta,
                                     const DepthBudget& budget) const {
    const auto& ev = disc_.spectrum().eigenvalues;
    const double g = std::sqrt(disc_.gradient_sq(base));
    for (double& x : base) x /= g;

    std::vector<std::size_t> idx(ev.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ev[a] < ev[b]; });
    idx.resize(std::min(budget.refine_modes, idx.size()));
    std::vector<double> unit(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) unit[i] = 1.0 / std::sqrt(disc_.parseval_scale() * ev[idx[i]]);

    std::size_t evals = 0;
    auto eval = [&](std::span<const double> c) {
      ++evals;
      return objective(c, delta);
    };
    auto explore = [&](std::vector<double>& x, double& fx, double step) {
      for (std::size_t i = 0; i < idx.size() && evals < budget.max_evaluations; ++i) {
        double& xi = x[idx[i]];
        const double orig = xi;
        xi = orig + step * unit[i];
        double f = eval(x);
        if (f < fx) {
          fx = f;
          continue;
        }
        xi = orig - step * unit[i];
        f = eval(x);
        if (f < fx) {
          fx = f;
          continue;
        }
        xi = orig;
      }
    };

    double f_base = eval(base);
    double step = 0.05;
    while (step > 1e-7 && evals < budget.max_evaluations) {
      std::vector<double> x = base;
      double fx = f_base;
      explore(x, fx, step);
      if (!(fx < f_base)) {
        step *= 0.5;
        continue;
      }
      while (evals < budget.max_evaluations) {
        std::vector<double> trial(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] = 2.0 * x[i] - base[i];
        base = x;
        f_base = fx;
        double ft = eval(trial);
        explore(trial, ft, step);
        if (!(ft < f_base)) break;
        x = std::move(trial);
        fx = ft;
      }
      const double gn = std::sqrt(disc_.gradient_sq(base));
      for (double& v : base) v /= gn;
    }
    return base;
  }

  Discretization disc_;
  ModelParams params_;
  std::vector<NehariDirection> pool_;
};

/// Single-shot estimate of d(delta): sample, project, refine, minimise.
inline double estimate_well_depth(double delta, const Discretization& disc, const ModelParams& params,
                                  const DepthBudget& budget = {}) {
  WellDepthEstimator est(disc, params);
  est.sample(budget.directions, budget.seed);
  est.refine(delta, budget);
  return est.depth(delta);
}

}  // namespace pwell
