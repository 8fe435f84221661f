#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwell/error.hpp"
#include "pwell/fibering.hpp"
#include "pwell/sobolev.hpp"
#include "pwell/well_depth.hpp"

namespace pwell {

struct AnalysisBudget {
  SobolevBudget sobolev;
  DepthBudget depth;
  double safety = 1.05;          ///< multiplies C wherever it enters a sufficient condition
  std::size_t curve_points = 200;
};

/// Constants of the potential-well family for one domain and power index.
struct WellConstants {
  DomainSpec domain;
  ModelParams params;
  int oversample = 2;
  double safety = 1.05;
  double sobolev_C = 0.0;
  std::string sobolev_method;
  std::size_t sobolev_iterations = 0;
  double lambda1 = 0.0;
  double d_hat = 0.0;           ///< estimate of d = d(1)
  double d_formula_at_1 = 0.0;  ///< (1/2 - 1/(1+p)) r(1)^2
  double delta0 = 0.0;
  std::shared_ptr<const WellDepthEstimator> depth;
  std::vector<double> grid_delta;  ///< delta_grid(delta0, 200)
  std::vector<double> grid_depth;  ///< d_hat on grid_delta


  double C_eff() const noexcept { return safety * sobolev_C; }
  double d_hat_at(double delta) const { return depth->depth(delta); }
};

/// Root of C^{p+2} r^p = delta.
inline double r_of_delta(double delta, double C, const ModelParams& params) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  return std::pow(delta / std::pow(C, params.p() + 2.0), 1.0 / params.p());
}

inline double r_of_delta(double delta, const WellConstants& k) {
  return r_of_delta(delta, k.C_eff(), k.params);
}

/// (1/2 - delta/(1+p)) r(delta)^2 on 0 < delta < (1+p)/2.
inline double d_formula(double delta, double C, const ModelParams& params) {
  const double edge = 0.5 * (1.0 + params.p());
  if (!(delta > 0.0) || !(delta < edge))
    throw InvalidArgument("d_formula is defined for 0 < delta < (1+p)/2");
  const double r = r_of_delta(delta, C, params);
  return (0.5 - delta / (1.0 + params.p())) * r * r;
}

inline double d_formula(double delta, const WellConstants& k) { return d_formula(delta, k.C_eff(), k.params); }

namespace detail {

template <class Fn>
double bisect_decreasing_zero(Fn&& f, double lo, double hi, double rel_tol = 1e-13) {
  // f(lo) > 0 >= f(hi)
  for (int it = 0; it < 400 && hi - lo > rel_tol * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double find_delta_zero(const WellDepthEstimator& est) {
  double lo = 0.5 * (1.0 + est.params().p());
  if (!(est.depth(lo) > 0.0)) throw NumericalFailure("estimated well depth not positive at (1+p)/2");
  double hi = 2.0 * lo;
  for (int n = 0; est.depth(hi) > 0.0; ++n) {
    lo = hi;
    hi *= 2.0;
    if (n > 60) throw NumericalFailure("no zero of the estimated well depth found");
  }
  return bisect_decreasing_zero([&](double d) { return est.depth(d); }, lo, hi);
}

}  // namespace detail

/// Log-spaced grid on [0.01, delta0] with delta = 1 inserted exactly.
inline std::vector<double> delta_grid(double delta0, std::size_t points) {
  if (points < 3) throw InvalidArgument("delta grid needs at least 3 points");
  std::vector<double> g(points);
  const double a = std::log(0.01), b = std::log(delta0);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  g.back() = delta0;
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < points; ++i)
    if (std::abs(g[i] - 1.0) < std::abs(g[nearest] - 1.0)) nearest = i;
  if (nearest != 0 && nearest != points - 1) g[nearest] = 1.0;
  return g;
}

/// Sobolev constant, well-depth pool and derived constants.
inline WellConstants compute_well_constants(const DomainSpec& domain, const ModelParams& params,
                                            const AnalysisBudget& budget = {}, int oversample = 2) {
  Discretization disc(domain, oversample);
  WellConstants k;
  k.domain = domain;
  k.params = params;
  k.oversample = oversample;
  k.safety = budget.safety;
  const auto sob = estimate_sobolev_constant(disc, params, budget.sobolev);
  k.sobolev_C = sob.C;
  k.sobolev_method = sob.method;
  k.sobolev_iterations = sob.total_iterations;
  k.lambda1 = disc.lambda1();

  auto est = std::make_shared<WellDepthEstimator>(disc, params);
  est->sample(budget.depth.directions, budget.depth.seed);
  const double edge = 0.5 * (1.0 + params.p());
  // Anchors cover the rising branch, the peak and the falling branch.
  for (double anchor : {0.1, 0.5, 1.0, 0.5 * (1.0 + edge), edge}) est->refine(anchor, budget.depth);
  const double d0 = detail::find_delta_zero(*est);
  est->refine(0.5 * (edge + d0), budget.depth);
  k.depth = est;
  k.d_hat = est->depth(1.0);
  k.delta0 = detail::find_delta_zero(*est);
  k.d_formula_at_1 = d_formula(1.0, k);
  k.grid_delta = delta_grid(k.delta0, 200);
  for (double d : k.grid_delta) k.grid_depth.push_back(est->depth(d));
  return k;
}

inline double delta_zero(const WellConstants& k) { return detail::find_delta_zero(*k.depth); }

/// Lower limit used for the rising branch; below it the estimated curve is flat.
inline constexpr double kDeltaFloor = 1e-8;

/// Roots delta_1 <= 1 <= delta_2 of d_hat(delta) = eta. When eta lies below
/// the curve all the way down to delta -> 0, delta_1 is reported as 0.
inline std::pair<double, double> delta_roots(double eta, const WellConstants& k) {
  const double peak = k.d_hat;
  if (!(eta > 0.0) || eta > peak) throw InvalidArgument("delta_roots requires 0 < eta <= d_hat(1)");
  if (eta == peak) return {1.0, 1.0};
  auto g = [&](double d) { return k.d_hat_at(d) - eta; };
  double d1 = 0.0;
  if (g(kDeltaFloor) < 0.0)
    d1 = detail::bisect_decreasing_zero([&](double d) { return -g(d); }, kDeltaFloor, 1.0);
  const double d2 = detail::bisect_decreasing_zero(g, 1.0, k.delta0);
  return {d1, d2};
}

struct WellCurve {
  std::vector<double> delta;
  std::vector<double> r;
  std::vector<std::optional<double>> d_formula;  ///< only defined below (1+p)/2
  std::vector<double> d_nehari;
};

inline WellCurve well_curve(const WellConstants& k, std::size_t points = 200) {
  WellCurve c;
  c.delta = delta_grid(k.delta0, points);
  const double edge = 0.5 * (1.0 + k.params.p());
  for (double d : c.delta) {
    c.r.push_back(r_of_delta(d, k));
    c.d_formula.push_back(d < edge ? std::optional<double>(d_formula(d, k)) : std::nullopt);
    c.d_nehari.push_back(k.d_hat_at(d));
  }
  return c;
}

struct LambdaAlpha {
  double lower_bound = 0.0;         ///< (1/C_eff)^{2/p}
  std::optional<double> estimate;   ///< min ||v||_{H^1_0}^2 over sampled Nehari points with J < alpha
  std::size_t admissible = 0;       ///< sampled Nehari points with J < alpha
};

/// Lambda_alpha = inf { ||v||_{H^1_0}^2 : v in N, J(v) < alpha }.
inline LambdaAlpha lambda_alpha(double alpha, const WellConstants& k) {
  if (!(alpha > k.d_hat)) throw InvalidArgument("lambda_alpha requires alpha > d_hat");
  LambdaAlpha out;
  out.lower_bound = std::pow(1.0 / k.C_eff(), 2.0 / k.params.p());
  for (const auto& dir : k.depth->pool()) {
    if (!(dir.ray.G > 0.0)) continue;
    double beta = 0.0;
    try {
      beta = beta_star(dir.ray, k.params);
    } catch (const NumericalFailure&) {
      continue;
    }
    if (!(j_on_ray(dir.ray, beta, k.params) < alpha)) continue;
    ++out.admissible;
    const double h1 = beta * beta * (dir.ray.G + dir.l2_sq);
    if (!out.estimate || h1 < *out.estimate) out.estimate = h1;
  }
  return out;
}

}  // namespace pwell
