#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pwell/functionals.hpp"
#include "pwell/norms.hpp"
#include "pwell/parallel.hpp"
#include "pwell/random_fields.hpp"

namespace pwell {

struct SobolevBudget {
  std::size_t starts = 20;
  std::size_t max_iterations = 20000;
  /// Converged once an iterate moves less than this in the H^1_0 seminorm.
  double step_tolerance = 1e-10;
  std::uint64_t seed = 7;
  /// Also re-estimate at half and double resolution.
  bool refine = false;
};

struct SobolevStart {
  double quotient = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SobolevEstimate {
  double C = 0.0;
  std::string method = "normalised Sobolev-gradient ascent";
  std::size_t total_iterations = 0;
  bool stationary = false;  ///< every start met the step tolerance
  std::vector<SobolevStart> starts;
  std::vector<std::pair<std::size_t, double>> refinement;  ///< (N along axis 0, C)
};

/// ||v||_{p+2} / ||grad v||.
inline double sobolev_quotient(const Discretization& disc, std::span<const double> coeffs,
                               const ModelParams& params) {
  const double g = disc.gradient_sq(coeffs);
  if (!(g > 0.0)) throw InvalidArgument("quotient undefined for ||grad v|| = 0");
  return norm_lp(disc, coeffs, params.p() + 2.0) / std::sqrt(g);
}

namespace detail {

inline void normalise_gradient(const Discretization& disc, std::vector<double>& c) {
  const double g = std::sqrt(disc.gradient_sq(c));
  for (double& x : c) x /= g;
}

/// Maximises ||v||_q^q on the unit sphere of the H^1_0 seminorm. Each step
/// replaces v by the normalised H^1_0 Riesz representer of the derivative of
/// ||v||_q^q, which never decreases the objective because it is convex.
inline SobolevStart ascend(const Discretization& disc, std::vector<double> c, double q,
                           const SobolevBudget& budget) {
  const auto& ev = disc.spectrum().eigenvalues;
  normalise_gradient(disc, c);
  SobolevStart out;
  std::vector<double> g;
  for (std::size_t it = 0; it < budget.max_iterations; ++it) {
    auto fine = disc.fine_values(c);
    for (double& v : fine) v = std::pow(std::abs(v), q - 2.0) * v;
    auto r = disc.project_fine(fine);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] /= ev[k];
    normalise_gradient(disc, r);
    double diff = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) diff += ev[k] * (r[k] - c[k]) * (r[k] - c[k]);
    diff = std::sqrt(diff * disc.parseval_scale());
    c.swap(r);
    out.iterations = it + 1;
    if (diff < budget.step_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.quotient = std::pow(power_integral(disc, c, q), 1.0 / q);
  return out;
}

}  // namespace detail

/// Lower estimate of C = sup ||v||_{p+2} / ||grad v|| from multi-start ascent
/// over the spectral coefficients.
inline SobolevEstimate estimate_sobolev_constant(const Discretization& disc, const ModelParams& params,
                                                 const SobolevBudget& budget = {}) {
  const double q = params.p() + 2.0;
  SobolevEstimate est;
  est.starts = parallel_map(budget.starts, [&](std::size_t i) {
    auto c = random_smooth_coeffs(disc, budget.seed, 1000 + i);
    return detail::ascend(disc, std::move(c), q, budget);
  });
  est.stationary = true;
  for (const auto& s : est.starts) {
    est.C = std::max(est.C, s.quotient);
    est.total_iterations += s.iterations;
    est.stationary = est.stationary && s.converged;
  }
  if (budget.refine) {
    for (double factor : {0.5, 1.0, 2.0}) {
      std::vector<std::size_t> res;
      for (std::size_t n : disc.domain().resolution())
        res.push_back(std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(n * factor))));
      if (factor == 1.0) {
        est.refinement.emplace_back(res[0], est.C);
        continue;
      }
      Discretization other(disc.domain().with_resolution(res), disc.oversample());
      SobolevBudget sub = budget;
      sub.refine = false;
      sub.starts = std::min<std::size_t>(budget.starts, 4);
      est.refinement.emplace_back(res[0], estimate_sobolev_constant(other, params, sub).C);
    }
  }
  return est;
}

inline SobolevEstimate estimate_sobolev_constant(const DomainSpec& domain, const ModelParams& params,
                                                 const SobolevBudget& budget = {}, int oversample = 2) {
  return estimate_sobolev_constant(Discretization(domain, oversample), params, budget);
}

}  // namespace pwell
