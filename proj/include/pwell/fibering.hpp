#pragma once

#include <cmath>

#include "pwell/error.hpp"
#include "pwell/functionals.hpp"

namespace pwell {

/// The three integrals that determine J(beta v) and I(beta v) for every beta:
///   J(beta v) = beta^2 G / 2 - beta^{1+p} (L + P ln beta) / (1+p) + beta^{1+p} P / (1+p)^2
///   I(beta v) = beta^2 G - beta^{1+p} (L + P ln beta)
struct RaySummary {
  double G = 0.0;  ///< ||grad v||^2
  double P = 0.0;  ///< ||v||_{1+p}^{1+p}
  double L = 0.0;  ///< int |v|^{1+p} log|v|

  static RaySummary of(const EnergyTerms& t) { return {t.gradient_sq, t.power, t.log_int}; }
};

namespace detail {
inline void require_positive_beta(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("ray parameter beta must be positive");
}
}  // namespace detail

inline double j_on_ray(const RaySummary& s, double beta, const ModelParams& params,
                       double delta = 1.0) {
  detail::require_positive_beta(beta);
  const double q = 1.0 + params.p();
  const double bq = std::pow(beta, q);
  return 0.5 * delta * beta * beta * s.G - bq * (s.L + s.P * std::log(beta)) / q + bq * s.P / (q * q);
}

inline double i_on_ray(const RaySummary& s, double beta, const ModelParams& params,
                       double delta = 1.0) {
  detail::require_positive_beta(beta);
  const double bq = std::pow(beta, 1.0 + params.p());
  return delta * beta * beta * s.G - bq * (s.L + s.P * std::log(beta));
}

/// Positive root of I_delta(beta v) = 0, i.e. of delta G = beta^{p-1} (L + P ln beta).
/// The scaled residual h(t) = delta G - e^{(p-1)t} (L + P t), t = ln beta,
/// starts at delta G > 0 for t -> -inf, rises while (p-1)(L + P t) + P < 0 and
/// then falls to -inf, so it has exactly one sign change.
inline double beta_star(const RaySummary& s, const ModelParams& params, double delta = 1.0) {
  if (!(s.G > 0.0)) throw InvalidArgument("Nehari projection needs ||grad v|| > 0");
  if (!(s.P > 0.0)) throw InvalidArgument("Nehari projection needs v != 0");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const double pm1 = params.p() - 1.0;
  const double target = delta * s.G;
  auto h = [&](double t) { return target - std::exp(pm1 * t) * (s.L + s.P * t); };

  constexpr int kMaxDoublings = 1000;
  const double step = std::log(2.0);
  double lo = 0.0, hi = 0.0;
  if (h(0.0) > 0.0) {
    int n = 0;
    while (h(hi) > 0.0) {
      lo = hi;
      hi += step;
      if (++n > kMaxDoublings || !std::isfinite(h(hi)))
        throw NumericalFailure("Nehari root bracket not found (upward expansion)");
    }
  } else {
    int n = 0;
    while (h(lo) <= 0.0) {
      hi = lo;
      lo -= step;
      if (++n > kMaxDoublings)
        throw NumericalFailure("Nehari root bracket not found (downward expansion)");
    }
  }

  // h(lo) > 0 >= h(hi). Newton on h, falling back to bisection whenever the
  // iterate leaves the bracket or converges slowly.
  double t = 0.5 * (lo + hi);
  double prev_step = hi - lo;
  for (int it = 0; it < 200; ++it) {
    const double ht = h(t);
    if (ht == 0.0) break;
    (ht > 0.0 ? lo : hi) = t;
    const double dh = -std::exp(pm1 * t) * (pm1 * (s.L + s.P * t) + s.P);
    double next = dh != 0.0 ? t - ht / dh : 0.5 * (lo + hi);
    if (!(next > lo && next < hi) || std::abs(next - t) > 0.5 * prev_step) next = 0.5 * (lo + hi);
    prev_step = std::abs(next - t);
    t = next;
    if (prev_step <= 1e-15 * std::max(1.0, std::abs(t)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return std::exp(t);
}

}  // namespace pwell
