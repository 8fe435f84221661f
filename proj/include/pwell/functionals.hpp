#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "pwell/domain.hpp"
#include "pwell/error.hpp"
#include "pwell/sine_transform.hpp"

namespace pwell {

/// Power index of the source v|v|^{p-1} log|v|.
class ModelParams {
 public:
  explicit ModelParams(double p = 3.0) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("power index must satisfy p > 1");
  }

  double p() const noexcept { return p_; }

  /// Integrability exponent (2p + 2) / (2p + 1) of the source term.
  double gamma() const noexcept { return (2.0 * p_ + 2.0) / (2.0 * p_ + 1.0); }

  /// Admissibility of p in space dimension n for the supercritical
  /// global-existence result: any p when n <= 2, p < 4/(n-2) for 3 <= n <= 5.
  bool supercritical_admissible(std::size_t n) const noexcept {
    if (n <= 2) return true;
    if (n <= 5) return p_ < 4.0 / static_cast<double>(n - 2);
    return false;
  }

 private:
  double p_;
};

/// Magnitudes below this are treated as exact zeros before taking logs.
inline constexpr double kLogFloor = 1e-300;

/// v |v|^{p-1} log|v|, continuously extended by 0 at v = 0.
inline double log_source_value(double v, double p) {
  const double a = std::abs(v);
  if (a < kLogFloor) return 0.0;
  return v * std::pow(a, p - 1.0) * std::log(a);
}

/// |v|^{1+p} log|v|, extended by 0 at v = 0.
inline double log_density(double v, double p) {
  const double a = std::abs(v);
  if (a < kLogFloor) return 0.0;
  return std::pow(a, 1.0 + p) * std::log(a);
}

/// The scalar integrals every functional is built from.
struct EnergyTerms {
  double gradient_sq = 0.0;  ///< ||grad v||^2
  double power = 0.0;        ///< ||v||_{1+p}^{1+p}
  double log_int = 0.0;      ///< int |v|^{1+p} log|v|
  double l2_sq = 0.0;        ///< ||v||^2

  double h1_sq() const noexcept { return l2_sq + gradient_sq; }
};

inline EnergyTerms energy_terms(const Discretization& disc, std::span<const double> coeffs,
                                const ModelParams& params) {
  EnergyTerms t;
  t.gradient_sq = disc.gradient_sq(coeffs);
  t.l2_sq = disc.l2_sq(coeffs);
  const double p = params.p();
  const auto fine = disc.fine_values(coeffs);
  double power = 0.0, log_int = 0.0;
  for (double v : fine) {
    const double a = std::abs(v);
    if (a < kLogFloor) continue;
    const double ap = std::pow(a, 1.0 + p);
    power += ap;
    log_int += ap * std::log(a);
  }
  t.power = power * disc.fine_weight();
  t.log_int = log_int * disc.fine_weight();
  return t;
}

// Functionals from precomputed terms. J_delta / I_delta reduce to J / I at delta = 1.

inline double J_delta(const EnergyTerms& t, double delta, const ModelParams& params) {
  const double q = 1.0 + params.p();
  return 0.5 * delta * t.gradient_sq - t.log_int / q + t.power / (q * q);
}

inline double I_delta(const EnergyTerms& t, double delta, const ModelParams&) {
  return delta * t.gradient_sq - t.log_int;
}

inline double J(const EnergyTerms& t, const ModelParams& params) { return J_delta(t, 1.0, params); }
inline double I(const EnergyTerms& t, const ModelParams& params) { return I_delta(t, 1.0, params); }

/// |J - [(p-1)/(2(1+p)) G + P/(1+p)^2 + I/(1+p)]| for caller-supplied J and I
/// values, so that alternative evaluations can be audited against the identity.
inline double identity_residual(const EnergyTerms& t, const ModelParams& params, double j_value,
                                double i_value) {
  const double p = params.p();
  const double rhs = (p - 1.0) / (2.0 * (1.0 + p)) * t.gradient_sq +
                     t.power / ((1.0 + p) * (1.0 + p)) + i_value / (1.0 + p);
  return std::abs(j_value - rhs);
}

inline double identity_residual(const EnergyTerms& t, const ModelParams& params) {
  return identity_residual(t, params, J(t, params), I(t, params));
}

// Field-level entry points. Each builds a discretisation with the given
// oversampling factor (default 2).

inline Field log_source(const Field& f, const ModelParams& params) {
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = log_source_value(f.values()[i], params.p());
  return Field(f.domain(), std::move(out));
}

inline EnergyTerms energy_terms(const Field& f, const ModelParams& params, int oversample = 2) {
  Discretization disc(f.domain(), oversample);
  return energy_terms(disc, disc.to_spectral(f.values()), params);
}

inline double log_integral(const Field& f, const ModelParams& params, int oversample = 2) {
  return energy_terms(f, params, oversample).log_int;
}

inline double J(const Field& f, const ModelParams& params, int oversample = 2) {
  return J(energy_terms(f, params, oversample), params);
}

inline double I(const Field& f, const ModelParams& params, int oversample = 2) {
  return I(energy_terms(f, params, oversample), params);
}

inline double J_delta(const Field& f, double delta, const ModelParams& params, int oversample = 2) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  return J_delta(energy_terms(f, params, oversample), delta, params);
}

inline double I_delta(const Field& f, double delta, const ModelParams& params, int oversample = 2) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  return I_delta(energy_terms(f, params, oversample), delta, params);
}

inline double identity_residual(const Field& f, const ModelParams& params, int oversample = 2) {
  return identity_residual(energy_terms(f, params, oversample), params);
}

/// Both sides of int (|v|^p |log|v||)^gamma <= (e p)^{-gamma} |U| + 2^gamma ||v||_{1+p}^{1+p}.
struct LogPowerBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

inline LogPowerBound log_power_bound_check(const Discretization& disc, std::span<const double> coeffs,
                                           const ModelParams& params) {
  const double p = params.p(), g = params.gamma();
  const auto fine = disc.fine_values(coeffs);
  double lhs = 0.0, power = 0.0;
  for (double v : fine) {
    const double a = std::abs(v);
    if (a < kLogFloor) continue;
    lhs += std::pow(std::pow(a, p) * std::abs(std::log(a)), g);
    power += std::pow(a, 1.0 + p);
  }
  LogPowerBound b;
  b.lhs = lhs * disc.fine_weight();
  b.rhs = std::pow(std::numbers::e * p, -g) * disc.domain().measure() +
          std::pow(2.0, g) * power * disc.fine_weight();
  b.holds = b.lhs <= b.rhs * (1.0 + 1e-10);
  return b;
}

inline LogPowerBound log_power_bound_check(const Field& f, const ModelParams& params,
                                           int oversample = 2) {
  Discretization disc(f.domain(), oversample);
  return log_power_bound_check(disc, disc.to_spectral(f.values()), params);
}

}  // namespace pwell
