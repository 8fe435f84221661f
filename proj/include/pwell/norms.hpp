#pragma once

#include <cmath>
#include <span>

#include "pwell/domain.hpp"
#include "pwell/sine_transform.hpp"

namespace pwell {

/// ||f|| by the nodal trapezoid rule on the native grid.
inline double norm_l2(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s * f.domain().cell_volume());
}

/// ||f|| from the sine coefficients (Parseval).
inline double norm_l2_spectral(const Discretization& disc, std::span<const double> coeffs) {
  return std::sqrt(disc.l2_sq(coeffs));
}

/// ||grad f|| = (scale sum_k lambda_k c_k^2)^{1/2}.
inline double norm_h10(const Discretization& disc, std::span<const double> coeffs) {
  return std::sqrt(disc.gradient_sq(coeffs));
}

inline double norm_h10(const Field& f) {
  Discretization disc(f.domain(), 1);
  return norm_h10(disc, disc.to_spectral(f.values()));
}

/// ||f||^2 + ||grad f||^2.
inline double norm_h1sq(const Discretization& disc, std::span<const double> coeffs) {
  return disc.l2_sq(coeffs) + disc.gradient_sq(coeffs);
}

inline double norm_h1sq(const Field& f) {
  Discretization disc(f.domain(), 1);
  return norm_h1sq(disc, disc.to_spectral(f.values()));
}

/// int |f|^q on the oversampled grid (no root).
inline double power_integral(const Discretization& disc, std::span<const double> coeffs, double q) {
  const auto fine = disc.fine_values(coeffs);
  double s = 0.0;
  for (double v : fine) s += std::pow(std::abs(v), q);
  return s * disc.fine_weight();
}

/// ||f||_q, q >= 1, evaluated on the spectral interpolant over the oversampled grid.
inline double norm_lp(const Discretization& disc, std::span<const double> coeffs, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("norm_lp requires q >= 1");
  return std::pow(power_integral(disc, coeffs, q), 1.0 / q);
}

inline double norm_lp(const Field& f, double q, int oversample = 2) {
  Discretization disc(f.domain(), oversample);
  return norm_lp(disc, disc.to_spectral(f.values()), q);
}

}  // namespace pwell
