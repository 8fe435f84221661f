#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "pwell/error.hpp"

namespace pwell {

/// Box domain U = (0,L_0) x ... with homogeneous Dirichlet data, sampled on
/// the interior nodes x_j = j L / (N + 1), j = 1..N, along every axis.
class DomainSpec {
 public:
  DomainSpec() : DomainSpec({1.0}, {64}) {}

  DomainSpec(std::vector<double> lengths, std::vector<std::size_t> resolution)
      : lengths_(std::move(lengths)), resolution_(std::move(resolution)) {
    if (lengths_.empty() || lengths_.size() > 2)
      throw InvalidArgument("domain dimension must be 1 or 2");
    if (lengths_.size() != resolution_.size())
      throw InvalidArgument("domain lengths and resolution differ in dimension");
    for (double l : lengths_)
      if (!(l > 0.0) || !std::isfinite(l)) throw InvalidArgument("domain lengths must be positive");
    for (std::size_t n : resolution_)
      if (n < 8) throw InvalidArgument("domain resolution must be at least 8 per axis");
  }

  static DomainSpec interval(double length, std::size_t n) { return DomainSpec({length}, {n}); }
  static DomainSpec rectangle(double lx, double ly, std::size_t nx, std::size_t ny) {
    return DomainSpec({lx, ly}, {nx, ny});
  }

  std::size_t dim() const noexcept { return lengths_.size(); }
  const std::vector<double>& lengths() const noexcept { return lengths_; }
  const std::vector<std::size_t>& resolution() const noexcept { return resolution_; }
  double length(std::size_t axis) const { return lengths_.at(axis); }
  std::size_t points(std::size_t axis) const { return resolution_.at(axis); }

  /// |U|
  double measure() const {
    return std::accumulate(lengths_.begin(), lengths_.end(), 1.0, std::multiplies<>());
  }

  std::size_t size() const {
    return std::accumulate(resolution_.begin(), resolution_.end(), std::size_t{1},
                           std::multiplies<>());
  }

  /// Grid spacing L_i / (N_i + 1).
  double spacing(std::size_t axis) const {
    return lengths_.at(axis) / static_cast<double>(resolution_.at(axis) + 1);
  }

  /// Nodal trapezoid weight (product of spacings; boundary nodes carry zero).
  double cell_volume() const {
    double w = 1.0;
    for (std::size_t a = 0; a < dim(); ++a) w *= spacing(a);
    return w;
  }

  /// Same box, different resolution.
  DomainSpec with_resolution(std::vector<std::size_t> resolution) const {
    return DomainSpec(lengths_, std::move(resolution));
  }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;

 private:
  std::vector<double> lengths_;
  std::vector<std::size_t> resolution_;
};

/// Nodal values on the interior grid, row-major with axis 0 slowest.
class Field {
 public:
  Field(DomainSpec domain, std::vector<double> values)
      : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.size())
      throw InvalidArgument("field has " + std::to_string(values_.size()) + " values, domain expects " +
                            std::to_string(domain_.size()));
    for (double v : values_)
      if (!std::isfinite(v)) throw InvalidArgument("field contains non-finite values");
  }

  static Field zeros(const DomainSpec& domain) {
    return Field(domain, std::vector<double>(domain.size(), 0.0));
  }

  /// Samples f at the interior nodes. f receives one coordinate per axis.
  template <class Fn>
  static Field sample(const DomainSpec& domain, Fn&& f) {
    std::vector<double> values(domain.size());
    if constexpr (std::is_invocable_v<Fn&, double>) {
      if (domain.dim() != 1) throw InvalidArgument("sampler takes one coordinate but the domain is 2-D");
      const double h = domain.spacing(0);
      for (std::size_t j = 0; j < domain.points(0); ++j)
        values[j] = f(static_cast<double>(j + 1) * h);
    } else {
      if (domain.dim() != 2) throw InvalidArgument("sampler takes two coordinates but the domain is 1-D");
      const double hx = domain.spacing(0), hy = domain.spacing(1);
      const std::size_t ny = domain.points(1);
      for (std::size_t i = 0; i < domain.points(0); ++i)
        for (std::size_t j = 0; j < ny; ++j)
          values[i * ny + j] = f(static_cast<double>(i + 1) * hx, static_cast<double>(j + 1) * hy);
    }
    return Field(domain, std::move(values));
  }

  const DomainSpec& domain() const noexcept { return domain_; }
  std::span<const double> values() const noexcept { return values_; }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  Field scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return Field(domain_, std::move(v));
  }

 private:
  DomainSpec domain_;
  std::vector<double> values_;
};

/// Sine-basis coefficients c_k, same layout as the nodal grid; mode index k_i
/// = position + 1. The basis functions are prod_i sin(k_i pi x_i / L_i)
/// without normalisation, so sin(k pi x / L) maps to a unit vector.
class SpectralField {
 public:
  SpectralField(DomainSpec domain, std::vector<double> coeffs)
      : domain_(std::move(domain)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != domain_.size())
      throw InvalidArgument("coefficient array does not match domain resolution");
  }

  static SpectralField zeros(const DomainSpec& domain) {
    return SpectralField(domain, std::vector<double>(domain.size(), 0.0));
  }

  /// Single eigenmode; `modes` holds 1-based indices per axis.
  static SpectralField mode(const DomainSpec& domain, std::vector<std::size_t> modes,
                            double amplitude = 1.0) {
    if (modes.size() != domain.dim()) throw InvalidArgument("mode index has wrong dimension");
    SpectralField s = zeros(domain);
    s.at(modes) = amplitude;
    return s;
  }

  const DomainSpec& domain() const noexcept { return domain_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }

  double& at(const std::vector<std::size_t>& modes) { return coeffs_.at(flat_index(modes)); }
  double at(const std::vector<std::size_t>& modes) const { return coeffs_.at(flat_index(modes)); }

  std::size_t flat_index(const std::vector<std::size_t>& modes) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < domain_.dim(); ++a) {
      if (modes[a] < 1 || modes[a] > domain_.points(a))
        throw InvalidArgument("mode index out of range for the domain resolution");
      idx = idx * domain_.points(a) + (modes[a] - 1);
    }
    return idx;
  }

 private:
  DomainSpec domain_;
  std::vector<double> coeffs_;
};

/// Dirichlet Laplacian eigenvalues on the box, laid out like the coefficients.
struct SpectrumInfo {
  std::vector<double> eigenvalues;
  double lambda1 = 0.0;
};

inline SpectrumInfo laplacian_spectrum(const DomainSpec& domain) {
  SpectrumInfo s;
  s.eigenvalues.resize(domain.size());
  auto axis_ev = [&](std::size_t axis, std::size_t k) {
    const double w = static_cast<double>(k) * std::numbers::pi / domain.length(axis);
    return w * w;
  };
  if (domain.dim() == 1) {
    for (std::size_t k = 0; k < domain.points(0); ++k) s.eigenvalues[k] = axis_ev(0, k + 1);
  } else {
    const std::size_t ny = domain.points(1);
    for (std::size_t i = 0; i < domain.points(0); ++i)
      for (std::size_t j = 0; j < ny; ++j)
        s.eigenvalues[i * ny + j] = axis_ev(0, i + 1) + axis_ev(1, j + 1);
  }
  s.lambda1 = *std::min_element(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

}  // namespace pwell
