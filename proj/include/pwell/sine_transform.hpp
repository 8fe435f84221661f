#pragma once

// Discrete sine transform pair realising the Dirichlet eigenbasis.
//
// Normalisation (the only place it is defined):
//   nodal value    f(x_j) = sum_k c_k prod_i sin(k_i pi j_i / (N_i + 1))
//   coefficient    c_k    = prod_i (2 / (N_i + 1)) sum_j f(x_j) prod_i sin(k_i pi j_i / (N_i + 1))
// so that sampling sin(k pi x / L) yields the unit vector e_k. FFTW's RODFT00
// computes Y = 2^d sum_j X_j prod sin(...), hence
//   to_spectral   = Y / prod (N_i + 1)
//   from_spectral = Y / 2^d.

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "pwell/domain.hpp"
#include "pwell/error.hpp"

namespace pwell {

namespace detail {

/// Process-wide cache of DST-I plans keyed by grid shape. Plan creation is
/// serialised; execution through fftw_execute_r2r on caller buffers is
/// thread-safe.
class DstPlanCache {
 public:
  static DstPlanCache& instance() {
    static DstPlanCache cache;
    return cache;
  }

  fftw_plan plan(const std::vector<std::size_t>& shape) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(shape);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (std::size_t n : shape) total *= n;
    std::vector<double> in(total), out(total);
    std::vector<int> n(shape.begin(), shape.end());
    std::vector<fftw_r2r_kind> kinds(shape.size(), FFTW_RODFT00);
    fftw_plan p = fftw_plan_r2r(static_cast<int>(n.size()), n.data(), in.data(), out.data(),
                                kinds.data(), FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    if (p == nullptr) throw NumericalFailure("FFTW could not create a DST-I plan");
    plans_.emplace(shape, p);
    return p;
  }

  DstPlanCache(const DstPlanCache&) = delete;
  DstPlanCache& operator=(const DstPlanCache&) = delete;

 private:
  DstPlanCache() = default;
  ~DstPlanCache() {
    for (auto& [shape, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::vector<std::size_t>, fftw_plan> plans_;
};

/// Unnormalised DST-I along every axis (FFTW RODFT00).
inline void dst1(const std::vector<std::size_t>& shape, std::span<const double> in,
                 std::span<double> out) {
  fftw_plan p = DstPlanCache::instance().plan(shape);
  fftw_execute_r2r(p, const_cast<double*>(in.data()), out.data());
}

}  // namespace detail

/// Grid + oversampled quadrature grid for one box domain. Immutable after
/// construction and safe to share between threads.
///
/// The fine grid has M_i = oversample (N_i + 1) - 1 interior nodes; the spectral
/// interpolant is evaluated there and integrals use the nodal trapezoid rule.
class Discretization {
 public:
  explicit Discretization(DomainSpec domain, int oversample = 2)
      : domain_(std::move(domain)),
        fine_(make_fine(domain_, oversample)),
        oversample_(oversample),
        spectrum_(laplacian_spectrum(domain_)) {
    scale_ = domain_.measure() / static_cast<double>(1u << domain_.dim());
    fine_weight_ = fine_.cell_volume();
    coarse_norm_ = 1.0;
    fine_norm_ = 1.0;
    for (std::size_t a = 0; a < domain_.dim(); ++a) {
      coarse_norm_ /= static_cast<double>(domain_.points(a) + 1);
      fine_norm_ /= static_cast<double>(fine_.points(a) + 1);
    }
  }

  const DomainSpec& domain() const noexcept { return domain_; }
  const DomainSpec& fine_domain() const noexcept { return fine_; }
  int oversample() const noexcept { return oversample_; }
  const SpectrumInfo& spectrum() const noexcept { return spectrum_; }
  double lambda1() const noexcept { return spectrum_.lambda1; }
  std::size_t modes() const noexcept { return domain_.size(); }

  /// ||f||^2 = scale * sum_k c_k^2, scale = |U| / 2^d.
  double parseval_scale() const noexcept { return scale_; }
  /// Trapezoid weight of one fine-grid node.
  double fine_weight() const noexcept { return fine_weight_; }

  std::vector<double> to_spectral(std::span<const double> nodal) const {
    check_size(nodal.size(), domain_.size());
    std::vector<double> c(nodal.size());
    detail::dst1(domain_.resolution(), nodal, c);
    for (double& x : c) x *= coarse_norm_;
    return c;
  }

  std::vector<double> from_spectral(std::span<const double> coeffs) const {
    check_size(coeffs.size(), domain_.size());
    std::vector<double> f(coeffs.size());
    detail::dst1(domain_.resolution(), coeffs, f);
    const double s = 1.0 / static_cast<double>(1u << domain_.dim());
    for (double& x : f) x *= s;
    return f;
  }

  /// Spectral interpolant sampled on the fine grid.
  std::vector<double> fine_values(std::span<const double> coeffs) const {
    check_size(coeffs.size(), domain_.size());
    std::vector<double> padded(fine_.size(), 0.0);
    scatter(coeffs, padded);
    std::vector<double> f(padded.size());
    detail::dst1(fine_.resolution(), padded, f);
    const double s = 1.0 / static_cast<double>(1u << domain_.dim());
    for (double& x : f) x *= s;
    return f;
  }

  /// Sine coefficients (truncated to the coarse modes) of a fine-grid function,
  /// i.e. (g, psi_k) / (psi_k, psi_k) under the fine trapezoid rule.
  std::vector<double> project_fine(std::span<const double> fine_nodal) const {
    check_size(fine_nodal.size(), fine_.size());
    std::vector<double> full(fine_nodal.size());
    detail::dst1(fine_.resolution(), fine_nodal, full);
    std::vector<double> c(domain_.size());
    gather(full, c);
    for (double& x : c) x *= fine_norm_;
    return c;
  }

  /// sum_k w_k c_k^2 * scale for weights w (e.g. eigenvalues).
  double weighted_energy(std::span<const double> coeffs, std::span<const double> weights) const {
    double s = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) s += weights[k] * coeffs[k] * coeffs[k];
    return s * scale_;
  }

  /// ||grad v||^2 from coefficients.
  double gradient_sq(std::span<const double> coeffs) const {
    return weighted_energy(coeffs, spectrum_.eigenvalues);
  }

  /// ||v||^2 from coefficients.
  double l2_sq(std::span<const double> coeffs) const {
    double s = 0.0;
    for (double c : coeffs) s += c * c;
    return s * scale_;
  }

 private:
  static DomainSpec make_fine(const DomainSpec& d, int oversample) {
    if (oversample < 1) throw InvalidArgument("oversample factor must be >= 1");
    std::vector<std::size_t> res;
    for (std::size_t n : d.resolution()) res.push_back(static_cast<std::size_t>(oversample) * (n + 1) - 1);
    return d.with_resolution(std::move(res));
  }

  static void check_size(std::size_t got, std::size_t want) {
    if (got != want) throw InvalidArgument("array shape does not match the domain resolution");
  }

  void scatter(std::span<const double> coarse, std::span<double> fine) const {
    if (domain_.dim() == 1) {
      std::copy(coarse.begin(), coarse.end(), fine.begin());
      return;
    }
    const std::size_t ny = domain_.points(1), my = fine_.points(1);
    for (std::size_t i = 0; i < domain_.points(0); ++i)
      for (std::size_t j = 0; j < ny; ++j) fine[i * my + j] = coarse[i * ny + j];
  }

  void gather(std::span<const double> fine, std::span<double> coarse) const {
    if (domain_.dim() == 1) {
      std::copy_n(fine.begin(), coarse.size(), coarse.begin());
      return;
    }
    const std::size_t ny = domain_.points(1), my = fine_.points(1);
    for (std::size_t i = 0; i < domain_.points(0); ++i)
      for (std::size_t j = 0; j < ny; ++j) coarse[i * ny + j] = fine[i * my + j];
  }

  DomainSpec domain_;
  DomainSpec fine_;
  int oversample_;
  SpectrumInfo spectrum_;
  double scale_ = 1.0;
  double fine_weight_ = 1.0;
  double coarse_norm_ = 1.0;
  double fine_norm_ = 1.0;
};

inline SpectralField to_spectral(const Field& f) {
  Discretization disc(f.domain(), 1);
  return SpectralField(f.domain(), disc.to_spectral(f.values()));
}

inline Field from_spectral(const SpectralField& s) {
  Discretization disc(s.domain(), 1);
  return Field(s.domain(), disc.from_spectral(s.coeffs()));
}

inline Field from_spectral(std::span<const double> coeffs, const DomainSpec& domain) {
  return from_spectral(SpectralField(domain, std::vector<double>(coeffs.begin(), coeffs.end())));
}

}  // namespace pwell
