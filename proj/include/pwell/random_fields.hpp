#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pwell/domain.hpp"
#include "pwell/sine_transform.hpp"

namespace pwell {

/// Engine for stream `stream` of run seed `seed`; streams are independent of
/// each other and of the order in which they are drawn.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// H^1-regular random coefficients c_k = xi_k / (1 + lambda_k), xi_k ~ N(0,1).
/// With max_mode > 0 only modes with every index <= max_mode are populated.
inline std::vector<double> random_smooth_coeffs(const Discretization& disc, std::uint64_t seed,
                                                std::uint64_t stream, std::size_t max_mode = 0) {
  auto rng = make_rng(seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& dom = disc.domain();
  const auto& ev = disc.spectrum().eigenvalues;
  std::vector<double> c(dom.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double xi = normal(rng);
    bool keep = true;
    if (max_mode > 0) {
      if (dom.dim() == 1) {
        keep = k + 1 <= max_mode;
      } else {
        const std::size_t ny = dom.points(1);
        keep = k / ny + 1 <= max_mode && k % ny + 1 <= max_mode;
      }
    }
    if (keep) c[k] = xi / (1.0 + ev[k]);
  }
  return c;
}

}  // namespace pwell
