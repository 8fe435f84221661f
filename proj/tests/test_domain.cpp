#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "pwell/pwell.hpp"

using namespace pwell;
using std::numbers::pi;

namespace {

Field random_field(const DomainSpec& d, std::uint64_t seed, std::size_t max_mode = 0) {
  Discretization disc(d, 1);
  return Field(d, disc.from_spectral(random_smooth_coeffs(disc, seed, 0, max_mode)));
}

}  // namespace

TEST(DomainSpec, ValidatesShape) {
  EXPECT_THROW(DomainSpec({}, {}), InvalidArgument);
  EXPECT_THROW(DomainSpec({1.0, 1.0, 1.0}, {8, 8, 8}), InvalidArgument);
  EXPECT_THROW(DomainSpec::interval(0.0, 16), InvalidArgument);
  EXPECT_THROW(DomainSpec::interval(-1.0, 16), InvalidArgument);
  EXPECT_THROW(DomainSpec::interval(1.0, 7), InvalidArgument);
  EXPECT_THROW(DomainSpec({1.0}, {16, 16}), InvalidArgument);
  const auto r = DomainSpec::rectangle(2.0, 3.0, 16, 32);
  EXPECT_EQ(r.dim(), 2u);
  EXPECT_DOUBLE_EQ(r.measure(), 6.0);
  EXPECT_EQ(r.size(), 512u);
}

TEST(Field, RejectsBadValues) {
  const auto d = DomainSpec::interval(1.0, 16);
  EXPECT_THROW(Field(d, std::vector<double>(15, 0.0)), InvalidArgument);
  std::vector<double> v(16, 0.0);
  v[3] = NAN;
  EXPECT_THROW(Field(d, v), InvalidArgument);
  v[3] = INFINITY;
  EXPECT_THROW(Field(d, v), InvalidArgument);
  EXPECT_THROW(SpectralField(d, std::vector<double>(17, 0.0)), InvalidArgument);
  EXPECT_THROW(norm_lp(Field::zeros(d), 0.5), InvalidArgument);
}

TEST(Transform, EigenfunctionMapsToUnitVector) {
  const auto d = DomainSpec::interval(1.0, 64);
  const auto c = to_spectral(Field::sample(d, [](double x) { return std::sin(pi * x); }));
  EXPECT_NEAR(c.coeffs()[0], 1.0, 1e-12);
  for (std::size_t k = 1; k < 64; ++k) EXPECT_LE(std::abs(c.coeffs()[k]), 1e-12);
}

TEST(Transform, Linearity) {
  const auto d = DomainSpec::interval(1.0, 64);
  const auto c = to_spectral(
      Field::sample(d, [](double x) { return std::sin(2 * pi * x) + 0.5 * std::sin(3 * pi * x); }));
  EXPECT_NEAR(c.at({2}), 1.0, 1e-12);
  EXPECT_NEAR(c.at({3}), 0.5, 1e-12);
  EXPECT_NEAR(c.at({1}), 0.0, 1e-12);
}

TEST(Transform, LengthScaledEigenfunction) {
  const auto d = DomainSpec::interval(3.0, 32);
  const auto c = to_spectral(Field::sample(d, [](double x) { return std::sin(5 * pi * x / 3.0); }));
  EXPECT_NEAR(c.at({5}), 1.0, 1e-12);
}

TEST(Transform, RoundTripRandomField) {
  for (const auto& d : {DomainSpec::interval(1.0, 128), DomainSpec::interval(2.5, 100),
                        DomainSpec::rectangle(1.0, 2.0, 32, 24)}) {
    Discretization disc(d, 1);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    std::vector<double> v(d.size());
    for (double& x : v) x = n(rng);
    const auto back = from_spectral(to_spectral(Field(d, v)));
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(back.values()[i], v[i], 1e-12);
  }
}

TEST(Transform, InvertsExactlyOnEigenbasis2D) {
  const auto d = DomainSpec::rectangle(1.0, 1.0, 16, 16);
  for (std::size_t i : {1u, 4u, 16u})
    for (std::size_t j : {1u, 7u}) {
      const auto f = from_spectral(SpectralField::mode(d, {i, j}));
      const auto c = to_spectral(f);
      for (std::size_t k = 0; k < d.size(); ++k)
        EXPECT_NEAR(c.coeffs()[k], k == (i - 1) * 16 + (j - 1) ? 1.0 : 0.0, 1e-13);
      const auto g = Field::sample(d, [&](double x, double y) { return std::sin(i * pi * x) * std::sin(j * pi * y); });
      for (std::size_t k = 0; k < d.size(); ++k) EXPECT_NEAR(f.values()[k], g.values()[k], 1e-13);
    }
}

TEST(Spectrum, FirstEigenvalue) {
  EXPECT_NEAR(laplacian_spectrum(DomainSpec::interval(1.0, 32)).lambda1, pi * pi, 1e-12);
  EXPECT_NEAR(laplacian_spectrum(DomainSpec::interval(1.0, 200)).lambda1, pi * pi, 1e-12);
  EXPECT_NEAR(laplacian_spectrum(DomainSpec::rectangle(1.0, 1.0, 16, 16)).lambda1, 2 * pi * pi, 1e-12);
  EXPECT_NEAR(laplacian_spectrum(DomainSpec::interval(2.0, 32)).lambda1, pi * pi / 4, 1e-12);
  const auto s = laplacian_spectrum(DomainSpec::rectangle(1.0, 2.0, 8, 8));
  EXPECT_NEAR(s.eigenvalues[1 * 8 + 2], pi * pi * (4.0 + 9.0 / 4.0), 1e-12);
  for (double e : s.eigenvalues) EXPECT_GE(e, s.lambda1);
}

TEST(Norms, ClosedFormsOnSine) {
  const auto d = DomainSpec::interval(1.0, 64);
  const auto f = Field::sample(d, [](double x) { return std::sin(pi * x); });
  EXPECT_NEAR(norm_l2(f) * norm_l2(f), 0.5, 1e-13);
  EXPECT_NEAR(norm_h10(f) * norm_h10(f), pi * pi / 2, 1e-12);
  EXPECT_NEAR(norm_h1sq(f), (1 + pi * pi) / 2, 1e-12);
  EXPECT_NEAR(std::pow(norm_lp(f, 4.0), 4.0), 3.0 / 8.0, 1e-13);
}

TEST(Norms, ClosedFormsOnSquare) {
  const auto d = DomainSpec::rectangle(1.0, 1.0, 32, 32);
  const auto f = Field::sample(d, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  EXPECT_NEAR(norm_l2(f) * norm_l2(f), 0.25, 1e-13);
  EXPECT_NEAR(norm_h10(f) * norm_h10(f), pi * pi / 2, 1e-12);
  EXPECT_NEAR(std::pow(norm_lp(f, 4.0), 4.0), 9.0 / 64.0, 1e-13);
}

TEST(Norms, Homogeneity) {
  const auto d = DomainSpec::interval(1.0, 64);
  const auto f = random_field(d, 5);
  const auto g = f.scaled(-2.5);
  EXPECT_NEAR(norm_l2(g), 2.5 * norm_l2(f), 1e-12 * norm_l2(g));
  EXPECT_NEAR(norm_h10(g), 2.5 * norm_h10(f), 1e-12 * norm_h10(g));
  EXPECT_NEAR(norm_h1sq(g), 6.25 * norm_h1sq(f), 1e-12 * norm_h1sq(g));
  EXPECT_NEAR(norm_lp(g, 3.0), 2.5 * norm_lp(f, 3.0), 1e-12 * norm_lp(g, 3.0));
}

TEST(Norms, MatchQuadratureOracle) {
  const auto d = DomainSpec::interval(1.0, 128);
  Discretization disc(d, 2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = random_smooth_coeffs(disc, seed, 0, 16);
    const auto s = oracle::sample_series(c, 1.0);
    EXPECT_NEAR(disc.l2_sq(c), oracle::l2_sq(s), 1e-8 * oracle::l2_sq(s));
    EXPECT_NEAR(disc.gradient_sq(c), oracle::grad_sq(s), 1e-8 * oracle::grad_sq(s));
    for (double q : {2.0, 4.0, 6.0}) {
      const double ref = std::pow(oracle::power(s, q), 1.0 / q);
      EXPECT_NEAR(norm_lp(disc, c, q), ref, 1e-8 * ref) << "q = " << q;
    }
  }
}

// |v|^q with odd or fractional q has a kink at sign changes, so the nodal rule
// converges algebraically there; a finer grid recovers the budget.
TEST(Norms, NonSmoothExponentNeedsFinerGrid) {
  const auto d = DomainSpec::interval(1.0, 128);
  Discretization disc(d, 4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = random_smooth_coeffs(disc, seed, 0, 16);
    const auto s = oracle::sample_series(c, 1.0);
    for (double q : {2.5, 3.0}) {
      const double ref = std::pow(oracle::power(s, q), 1.0 / q);
      EXPECT_NEAR(norm_lp(disc, c, q), ref, 1e-8 * ref) << "q = " << q;
    }
  }
}

TEST(Norms, PoincareAndParseval) {
  for (const auto& d : {DomainSpec::interval(1.0, 64), DomainSpec::interval(4.0, 128),
                        DomainSpec::rectangle(1.0, 1.5, 16, 24)}) {
    Discretization disc(d, 1);
    const double l1 = disc.lambda1();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto c = random_smooth_coeffs(disc, seed, 1);
      const double g = disc.gradient_sq(c), l2 = disc.l2_sq(c);
      EXPECT_GE(g, l1 * l2 * (1 - 1e-14));
      EXPECT_GE(g, l1 / (1 + l1) * (g + l2) * (1 - 1e-14));
      const double nodal = norm_l2(Field(d, disc.from_spectral(c)));
      EXPECT_NEAR(nodal, std::sqrt(l2), 1e-12 * nodal);
    }
  }
}

TEST(Oversampling, FineValuesInterpolate) {
  const auto d = DomainSpec::interval(1.0, 32);
  Discretization disc(d, 3);
  EXPECT_EQ(disc.fine_domain().points(0), 98u);
  std::vector<double> c(32, 0.0);
  c[2] = 1.5;
  const auto fine = disc.fine_values(c);
  const double h = disc.fine_domain().spacing(0);
  for (std::size_t j = 0; j < fine.size(); ++j) EXPECT_NEAR(fine[j], 1.5 * std::sin(3 * pi * (j + 1) * h), 1e-13);
  const auto back = disc.project_fine(fine);
  for (std::size_t k = 0; k < 32; ++k) EXPECT_NEAR(back[k], c[k], 1e-13);
}
