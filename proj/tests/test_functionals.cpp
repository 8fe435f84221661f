#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "pwell/pwell.hpp"

using namespace pwell;
using std::numbers::pi;

namespace {

const DomainSpec kUnit = DomainSpec::interval(1.0, 128);

Field sine(double amp = 1.0) {
  return Field::sample(kUnit, [amp](double x) { return amp * std::sin(pi * x); });
}

std::vector<double> random_q(const Discretization& disc, std::uint64_t seed, double scale = 1.0) {
  auto q = random_smooth_coeffs(disc, seed, 0);
  for (double& x : q) x *= scale;
  return q;
}

}  // namespace

TEST(ModelParams, RejectsBadPower) {
  EXPECT_THROW(ModelParams(1.0), InvalidArgument);
  EXPECT_THROW(ModelParams(0.5), InvalidArgument);
  EXPECT_THROW(ModelParams(NAN), InvalidArgument);
  EXPECT_NEAR(ModelParams(3.0).gamma(), 8.0 / 7.0, 1e-15);
  EXPECT_TRUE(ModelParams(10.0).supercritical_admissible(2));
  EXPECT_TRUE(ModelParams(3.0).supercritical_admissible(3));
  EXPECT_FALSE(ModelParams(4.0).supercritical_admissible(3));
  EXPECT_FALSE(ModelParams(1.5).supercritical_admissible(6));
}

TEST(LogSource, PointValues) {
  EXPECT_EQ(log_source_value(0.0, 3.0), 0.0);
  EXPECT_EQ(log_source_value(1e-320, 3.0), 0.0);
  EXPECT_EQ(log_source_value(1.0, 3.0), 0.0);
  EXPECT_EQ(log_source_value(-1.0, 2.0), 0.0);
  const double e = std::numbers::e;
  EXPECT_NEAR(log_source_value(e, 2.0), e * e, 1e-14);
  EXPECT_NEAR(log_density(e, 2.0), e * e * e, 1e-13);
  EXPECT_EQ(log_density(0.0, 2.0), 0.0);
}

TEST(LogSource, Odd) {
  for (double p : {1.5, 2.0, 3.0, 7.0})
    for (double v : {1e-12, 0.3, 0.9, 1.0, 2.5, 40.0})
      EXPECT_EQ(log_source_value(-v, p), -log_source_value(v, p));
  const auto f = Field::sample(kUnit, [](double x) { return std::sin(3 * pi * x) + 0.2; });
  const auto a = log_source(f, ModelParams(3.0));
  const auto b = log_source(f.scaled(-1.0), ModelParams(3.0));
  for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_EQ(b.values()[i], -a.values()[i]);
}

TEST(LogIntegral, NonPositiveForSubUnitFields) {
  Discretization disc(kUnit, 2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto q = random_q(disc, seed);
    double m = 0.0;
    for (double v : disc.fine_values(q)) m = std::max(m, std::abs(v));
    for (double& x : q) x /= m;
    EXPECT_LE(energy_terms(disc, q, ModelParams(3.0)).log_int, 0.0);
  }
}

TEST(LogIntegral, SineMatchesOracle) {
  const auto s = oracle::sample_series({1.0}, 1.0);
  for (double p : {2.0, 3.0, 5.0}) {
    const double ref = oracle::log_power(s, p);
    const double v = log_integral(sine(), ModelParams(p));
    EXPECT_LT(v, 0.0);
    EXPECT_NEAR(v, ref, 1e-8 * std::abs(ref)) << "p = " << p;
  }
}

TEST(LogIntegral, UnitMagnitudeGivesZero) {
  // Constant interior profile |f| = 1: every log vanishes at the nodes.
  const auto f = Field(kUnit, std::vector<double>(kUnit.size(), 1.0));
  EXPECT_NEAR(log_integral(f, ModelParams(3.0), 1), 0.0, 1e-14);
}

TEST(Functionals, ZeroField) {
  const auto z = Field::zeros(kUnit);
  const ModelParams mp(3.0);
  EXPECT_EQ(J(z, mp), 0.0);
  EXPECT_EQ(I(z, mp), 0.0);
  EXPECT_EQ(identity_residual(z, mp), 0.0);
}

TEST(Functionals, SineMatchesOracle) {
  const ModelParams mp(3.0);
  const auto s = oracle::sample_series({1.0}, 1.0);
  const double G = oracle::grad_sq(s), P = oracle::power(s, 4.0), L = oracle::log_power(s, 3.0);
  const double j = G / 2 - L / 4 + P / 16, i = G - L;
  EXPECT_NEAR(J(sine(), mp), j, 1e-8 * std::abs(j));
  EXPECT_NEAR(I(sine(), mp), i, 1e-8 * std::abs(i));
  EXPECT_LE(identity_residual(sine(), mp), 1e-10 * (1 + std::abs(j)));
}

TEST(Functionals, NehariDominatesGradientBelowUnit) {
  Discretization disc(kUnit, 2);
  const ModelParams mp(2.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto q = random_q(disc, seed);
    double m = 0.0;
    for (double v : disc.fine_values(q)) m = std::max(m, std::abs(v));
    for (double& x : q) x *= 0.99 / m;
    const auto t = energy_terms(disc, q, mp);
    EXPECT_GE(I(t, mp), t.gradient_sq);
    EXPECT_GT(t.gradient_sq, 0.0);
  }
}

TEST(Functionals, DeltaFamily) {
  Discretization disc(kUnit, 2);
  const ModelParams mp(3.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = energy_terms(disc, random_q(disc, seed, 3.0), mp);
    EXPECT_EQ(J_delta(t, 1.0, mp), J(t, mp));
    EXPECT_EQ(I_delta(t, 1.0, mp), I(t, mp));
    for (double d : {0.1, 0.7, 1.9}) {
      const double scale = std::abs(I(t, mp)) + t.gradient_sq;
      EXPECT_NEAR(I_delta(t, d, mp), I(t, mp) + (d - 1) * t.gradient_sq, 1e-13 * scale);
      EXPECT_NEAR(J_delta(t, d, mp), J(t, mp) + 0.5 * (d - 1) * t.gradient_sq, 1e-13 * scale);
    }
  }
  EXPECT_THROW(J_delta(sine(), 0.0, mp), InvalidArgument);
  EXPECT_THROW(I_delta(sine(), -1.0, mp), InvalidArgument);
}

TEST(Functionals, IdentityResidualIsRoundoff) {
  Discretization disc(kUnit, 2);
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    const ModelParams mp(p);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const double scale = std::pow(10.0, static_cast<double>(seed % 5) - 2.0);
      const auto t = energy_terms(disc, random_q(disc, seed, scale), mp);
      EXPECT_LE(identity_residual(t, mp), 1e-10 * (1 + std::abs(J(t, mp)))) << "p = " << p << " seed " << seed;
    }
  }
  const auto f = Field::sample(kUnit, [](double x) { return std::sin(pi * x) + 0.3 * std::sin(2 * pi * x); });
  EXPECT_LE(identity_residual(f, ModelParams(2.0)), 1e-10 * (1 + std::abs(J(f, ModelParams(2.0)))));
}

TEST(Functionals, IdentityDetectsWrongJ) {
  const ModelParams mp(3.0);
  const auto t = energy_terms(sine(), mp);
  EXPECT_GT(identity_residual(t, mp, J(t, mp), t.gradient_sq + t.log_int), 1e-3);
}

TEST(Functionals, APrioriBoundsOnNehariSide) {
  Discretization disc(kUnit, 2);
  std::size_t checked = 0;
  for (double p : {1.5, 3.0}) {
    const ModelParams mp(p);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const double scale = 0.2 * static_cast<double>(seed % 20 + 1);
      const auto t = energy_terms(disc, random_q(disc, seed, scale), mp);
      if (I(t, mp) < 0.0) continue;
      ++checked;
      const double j = J(t, mp);
      EXPECT_LE(t.power, (1 + p) * (1 + p) * j * (1 + 1e-12));
      EXPECT_LE((p - 1) / (2 * (1 + p)) * t.gradient_sq, j * (1 + 1e-12));
    }
  }
  EXPECT_GT(checked, 50u);
}

TEST(LogPowerBound, Cases) {
  const ModelParams mp(3.0);
  const double g = mp.gamma();
  const auto z = log_power_bound_check(Field::zeros(kUnit), mp);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_NEAR(z.rhs, std::pow(std::numbers::e * 3.0, -g), 1e-15);
  EXPECT_TRUE(z.holds);

  const auto unit = log_power_bound_check(sine(), mp);
  EXPECT_LE(unit.lhs, std::pow(std::numbers::e * 3.0, -g));

  Discretization disc(kUnit, 2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double scale = std::pow(10.0, static_cast<double>(seed % 4) - 1.0);
    EXPECT_TRUE(log_power_bound_check(disc, random_q(disc, seed, scale), mp).holds) << seed;
  }
}
