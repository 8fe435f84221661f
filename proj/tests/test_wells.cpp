#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "pwell/pwell.hpp"

using namespace pwell;
using std::numbers::pi;

namespace {

const DomainSpec kUnit = DomainSpec::interval(1.0, 128);

// Computed once; every test below reads the same p = 3 constants.
const WellConstants& constants() {
  static const WellConstants k = compute_well_constants(kUnit, ModelParams(3.0));
  return k;
}

std::vector<double> scaled(std::vector<double> q, double s) {
  for (double& x : q) x *= s;
  return q;
}

}  // namespace

TEST(Sobolev, SingleModeQuotient) {
  Discretization disc(kUnit, 2);
  std::vector<double> q(disc.modes(), 0.0);
  q[0] = 1.0;
  EXPECT_NEAR(sobolev_quotient(disc, q, ModelParams(2.0)), std::pow(3.0 / 8.0, 0.25) / (pi / std::sqrt(2.0)), 1e-12);
  EXPECT_THROW(sobolev_quotient(disc, std::vector<double>(disc.modes(), 0.0), ModelParams(2.0)), InvalidArgument);
}

TEST(Sobolev, MultiStartAgreement) {
  const auto est = estimate_sobolev_constant(kUnit, ModelParams(3.0));
  ASSERT_EQ(est.starts.size(), 20u);
  EXPECT_TRUE(est.stationary);
  for (const auto& s : est.starts) EXPECT_NEAR(s.quotient, est.C, 1e-6);
  EXPECT_GT(est.C, 0.0);
  // The maximiser dominates any single mode.
  Discretization disc(kUnit, 2);
  std::vector<double> q(disc.modes(), 0.0);
  q[0] = 1.0;
  EXPECT_GE(est.C, sobolev_quotient(disc, q, ModelParams(3.0)));
}

TEST(Sobolev, ResolutionRefinement) {
  SobolevBudget b;
  b.refine = true;
  const auto est = estimate_sobolev_constant(kUnit, ModelParams(3.0), b);
  ASSERT_EQ(est.refinement.size(), 3u);
  EXPECT_EQ(est.refinement[0].first, 64u);
  EXPECT_EQ(est.refinement[2].first, 256u);
  for (std::size_t i = 1; i < 3; ++i)
    EXPECT_LT(std::abs(est.refinement[i].second - est.refinement[i - 1].second), 1e-4 * est.C);
}

TEST(WellFormulas, RadiusExamples) {
  const ModelParams mp(3.0);
  EXPECT_NEAR(r_of_delta(1.0, 1.0, mp), 1.0, 1e-15);
  EXPECT_NEAR(r_of_delta(8.0, 1.0, mp), 2.0, 1e-14);
  for (double C : {0.3, 1.0, 2.2})
    for (double r0 : {0.01, 0.5, 3.0}) {
      const double delta = std::pow(C, 5.0) * std::pow(r0, 3.0);
      EXPECT_NEAR(r_of_delta(delta, C, mp), r0, 1e-13 * r0);
    }
  EXPECT_LT(r_of_delta(0.5, 1.0, mp), r_of_delta(0.6, 1.0, mp));
  EXPECT_THROW(r_of_delta(0.0, 1.0, mp), InvalidArgument);
}

TEST(WellFormulas, DepthFormula) {
  const ModelParams mp(3.0);
  EXPECT_NEAR(d_formula(1.0, 1.0, mp), 0.25, 1e-15);
  EXPECT_LT(d_formula(2.0 - 1e-9, 1.0, mp), 1e-8);
  for (double d : {0.01, 0.5, 1.0, 1.9}) EXPECT_GT(d_formula(d, 1.0, mp), 0.0);
  EXPECT_THROW(d_formula(2.0, 1.0, mp), InvalidArgument);
  EXPECT_THROW(d_formula(0.0, 1.0, mp), InvalidArgument);
  // (1/2 - d/4) d^{2/3} is stationary where 1/3 d^{-1/3} = 5/12 d^{2/3}, d = 4/5.
  const double arg = oracle::golden_section_max([&](double d) { return d_formula(d, 1.0, mp); }, 1e-6, 2.0 - 1e-6, 1e-12);
  const double slope = std::pow(arg, -1.0 / 3.0) / 3.0 - 5.0 / 12.0 * std::pow(arg, 2.0 / 3.0);
  EXPECT_LE(std::abs(slope), 1e-8);
  EXPECT_NEAR(arg, 0.8, 1e-7);
}

TEST(WellDepth, MonotoneInBudget) {
  Discretization disc(kUnit, 2);
  const ModelParams mp(3.0);
  WellDepthEstimator small(disc, mp);
  small.sample(1000, 7);
  WellDepthEstimator large(disc, mp);
  large.sample(10000, 7);
  EXPECT_LE(large.depth(1.0), small.depth(1.0));
  const double before = large.depth(1.0);
  large.refine(1.0, DepthBudget{});
  EXPECT_LE(large.depth(1.0), before);
}

TEST(WellDepth, SingleModeNehariPoint) {
  Discretization disc(kUnit, 2);
  const ModelParams mp(3.0);
  std::vector<double> q(disc.modes(), 0.0);
  q[0] = 1.0;
  const auto ray = RaySummary::of(energy_terms(disc, q, mp));
  const double bs = beta_star(ray, mp);
  const double direct = J(energy_terms(disc, scaled(q, bs), mp), mp);
  EXPECT_NEAR(nehari_energy(ray, 1.0, mp), j_on_ray(ray, bs, mp), 1e-10 * std::abs(direct));
  EXPECT_NEAR(nehari_energy(ray, 1.0, mp), direct, 1e-10 * std::abs(direct));
}

TEST(WellConstants, Invariants) {
  const auto& k = constants();
  const double p = k.params.p();
  EXPECT_GT(k.sobolev_C, 0.0);
  EXPECT_GT(k.d_hat, 0.0);
  EXPECT_GT(k.delta0, 0.5 * (1 + p));
  EXPECT_NEAR(k.lambda1, pi * pi, 1e-12);
  const double r1 = r_of_delta(1.0, k);
  EXPECT_NEAR(k.d_formula_at_1, (p - 1) / (2 * (p + 1)) * r1 * r1, 1e-14 * k.d_formula_at_1);
  EXPECT_FALSE(k.sobolev_method.empty());
  EXPECT_GT(k.sobolev_iterations, 0u);
}

TEST(WellCurve, Shape) {
  const auto& k = constants();
  const auto c = well_curve(k, 200);
  ASSERT_EQ(c.delta.size(), 200u);
  EXPECT_NEAR(c.delta.front(), 0.01, 1e-15);
  EXPECT_EQ(c.delta.back(), k.delta0);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < c.delta.size(); ++i) {
    if (c.d_nehari[i] > c.d_nehari[peak]) peak = i;
    if (i + 1 < c.delta.size()) {
      EXPECT_GT(c.d_nehari[i], 0.0) << c.delta[i];
      if (c.delta[i + 1] <= 1.0) {
        EXPECT_LE(c.d_nehari[i], c.d_nehari[i + 1] * (1 + 1e-12));
      }
      if (c.delta[i] >= 1.0) {
        EXPECT_GE(c.d_nehari[i] * (1 + 1e-12), c.d_nehari[i + 1]);
      }
    }
    if (c.d_formula[i]) {
      EXPECT_GT(*c.d_formula[i], 0.0);
    }
    EXPECT_EQ(c.d_formula[i].has_value(), c.delta[i] < 0.5 * (1 + k.params.p()));
  }
  EXPECT_NEAR(c.delta[peak], 1.0, 1e-2);
  EXPECT_LE(k.d_hat_at(k.delta0), 1e-3 * k.d_hat);
  EXPECT_NEAR(delta_zero(k), k.delta0, 1e-10 * k.delta0);
}

TEST(WellCurve, Roots) {
  const auto& k = constants();
  const auto [a, b] = delta_roots(k.d_hat, k);
  EXPECT_NEAR(a, 1.0, 1e-3);
  EXPECT_NEAR(b, 1.0, 1e-3);
  const double eta = 0.5 * k.d_hat;
  const auto [d1, d2] = delta_roots(eta, k);
  EXPECT_LT(d1, 1.0);
  EXPECT_GT(d2, 1.0);
  if (d1 > 0.0) {
    EXPECT_NEAR(k.d_hat_at(d1), eta, 1e-3 * eta);
  }
  EXPECT_NEAR(k.d_hat_at(d2), eta, 1e-3 * eta);
  EXPECT_THROW(delta_roots(0.0, k), InvalidArgument);
  EXPECT_THROW(delta_roots(1.1 * k.d_hat, k), InvalidArgument);
  EXPECT_THROW(delta_grid(2.0, 2), InvalidArgument);
}

TEST(LambdaAlpha, BoundsAndMonotonicity) {
  const auto& k = constants();
  const auto near = lambda_alpha(1.001 * k.d_hat, k);
  const auto far = lambda_alpha(10.0 * k.d_hat, k);
  EXPECT_NEAR(near.lower_bound, std::pow(1.0 / k.C_eff(), 2.0 / 3.0), 1e-15);
  EXPECT_GT(near.lower_bound, 0.0);
  ASSERT_TRUE(near.estimate && far.estimate);
  EXPECT_LE(*far.estimate, *near.estimate);
  EXPECT_GE(far.admissible, near.admissible);
  EXPECT_GE(*far.estimate, far.lower_bound);
  EXPECT_GE(k.depth->pool().size(), 1000u);
  EXPECT_THROW(lambda_alpha(k.d_hat, k), InvalidArgument);
}

TEST(Classify, Examples) {
  const auto& k = constants();
  Discretization disc(kUnit, 2);
  std::vector<double> s(disc.modes(), 0.0);
  s[0] = 1.0;

  const auto small = classify_initial(scaled(s, 0.5), k);
  EXPECT_GT(small.I0, 0.0);
  EXPECT_LT(small.J0, k.d_hat);
  EXPECT_EQ(small.predicted_regime, Regime::GlobalDecay);
  EXPECT_GT(small.mu_pred, 0.0);
  EXPECT_TRUE(small.in_W);

  // First amplitude on a fine grid with I0 < 0 and J0 < d_hat.
  std::optional<RegimeReport> hit;
  for (int i = 1; i <= 4000 && !hit; ++i) {
    const auto q = scaled(s, 0.01 * i);
    const auto t = energy_terms(disc, q, k.params);
    if (I(t, k.params) < 0.0 && J(t, k.params) < k.d_hat && J(t, k.params) < (1 - kNearCriticalBand) * k.d_hat)
      hit = classify_initial(q, k);
  }
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->predicted_regime, Regime::Blowup);
  EXPECT_TRUE(hit->in_V);

  const auto zero = classify_initial(std::vector<double>(disc.modes(), 0.0), k);
  EXPECT_EQ(zero.J0, 0.0);
  EXPECT_EQ(zero.I0, 0.0);
  EXPECT_TRUE(zero.in_W);
  EXPECT_EQ(zero.predicted_regime, Regime::Indeterminate);

  EXPECT_THROW(classify_initial(std::vector<double>(10, 0.0), k), InvalidArgument);
  EXPECT_THROW(classify_initial(Field::zeros(DomainSpec::interval(2.0, 128)), k), InvalidArgument);
}

TEST(Classify, RegimeConsistentWithFlags) {
  const auto& k = constants();
  Discretization disc(kUnit, 2);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto r = classify_initial(scaled(random_smooth_coeffs(disc, seed, 3), 2.0 + 4.0 * seed), k);
    if (r.predicted_regime == Regime::Blowup) {
      EXPECT_TRUE(r.I0 < 0.0 && r.J0 < k.d_hat);
    }
    if (r.predicted_regime == Regime::GlobalDecay) {
      EXPECT_TRUE(r.I0 > 0.0 && r.J0 < k.d_hat);
    }
    if (r.predicted_regime == Regime::HighEnergyBlowup) {
      EXPECT_TRUE(r.high_energy_checks[0] && r.high_energy_checks[1] && r.high_energy_checks[2]);
    }
    if (r.J0 > 0.0 && r.J0 < k.d_hat) {
      EXPECT_TRUE(r.delta1 && r.delta2);
    }
    EXPECT_EQ(r.in_W_delta.size(), 200u);
  }
}

TEST(WellSets, InsideRadiusIsPositive) {
  const auto& k = constants();
  Discretization disc(kUnit, 2);
  for (double delta : {0.5, 1.0, 1.5}) {
    const double r = r_of_delta(delta, k);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto q = random_smooth_coeffs(disc, seed, 4);
      q = scaled(q, 0.99 * r / std::sqrt(disc.gradient_sq(q)));
      EXPECT_GT(I_delta(energy_terms(disc, q, k.params), delta, k.params), 0.0);
    }
  }
}

TEST(WellSets, NegativeNehariOutsideRadius) {
  const auto& k = constants();
  Discretization disc(kUnit, 2);
  std::size_t negatives = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto q = scaled(random_smooth_coeffs(disc, seed, 5), 0.5 * static_cast<double>(seed + 1));
    const auto t = energy_terms(disc, q, k.params);
    for (double delta : {0.5, 1.0, 1.5})
      if (I_delta(t, delta, k.params) < 0.0) {
        ++negatives;
        EXPECT_GT(std::sqrt(t.gradient_sq), r_of_delta(delta, k));
      }
  }
  EXPECT_GT(negatives, 0u);
}

TEST(WellSets, ProjectedPointsLeaveTheBall) {
  const auto& k = constants();
  const ModelParams& mp = k.params;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& dir = k.depth->pool()[i];
    for (double delta : {0.5, 1.0, 1.5}) {
      const double b = beta_star(dir.ray, mp, delta);
      EXPECT_LE(std::abs(i_on_ray(dir.ray, b, mp, delta)), 1e-10 * delta * b * b * dir.ray.G);
      EXPECT_GE(b * std::sqrt(dir.ray.G), r_of_delta(delta, k) * (1 - 1e-6));
    }
  }
}

TEST(WellSets, SignConstantBetweenRoots) {
  const auto& k = constants();
  Discretization disc(kUnit, 2);
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 60 && checked < 10; ++seed) {
    const auto q = scaled(random_smooth_coeffs(disc, seed, 6), 0.5 + 0.25 * static_cast<double>(seed));
    const auto t = energy_terms(disc, q, k.params);
    const double j = J(t, k.params);
    if (!(j > 0.0 && j < k.d_hat)) continue;
    ++checked;
    const auto [d1, d2] = delta_roots(j, k);
    const double s0 = I(t, k.params);
    for (int i = 1; i <= 20; ++i) {
      const double d = d1 + (d2 - d1) * i / 21.0;
      EXPECT_EQ(std::signbit(I_delta(t, d, k.params)), std::signbit(s0)) << "seed " << seed << " delta " << d;
    }
  }
  EXPECT_GT(checked, 3u);
}
