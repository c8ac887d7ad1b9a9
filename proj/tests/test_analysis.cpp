#include <gtest/gtest.h>

#include <random>

#include "zbesov/analysis.hpp"

using namespace zbesov;

TEST(FitSlope, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
  const auto f = fit_slope(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.max_residual, 0.0, 1e-14);
}

TEST(FitSlope, TwoPointsInterpolate) {
  const std::vector<double> x{1.0, 3.0}, y{-2.0, 5.0};
  const auto f = fit_slope(x, y);
  EXPECT_NEAR(f.slope, 3.5, 1e-14);
  EXPECT_NEAR(f.max_residual, 0.0, 1e-14);
}

TEST(FitSlope, OutlierResidual) {
  // The largest residual sits at the outlier and equals its deviation from the
  // clean line scaled by one minus its leverage.
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y{1, 3, 5, 7, 9};
  const double e = 0.8;
  y[1] += e;
  const auto f = fit_slope(x, y);
  const double leverage = 1.0 / 5 + (1 - 2.0) * (1 - 2.0) / 10.0;
  EXPECT_NEAR(f.max_residual, e * (1 - leverage), 1e-12);
  EXPECT_NEAR(std::abs(y[1] - (f.slope * 1 + f.intercept)), f.max_residual, 1e-12);
}

TEST(FitSlope, DegenerateInput) {
  const std::vector<double> one{1.0}, two{2.0, 2.0}, ys{1.0, 2.0};
  try {
    fit_slope(one, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_input);
  }
  EXPECT_THROW(fit_slope(two, ys), Error);
}

TEST(CombineProfiles, IdentityAndPSum) {
  const Params pr{1.5, 3.0, 1};
  auto a = ScaleProfile::zeros(-2, 2);
  for (int k = -2; k <= 2; ++k) a[k] = 0.1 * (k + 3);
  const GapCertificate cert{-2, 8, {0}};
  const auto one = combine_profiles({a}, pr, cert);
  const auto two = combine_profiles({a, a}, pr, cert);
  for (int k = -2; k <= 2; ++k) {
    EXPECT_NEAR(one.at(k), a.at(k), 1e-15);
    EXPECT_NEAR(two.at(k), a.at(k) * std::pow(2.0, 1 / pr.p), 1e-14);
  }
}

TEST(CombineProfiles, CertificateRequired) {
  try {
    combine_profiles({ScaleProfile::zeros(0, 1)}, Params{1.5, 3.0, 1}, std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::gap_certificate_missing);
  }
}

TEST(Concentration, SyntheticUnitRate) {
  // Rates are measured on L^q in bits per generation.
  const Params pr{1.5, 3.0, 1};
  const int M = 6;
  auto p = ScaleProfile::zeros(-4, 16);
  for (int l = -4; l <= 16; ++l) p[l] = std::exp2(-std::abs(l - M) / pr.q);
  const auto c = concentration_check(p, M, pr);
  EXPECT_EQ(c.peak, M);
  EXPECT_NEAR(c.left_rate, 1.0, 1e-12);
  EXPECT_NEAR(c.right_rate, 1.0, 1e-12);
  EXPECT_TRUE(c.pass);
}

TEST(Concentration, SingleBlockPeaksAtItsScale) {
  const Params pr{1.5, 3.0, 1};
  const auto rep = concentration_study<1>(pr, {5});
  const auto& c = rep.concentration.at(0);
  EXPECT_GE(c.peak, 4);
  EXPECT_LE(c.peak, 6);
  EXPECT_GT(c.left_rate, 0.0);
  EXPECT_GT(c.right_rate, 0.0);
}

TEST(Concentration, RatesIndependentOfScale) {
  const auto rep = concentration_study<1>(Params{1.5, 3.0, 1}, {5, 8});
  EXPECT_NEAR(rep.concentration[0].nu / rep.concentration[1].nu, 1.0, 0.3);
  EXPECT_TRUE(rep.pass());
}

TEST(AlmostDisjoint, DisjointSupportsAreAdditive) {
  const std::vector<double> a{1, 2, 0, 0}, b{0, 0, 3, 0.5};
  const auto r = almost_disjoint_check(a, b, 2.5, {0, 1}, {2, 3});
  EXPECT_NEAR(r.epsilon_observed, 0.0, 1e-12);
  EXPECT_EQ(r.delta_achieved, 0.0);
}

TEST(AlmostDisjoint, IdenticalSequences) {
  const std::vector<double> a{1.0, 0.5, 0.25};
  for (double q : {1.0, 2.0, 3.0})
    EXPECT_NEAR(almost_disjoint_check(a, a, q, {0}, {1}).epsilon_observed, std::pow(2.0, q) / 2 - 1, 1e-12);
}

TEST(AlmostDisjoint, OverlappingIndexSets) {
  const std::vector<double> a{1.0, 1.0};
  try {
    almost_disjoint_check(a, a, 2.0, {0, 1}, {1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::index_sets_overlap);
  }
}

TEST(AlmostDisjoint, EpsilonShrinksWithLeakage) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  const int n = 40;
  std::vector<std::size_t> I, J;
  for (int i = 0; i < n / 2; ++i) I.push_back(i);
  for (int i = n / 2; i < n; ++i) J.push_back(i);
  double prev = INFINITY;
  for (double leak : {0.1, 0.01, 0.001}) {
    std::vector<double> a(n, 0.0), b(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double base = u(rng);
      a[i] = i < n / 2 ? base : leak * base;
      b[i] = i >= n / 2 ? base : leak * base;
    }
    const auto r = almost_disjoint_check(a, b, 2.0, I, J);
    EXPECT_LT(r.epsilon_observed, prev);
    prev = r.epsilon_observed;
  }
}

TEST(StudyQlp, SmallRunShapeAndMonotonicity) {
  const auto rep = study_qlp<1>(Params{3.0, 1.5, 1}, {2, 3, 4});
  ASSERT_EQ(rep.rows.size(), 3u);
  const auto R = rep.column("ratio");
  EXPECT_LT(R[0], R[1]);
  EXPECT_LT(R[1], R[2]);
  for (const auto& t : rep.tails) EXPECT_FALSE(t.flagged);
  EXPECT_EQ(rep.slopes.size(), 1u);
}

TEST(StudyQlp, SingleScaleRatioIsOrderOne) {
  const auto rep = study_qlp<1>(Params{3.0, 1.5, 1}, {1, 2});
  EXPECT_GT(rep.column(0, "ratio"), 0.5);
  EXPECT_LT(rep.column(0, "ratio"), 2.0);
}

TEST(StudyQlp, ParameterDomain) {
  try {
    study_qlp<1>(Params{2.0, 3.0, 1}, {2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parameter_domain);
  }
}

TEST(StudyRatios, InvariantUnderRescaling) {
  const Params pr{3.0, 1.5, 1};
  auto f = build_f<1>(3, 10, pr);
  auto g = f;
  for (auto& a : g.atoms) a.coefficient *= 7.25;
  const auto phi = bump_distribution<1>();
  const auto ratio = [&](const AtomicFunction<1>& h) {
    const auto prof = scale_profile(AtomicField<1>(h, 16), -8, 12, pr);
    return atomic_lorentz_norm(h, phi, pr.p, pr.q) / discrete_seminorm(prof, pr);
  };
  EXPECT_NEAR(ratio(g) / ratio(f), 1.0, 1e-9);
}

TEST(StudyQgp, SingleBlockIsIdentity) {
  const Params pr{1.5, 3.0, 1};
  const auto rep = study_qgp<1>(pr, {1, 2}, 3);
  const auto& single = rep.profiles.at("block_M3");
  const auto& t1 = rep.profiles.at("T1");
  for (int k = single.k_min; k <= single.k_max; ++k) EXPECT_NEAR(t1.at(k), single.at(k), 1e-15);
}

TEST(StudyQgp, LorentzScalesExactlyForEqualBlocks) {
  const Params pr{1.5, 3.0, 1};
  const auto rep = study_qgp<1>(pr, {1, 2, 3}, 2);
  const auto L = rep.column("lorentz");
  for (std::size_t i = 0; i < L.size(); ++i)
    EXPECT_NEAR(L[i] / L[0], std::pow(static_cast<double>(i + 1), 1 / pr.p), 1e-12);
}

TEST(StudyQgp, ParameterDomain) {
  EXPECT_THROW(study_qgp<1>(Params{3.0, 1.5, 1}, {1, 2}, 3), Error);
  EXPECT_THROW(study_qgp<1>(Params{1.0, 3.0, 1}, {1, 2}, 3), Error);
}

TEST(StudyPp, SmallSuite) {
  PpOptions o;
  o.N_list = {2, 3};
  o.random_count = 2;
  o.dense_resolution = 10;
  const auto rep = study_pp<1>(Params{2.0, 2.0, 1}, o);
  EXPECT_EQ(rep.rows.size(), 5u);
  EXPECT_EQ(rep.labels.front(), "bump");
  EXPECT_TRUE(rep.pass());
}

TEST(StudyPp, ParameterDomain) {
  EXPECT_THROW(study_pp<1>(Params{2.0, 3.0, 1}), Error);
}
