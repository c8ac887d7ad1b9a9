#include <gtest/gtest.h>

#include <random>

#include "zbesov/atomic_field.hpp"
#include "zbesov/smoothness.hpp"

using namespace zbesov;

namespace {

GridFunction<1> constant(int m, double c) {
  return GridFunction<1>(m, {0}, {std::int64_t{1} << m}, std::vector<double>(std::size_t{1} << m, c));
}

GridFunction<1> unit_bump(int m) {
  AtomicFunction<1> f;
  f.atoms.push_back({DyadicCube<1>{0, {0}}, 1.0});
  return render(f, m);
}

}  // namespace

TEST(Delta, ConstantIsZero) { EXPECT_EQ(delta(constant(10, 2.0), Point<1>{0.3}, 0.1), 0.0); }

TEST(Delta, LinearInterior) {
  const auto f = GridFunction<1>::sample(12, {0}, {4096}, [](const Point<1>& x) { return x[0]; });
  for (double h : {0.01, 0.1, 0.2}) EXPECT_NEAR(delta(f, Point<1>{0.5}, h), h / 2, 1e-3);
}

TEST(Delta, BelowResolutionGuard) {
  try {
    delta(constant(8, 1.0), Point<1>{0.5}, std::ldexp(1.0, -7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_box);
  }
}

TEST(ScaleLayer, ConstantIsZeroOnlyInsideTheDomain) {
  // A nonzero constant on a bounded domain has a jump at the boundary; the
  // zero constant is the only one with a vanishing profile everywhere.
  const auto prof = scale_profile(constant(8, 0.0), -3, 4, Params{2.0, 2.0, 1});
  for (double l : prof.layers) EXPECT_EQ(l, 0.0);
}

TEST(ScaleLayer, InteriorOfConstantVanishesExactly) {
  const auto f = constant(8, 3.0);
  for (int k = 3; k <= 4; ++k)
    EXPECT_EQ(f.box_mad(evaluation_box(DyadicCube<1>{k, {3}}, 8)), 0.0);
}

TEST(ScaleLayer, DegenerateScale) {
  try {
    scale_layer(unit_bump(8), 5, Params{2.0, 2.0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_scale);
  }
}

TEST(ScaleLayer, BumpFineScalesDecayLikeTwoToMinusK) {
  const Params pr{2.0, 2.0, 1};
  const auto prof = scale_profile(unit_bump(14), 0, 10, pr);
  double hi = 0.0;
  for (int k = 0; k <= 10; ++k) hi = std::max(hi, prof.at(k) * std::ldexp(1.0, k));
  for (int k = 4; k <= 10; ++k) {
    const double c = prof.at(k) * std::ldexp(1.0, k);
    EXPECT_LE(c, hi);
    EXPECT_GT(c, 0.5 * hi);  // the rate is sharp, not just an upper bound
  }
}

TEST(ScaleProfile, TranslationByDyadicOffsetIsExact) {
  const Params pr{1.5, 3.0, 1};
  const auto b = build_block<1>(2, pr);
  const auto p0 = scale_profile(AtomicField<1>(b, 7), -4, 3, pr);
  const auto p1 = scale_profile(AtomicField<1>(translate(b, 48), 7), -4, 3, pr);
  for (int k = -4; k <= 3; ++k) EXPECT_DOUBLE_EQ(p0.at(k), p1.at(k));
}

TEST(ScaleProfile, DilationShiftsProfile) {
  const Params pr{3.0, 1.5, 1};
  const auto f = build_f<1>(3, 8, pr);
  const int s = 3;
  const auto g = dilate(f, s, pr.p);
  const auto pf = scale_profile(AtomicField<1>(f, 14), -2, 10, pr);
  const auto pg = scale_profile(AtomicField<1>(g, 11), -5, 7, pr);
  for (int k = -2; k <= 10; ++k) EXPECT_NEAR(pg.at(k - s), pf.at(k), 1e-6 * pf.at(k));
}

TEST(ScaleProfile, FineLayersGrowTowardAtomScale) {
  // For N < k < n the layer grows like 2^((p-1)/p (k - n)).
  const Params pr{3.0, 1.5, 1};
  const int N = 4, n = 14;
  const auto prof = scale_profile(AtomicField<1>(build_f<1>(N, n, pr), n + 6), N, n, pr);
  double lo = INFINITY, hi = 0.0;
  for (int k = N + 1; k <= n - 1; ++k) {
    const double c = prof.at(k) / std::exp2((pr.p - 1) / pr.p * (k - n));
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  EXPECT_LT(hi / lo, 2.0);
}

TEST(DiscreteSeminorm, ZeroAndSingleLayer) {
  const Params pr{2.0, 3.0, 1};
  EXPECT_EQ(discrete_seminorm(ScaleProfile::zeros(-3, 3), pr), 0.0);
  auto p = ScaleProfile::zeros(-3, 3);
  p[1] = 0.7;
  EXPECT_DOUBLE_EQ(discrete_seminorm(p, pr), 0.7);
}

TEST(DiscreteSeminorm, TailTooLargeIsRaised) {
  const Params pr{2.0, 2.0, 1};
  const auto g = unit_bump(10);
  const auto prof = scale_profile(g, 0, 1, pr);  // far too narrow a range
  const auto st = function_stats(g, pr.p);
  const auto rep = discrete_seminorm(prof, pr, st, 0.05, false);
  EXPECT_TRUE(rep.flagged);
  try {
    discrete_seminorm(prof, pr, st);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::tail_too_large);
  }
}

TEST(DiscreteSeminorm, TailBoundsHoldForTheBump) {
  // The measured layers just outside a range never exceed the bounds.
  const Params pr{2.0, 2.0, 1};
  const auto g = unit_bump(14);
  const auto st = function_stats(g, pr.p);
  const auto prof = scale_profile(g, -8, 10, pr);
  for (int k = -8; k <= -4; ++k)
    EXPECT_LE(std::pow(prof.at(k), pr.q), tail_estimate(st, k, pr, TailSide::coarse));
  for (int k = 4; k <= 10; ++k) EXPECT_LE(std::pow(prof.at(k), pr.q), tail_estimate(st, k, pr, TailSide::fine));
}

TEST(TailEstimate, GeometricRates) {
  const Params pr{3.0, 2.0, 2};
  FunctionStats s;
  s.l1 = 1.0;
  s.grad_lp = 2.0;
  s.grad_sup = 5.0;
  s.diameter = 1.0;
  const double r = std::exp2(pr.d * pr.q * (pr.p - 1) / pr.p);
  EXPECT_NEAR(tail_estimate(s, -10, pr, TailSide::coarse) / tail_estimate(s, -11, pr, TailSide::coarse), r, 1e-9);
  EXPECT_NEAR(tail_estimate(s, 21, pr, TailSide::fine) / tail_estimate(s, 20, pr, TailSide::fine), std::exp2(-pr.q),
              1e-9);
}

TEST(TailEstimate, ConstantHasNoFineTail) {
  FunctionStats s;
  s.l1 = 1.0;
  s.grad_lp = 0.0;
  s.grad_sup = 0.0;
  s.diameter = 1.0;
  EXPECT_EQ(tail_estimate(s, 5, Params{2.0, 2.0, 1}, TailSide::fine), 0.0);
}

TEST(MaximalModulus, ConstantZero) {
  const auto mm = maximal_modulus(constant(8, 0.0), -2, 4);
  for (double v : mm.samples()) EXPECT_EQ(v, 0.0);
}

TEST(MaximalModulus, LinearInterior) {
  // f(x) = x on [0,4); at x = 2 the largest box (k = 1) still lies inside.
  const auto f = GridFunction<1>::sample(8, {0}, {1024}, [](const Point<1>& x) { return x[0]; });
  const auto mm = maximal_modulus(f, 1, 4);
  EXPECT_NEAR(mm.value({512}), 0.15, std::ldexp(1.0, -8));
}

TEST(MaximalModulus, DominatesEachScaleAndBoundedByTwiceSup) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> s(256);
  for (auto& v : s) v = u(rng);
  const GridFunction<1> f(8, {0}, {256}, s);
  const auto mm = maximal_modulus(f, -1, 4);
  for (std::int64_t j = 0; j < 256; j += 7) {
    for (int k = -1; k <= 4; ++k) EXPECT_GE(mm.value({j}), f.box_mad(centered_box<1>({j}, 8, k)));
    EXPECT_LE(mm.value({j}), 2.0);
  }
}

TEST(FunctionStats, GridMatchesAnalyticForBump) {
  const auto g = unit_bump(14);
  const auto a = function_stats(g, 2.0);
  AtomicFunction<1> f;
  f.atoms.push_back({DyadicCube<1>{0, {0}}, 1.0});
  const auto b = function_stats(f, bump_stats<1>(2.0, 12));
  EXPECT_NEAR(a.l1 / b.l1, 1.0, 1e-4);
  EXPECT_NEAR(a.lp / b.lp, 1.0, 1e-4);
  EXPECT_NEAR(a.grad_lp / b.grad_lp, 1.0, 1e-2);
}
