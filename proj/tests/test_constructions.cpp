#include <gtest/gtest.h>

#include <set>

#include "zbesov/lorentz.hpp"
#include "zbesov/render.hpp"
#include "zbesov/smoothness.hpp"

using namespace zbesov;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::io_error;
}

}  // namespace

TEST(SequenceAN, CanonicalSmallCase) {
  const auto a = sequence_AN(2, 1, 2.0);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_DOUBLE_EQ(a[0], 1.0);
  EXPECT_DOUBLE_EQ(a[1], 1.0);
  EXPECT_DOUBLE_EQ(a[2], std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(a[3], std::sqrt(0.5));
}

TEST(SequenceAN, PNormCountsBlocks) {
  // Block 0 holds 2^d entries, each later block 2^d - 1 "new" units; total (2^d - 1) N + 1.
  for (int d : {1, 2})
    for (int N : {1, 3, 6}) {
      const double p = 2.5;
      double s = 0.0, sup = 0.0;
      for (double v : sequence_AN(N, d, p)) {
        s += std::pow(v, p);
        sup = std::max(sup, v);
      }
      EXPECT_NEAR(s, ((1 << d) - 1) * N + 1, 1e-9) << "d=" << d << " N=" << N;
      EXPECT_EQ(sup, 1.0);
    }
}

TEST(BuildF, CountMeasureAndCoefficients) {
  const Params pr{2.0, 3.0, 1};
  const auto f = build_f<1>(3, 7, pr);
  ASSERT_EQ(f.atoms.size(), 8u);
  double measure = 0.0;
  const auto a = sequence_AN(3, 1, 2.0);
  for (std::size_t j = 0; j < f.atoms.size(); ++j) {
    measure += f.atoms[j].cube.volume();
    EXPECT_DOUBLE_EQ(f.atoms[j].coefficient, std::exp2(7.0 / 2.0) * a[j]);
    EXPECT_EQ(f.atoms[j].cube.k, 7);
  }
  EXPECT_DOUBLE_EQ(measure, 8.0 * std::exp2(-7.0));
  EXPECT_TRUE(atoms_disjoint(f));
}

TEST(BuildF, AtomsSitInsideTheirCoarseCubes) {
  const auto f = build_f<2>(2, 6, Params{2.0, 2.0, 2});
  EXPECT_EQ(f.atoms.size(), 16u);
  std::set<std::array<std::int64_t, 2>> parents;
  for (const auto& at : f.atoms) parents.insert({at.cube.index[0] >> 4, at.cube.index[1] >> 4});
  EXPECT_EQ(parents.size(), 16u);
}

TEST(BuildF, RenderedPeakMatchesCoefficient) {
  const auto f = build_f<1>(2, 4, Params{2.0, 2.0, 1});
  const auto g = render(f, 8);
  double peak = 0.0, pat_peak = 0.0;
  for (double v : g.samples()) peak = std::max(peak, std::abs(v));
  for (double v : bump_pattern<1>(16)) pat_peak = std::max(pat_peak, std::abs(v));
  EXPECT_NEAR(peak, 4.0 * pat_peak, 1e-12);
}

TEST(BuildF, LpNormTracksSequence) {
  const Params pr{3.0, 1.5, 1};
  const auto bs = bump_stats<1>(3.0, 12);
  for (int N : {2, 5, 8}) {
    const auto f = build_f<1>(N, 2 * N + 4, pr);
    double seq = 0.0;
    for (double v : sequence_AN(N, 1, 3.0)) seq += std::pow(v, 3.0);
    EXPECT_NEAR(function_stats(f, bs).lp, std::cbrt(seq) * bs.lp, 1e-12);
  }
}

TEST(BuildF, InvalidParameters) {
  EXPECT_EQ(code_of([] { build_f<1>(3, 3, Params{2.0, 2.0, 1}); }), ErrorCode::invalid_parameters);
  EXPECT_EQ(code_of([] { build_f<1>(2, 6, Params{0.5, 2.0, 1}); }), ErrorCode::invalid_parameters);
  EXPECT_EQ(code_of([] { build_f<2>(2, 6, Params{2.0, 2.0, 1}); }), ErrorCode::invalid_parameters);
}

TEST(BuildBlock, UnitCoefficientsAndUnitMeasure) {
  for (int M : {2, 4}) {
    const auto b = build_block<2>(M, Params{1.5, 3.0, 2});
    EXPECT_EQ(b.atoms.size(), std::size_t{1} << (2 * M));
    double measure = 0.0;
    for (const auto& a : b.atoms) {
      EXPECT_EQ(a.coefficient, 1.0);
      EXPECT_EQ(a.cube.k, M);
      measure += a.cube.volume();
    }
    EXPECT_EQ(measure, 1.0);
    EXPECT_TRUE(atoms_disjoint(b));
  }
}

TEST(Multiblock, SingleBlockSitsAtZero) {
  const auto mb = build_multiblock<1>(1, 3, Params{1.5, 3.0, 1});
  ASSERT_EQ(mb.blocks.size(), 1u);
  EXPECT_EQ(mb.blocks[0].offset, 0);
}

TEST(Multiblock, GapsAndAlignment) {
  const auto mb = build_multiblock<1>(4, 3, Params{1.5, 3.0, 1}, -8);
  EXPECT_TRUE(atoms_disjoint(mb.combined(4)));
  for (std::size_t t = 1; t < mb.blocks.size(); ++t) {
    EXPECT_EQ(mb.blocks[t].offset % 256, 0);
    EXPECT_GE(mb.blocks[t].offset - (mb.blocks[t - 1].offset + support_end(mb.blocks[t - 1].block)), 512);
  }
}

TEST(Multiblock, BudgetExceeded) {
  EXPECT_EQ(code_of([] { build_multiblock<2>(8, 3, Params{1.5, 3.0, 2}); }), ErrorCode::budget_exceeded);
}

TEST(Transforms, DilationScalesCoefficientsAndGenerations) {
  const auto f = build_f<1>(2, 6, Params{2.0, 2.0, 1});
  const auto g = dilate(f, 3, 2.0);
  for (std::size_t i = 0; i < f.atoms.size(); ++i) {
    EXPECT_EQ(g.atoms[i].cube.k, f.atoms[i].cube.k - 3);
    EXPECT_DOUBLE_EQ(g.atoms[i].coefficient, f.atoms[i].coefficient * std::exp2(-1.5));
  }
}

TEST(Transforms, OverlappingAtomsDetected) {
  AtomicFunction<1> f;
  f.atoms = {{DyadicCube<1>{2, {1}}, 1.0}, {DyadicCube<1>{4, {5}}, 1.0}};
  EXPECT_FALSE(atoms_disjoint(f));
  EXPECT_EQ(code_of([&] { require_disjoint(f); }), ErrorCode::atoms_not_disjoint);
}

TEST(RandomSmooth, DeterministicPerSeedAndIndex) {
  const auto a = random_smooth<1>(5, 2, 8), b = random_smooth<1>(5, 2, 8), c = random_smooth<1>(5, 3, 8);
  EXPECT_TRUE(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
  EXPECT_FALSE(std::equal(a.samples().begin(), a.samples().end(), c.samples().begin()));
}

TEST(Render, EmptyAtomListIsZero) {
  const auto g = render(AtomicFunction<1>{}, 6);
  EXPECT_EQ(g.size(), 64u);
  for (double v : g.samples()) EXPECT_EQ(v, 0.0);
}

TEST(Render, SingleAtomHasZeroIntegral) {
  AtomicFunction<1> f;
  f.atoms.push_back({DyadicCube<1>{0, {0}}, 1.0});
  const auto g = render(f, 10);
  ASSERT_EQ(g.size(), 1024u);
  double s = 0.0;
  for (double v : g.samples()) s += v;
  EXPECT_NEAR(s * std::ldexp(1.0, -10), 0.0, 1e-3);
}

TEST(Render, GuardAndBudget) {
  const auto f = build_f<1>(2, 6, Params{2.0, 2.0, 1});
  EXPECT_EQ(code_of([&] { render(f, 9); }), ErrorCode::resolution_too_coarse);
  EXPECT_EQ(code_of([&] { render(f, 12, RenderOptions{4, 1000}); }), ErrorCode::overflow_guard);
}
