#pragma once

// Oracle sweeps: fast paths against brute-force references on random inputs.

#include <random>

#include "zbesov/analysis.hpp"
#include "zbesov/oracle.hpp"

namespace zbesov {

struct CheckResult {
  std::string name;
  double observed = 0.0;   // worst deviation seen
  double tolerance = 0.0;  // pass iff observed <= tolerance
  std::size_t cases = 0;
  bool pass() const { return observed <= tolerance; }
};

namespace detail {

template <int D>
GridFunction<D> random_grid(std::mt19937_64& rng, int m, double zero_share = 0.25) {
  IVec<D> origin{}, extent;
  extent.fill(pow2(m));
  std::size_t n = 1;
  for (auto e : extent) n *= static_cast<std::size_t>(e);
  std::vector<double> s(n);
  for (auto& v : s) v = uniform01(rng) < zero_share ? 0.0 : 2.0 * uniform01(rng) - 1.0;
  return GridFunction<D>(m, origin, extent, std::move(s));
}

}  // namespace detail

/// delta <= delta_double <= 2 delta on random (f, x, h); observed is the worst
/// violation beyond the 1e-9 ||f||_inf slack (0 when none).
inline CheckResult sandwich_check(std::uint64_t seed, int probes = 100) {
  std::mt19937_64 rng(seed);
  CheckResult r{"sandwich", 0.0, 0.0, 0};
  const auto probe = [&]<int D>(const GridFunction<D>& f) {
    double sup = 0.0;
    for (double v : f.samples()) sup = std::max(sup, std::abs(v));
    const double h_min = std::ldexp(1.0, -f.resolution() + 2);
    const double h = h_min * std::exp2(uniform01(rng) * std::log2(0.25 / h_min));
    Point<D> x;
    for (int i = 0; i < D; ++i) x[i] = -0.1 + 1.2 * uniform01(rng);
    const double d1 = delta(f, x, h);
    const double d2 = oracle::delta_double(f, x, h);
    const double slack = 1e-9 * sup;
    r.observed = std::max({r.observed, d1 - d2 - slack, d2 - 2.0 * d1 - slack});
    ++r.cases;
  };
  for (int i = 0; i < probes; ++i) {
    if (i % 2 == 0) probe(detail::random_grid<1>(rng, 6 + static_cast<int>(uniform01(rng) * 3)));
    else if (i % 4 == 1) probe(detail::random_grid<2>(rng, 5 + static_cast<int>(uniform01(rng) * 2)));
    else probe(random_smooth<2>(seed, i, 6));
  }
  r.observed = std::max(r.observed, 0.0);
  return r;
}

/// Closed-form Lorentz norm against the t-integration oracle; relative error.
inline CheckResult lorentz_check(std::uint64_t seed, int count = 50, int t_points = 10000) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ull);
  CheckResult r{"lorentz closed form vs t-integration", 0.0, 1e-4, 0};
  for (int i = 0; i < count; ++i) {
    const double p = 1.0 + 3.0 * uniform01(rng), q = 1.0 + 3.0 * uniform01(rng);
    const double err = [&] {
      if (i % 3 == 2) {
        const auto g = detail::random_grid<2>(rng, 4);
        return std::abs(lorentz_norm(rearrangement(g), p, q) / oracle::lorentz_bruteforce(g, p, q, t_points) - 1.0);
      }
      const auto g = detail::random_grid<1>(rng, 5 + i % 4);
      return std::abs(lorentz_norm(rearrangement(g), p, q) / oracle::lorentz_bruteforce(g, p, q, t_points) - 1.0);
    }();
    r.observed = std::max(r.observed, err);
    ++r.cases;
  }
  return r;
}

/// L_{p,p} against the plain L_p norm on the same random functions.
inline CheckResult lorentz_diagonal_check(std::uint64_t seed, int count = 50) {
  std::mt19937_64 rng(seed ^ 0x27d4eb2full);
  CheckResult r{"lorentz q = p vs L_p", 0.0, 1e-10, 0};
  for (int i = 0; i < count; ++i) {
    const double p = 1.0 + 3.0 * uniform01(rng);
    const auto g = detail::random_grid<1>(rng, 5 + i % 4);
    r.observed = std::max(r.observed, std::abs(lorentz_norm(rearrangement(g), p, p) / lp_norm(g, p) - 1.0));
    ++r.cases;
  }
  return r;
}

/// Sparse atomic field against the dense rendering, layer by layer.
inline CheckResult sparse_dense_check() {
  CheckResult r{"sparse field vs dense grid", 0.0, 1e-9, 0};
  const auto cmp = [&]<int D>(const AtomicFunction<D>& f, const Params& pr, int m) {
    const auto dense = scale_profile(render(f, m), -4, m - default_guard, pr);
    const auto sparse = scale_profile(AtomicField<D>(f, m), -4, m - default_guard, pr);
    for (int k = dense.k_min; k <= dense.k_max; ++k) {
      const double ref = std::max(std::abs(dense.at(k)), 1e-300);
      r.observed = std::max(r.observed, std::abs(sparse.at(k) - dense.at(k)) / ref);
      ++r.cases;
    }
  };
  cmp(build_f<1>(3, 8, Params{3.0, 1.5, 1}), Params{3.0, 1.5, 1}, 13);
  cmp(build_block<1>(3, Params{1.5, 3.0, 1}), Params{1.5, 3.0, 1}, 8);
  cmp(build_f<2>(2, 5, Params{2.0, 2.0, 2}), Params{2.0, 2.0, 2}, 9);
  return r;
}

/// Gap-separated p-sum of block profiles against one dense shared grid.
inline CheckResult combination_check(const Params& params = {1.5, 3.0, 1}, int T = 2, int delta_scale = 3,
                                     int k_min = default_k_min) {
  CheckResult r{"combined profiles vs dense shared grid", 0.0, 0.05, 1};
  const auto mb = build_multiblock<1>(T, delta_scale, params, k_min);
  const int m = T * delta_scale + default_guard;
  const int k_max = m - default_guard;
  std::vector<ScaleProfile> ps;
  for (const auto& b : mb.blocks) ps.push_back(scale_profile(AtomicField<1>(b.block, m), k_min, k_max, params));
  const double sparse = discrete_seminorm(combine_profiles(ps, params, mb.certificate), params);
  const double dense = oracle::dense_multiblock_seminorm(mb, static_cast<std::size_t>(T), params, m, k_min, k_max);
  r.observed = std::abs(sparse / dense - 1.0);
  return r;
}

inline StudyReport validation_report(std::uint64_t seed) {
  StudyReport rep;
  rep.study = "validate";
  rep.params = {1.5, 3.0, 1};
  rep.config = {{"seed", static_cast<double>(seed)}};
  rep.columns = {"observed", "tolerance", "cases"};
  for (const auto& c : {sandwich_check(seed), lorentz_check(seed), lorentz_diagonal_check(seed), sparse_dense_check(),
                        combination_check()}) {
    rep.labels.push_back(c.name);
    rep.rows.push_back({c.observed, c.tolerance, static_cast<double>(c.cases)});
    rep.verdicts.push_back({c.name, c.pass(), "observed " + detail::fmt(c.observed) + " <= " + detail::fmt(c.tolerance)});
  }
  return rep;
}

}  // namespace zbesov
