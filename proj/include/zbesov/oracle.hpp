#pragma once

// Slow references for the fast paths. Nothing here uses prefix sums, the
// sparse atomic field or the closed-form Lorentz sums.

#include <algorithm>
#include <cmath>
#include <vector>

#include "zbesov/constructions.hpp"
#include "zbesov/grid.hpp"
#include "zbesov/render.hpp"
#include "zbesov/smoothness.hpp"

namespace zbesov::oracle {

namespace detail {

template <int D>
std::vector<double> box_values(const GridFunction<D>& f, const CellBox<D>& box) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(box.count()));
  if constexpr (D == 1) {
    for (std::int64_t i = box.lo[0]; i <= box.hi[0]; ++i) v.push_back(f.value({i}));
  } else {
    for (std::int64_t i = box.lo[0]; i <= box.hi[0]; ++i)
      for (std::int64_t j = box.lo[1]; j <= box.hi[1]; ++j) v.push_back(f.value({i, j}));
  }
  return v;
}

// Two passes over the cells inside the domain; cells outside count as zeros.
template <int D>
double plain_mad(const GridFunction<D>& f, const CellBox<D>& box) {
  require_nondegenerate(box);
  const CellBox<D> in = intersect(box, f.domain());
  const double total = box.volume();
  double sum = 0.0;
  const auto each = [&](auto&& fn) {
    if (in.empty()) return;
    if constexpr (D == 1) {
      for (std::int64_t i = in.lo[0]; i <= in.hi[0]; ++i) fn(f.value({i}));
    } else {
      for (std::int64_t i = in.lo[0]; i <= in.hi[0]; ++i)
        for (std::int64_t j = in.lo[1]; j <= in.hi[1]; ++j) fn(f.value({i, j}));
    }
  };
  each([&](double v) { sum += v; });
  const double mu = sum / total;
  double dev = 0.0;
  each([&](double v) { dev += std::abs(v - mu); });
  dev += (total - (in.empty() ? 0.0 : in.volume())) * std::abs(mu);
  return dev / total;
}

}  // namespace detail

/// Double average of |f(x+y) - f(x+z)| over the box, by direct O(B^2) enumeration.
template <int D>
double delta_double(const GridFunction<D>& f, const Point<D>& x, double h) {
  const CellBox<D> box = point_box<D>(x, h, f.resolution());
  require_nondegenerate(box);
  const auto v = detail::box_values(f, box);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) acc += std::abs(v[i] - v[j]);
  const double n = static_cast<double>(v.size());
  return acc / (n * n);
}

struct QuadratureOptions {
  int h_points = 48;
  int k_min = default_k_min;
  int guard = default_guard;
};

/// Continuous-h seminorm ( int_0^inf ( int delta(x,h)^p dx )^(q/p) dh/h )^(1/q),
/// with the h-integral by the trapezoid rule in log h over
/// [0.6 2^-(m-guard), 0.6 2^-k_min] and the x-integral by a midpoint rule on a
/// cell-aligned lattice no coarser than h/8.
template <int D>
double seminorm_quadrature(const GridFunction<D>& f, const Params& params, const QuadratureOptions& opt = {}) {
  params.validate();
  require(opt.h_points >= 2, ErrorCode::invalid_argument, "need at least two h nodes");
  const int m = f.resolution();
  const double u_lo = std::log(0.6 * std::ldexp(1.0, -(m - opt.guard)));
  const double u_hi = std::log(0.6 * std::ldexp(1.0, -opt.k_min));
  const double du = (u_hi - u_lo) / (opt.h_points - 1);
  const CellBox<D> dom = f.domain();

  const auto layer = [&](double h) {
    const double reach = std::ldexp(h, m);
    int e = 0;
    while (std::ldexp(1.0, e + 1) <= reach / 8.0) ++e;
    const std::int64_t step = zbesov::detail::pow2(e);
    CellBox<D> span;
    for (int i = 0; i < D; ++i) {
      span.lo[i] = zbesov::detail::floor_div(dom.lo[i] - static_cast<std::int64_t>(std::ceil(reach)) - 1, step);
      span.hi[i] = zbesov::detail::floor_div(dom.hi[i] + static_cast<std::int64_t>(std::ceil(reach)) + 1, step);
    }
    const double weight = std::ldexp(static_cast<double>(std::pow(static_cast<double>(step), D)), -D * m);
    const auto at = [&](std::int64_t b) { return std::ldexp(static_cast<double>(b * step) + 0.5 * static_cast<double>(step), -m); };
    double acc = 0.0;
    if constexpr (D == 1) {
      for (std::int64_t b = span.lo[0]; b <= span.hi[0]; ++b) {
        const double d = detail::plain_mad(f, point_box<1>(Point<1>{at(b)}, h, m));
        acc += std::pow(d, params.p);
      }
    } else {
      for (std::int64_t b = span.lo[0]; b <= span.hi[0]; ++b)
        for (std::int64_t c = span.lo[1]; c <= span.hi[1]; ++c) {
          const double d = detail::plain_mad(f, point_box<2>(Point<2>{at(b), at(c)}, h, m));
          acc += std::pow(d, params.p);
        }
    }
    return std::pow(acc * weight, params.q / params.p);
  };

  double total = 0.0;
  for (int i = 0; i < opt.h_points; ++i) {
    const double w = (i == 0 || i == opt.h_points - 1) ? 0.5 : 1.0;
    total += w * layer(std::exp(u_lo + i * du));
  }
  return std::pow(total * du, 1.0 / params.q);
}

/// p^(1/q) ( int_0^inf (t lambda(t)^(1/p))^q dt/t )^(1/q) with lambda counted
/// directly from the samples at log-uniform nodes between the smallest and
/// largest nonzero |sample|. Below the smallest level lambda is constant and
/// that piece is integrated exactly.
template <int D>
double lorentz_bruteforce(const GridFunction<D>& f, double p, double q, int t_points = 10000) {
  require(t_points >= 2, ErrorCode::invalid_argument, "need at least two t nodes");
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  for (double v : f.samples())
    if (v != 0.0) {
      tmin = std::min(tmin, std::abs(v));
      tmax = std::max(tmax, std::abs(v));
    }
  if (tmax == 0.0) return 0.0;
  const double cell = f.cell_volume();
  const auto lambda = [&](double t) {
    std::size_t n = 0;
    for (double v : f.samples())
      if (std::abs(v) >= t) ++n;
    return static_cast<double>(n) * cell;
  };
  double acc = std::pow(lambda(tmin), q / p) * std::pow(tmin, q) / q;
  if (tmax > tmin) {
    const double a = std::log(tmin), b = std::log(tmax);
    double prev = tmin;
    for (int i = 1; i < t_points; ++i) {
      const double t = (i == t_points - 1) ? tmax : std::exp(a + (b - a) * i / (t_points - 1));
      const double mid = std::sqrt(prev * t);
      acc += std::pow(lambda(mid), q / p) * (std::pow(t, q) - std::pow(prev, q)) / q;
      prev = t;
    }
  }
  return std::pow(p * acc, 1.0 / q);
}

/// Renders the first `count` blocks on one shared grid and evaluates the
/// seminorm there directly.
template <int D>
double dense_multiblock_seminorm(const MultiBlock<D>& mb, std::size_t count, const Params& params, int m, int k_min,
                                 int k_max, std::int64_t max_cells = default_cell_budget) {
  const auto f = mb.combined(count);
  const auto grid = render(f, m, RenderOptions{default_guard, max_cells});
  const auto prof = scale_profile(grid, k_min, k_max, params);
  return discrete_seminorm(prof, params);
}

}  // namespace zbesov::oracle
