#pragma once

// The reference bump: a smooth, odd-in-x1, zero-integral function supported in
// the centered unit cube [-1/2, 1/2]^d.

#include <array>
#include <cmath>
#include <numbers>

#include "zbesov/grid.hpp"

namespace zbesov {

namespace detail {

// exp(-1 / (1 - (2y)^2)) on |y| < 1/2.
inline double cutoff(double y) {
  const double s = 1.0 - 4.0 * y * y;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

inline double cutoff_derivative(double y) {
  const double s = 1.0 - 4.0 * y * y;
  return s > 0.0 ? std::exp(-1.0 / s) * (-8.0 * y / (s * s)) : 0.0;
}

}  // namespace detail

/// phi(y) = sin(2 pi y_1) * prod_j exp(-1 / (1 - (2 y_j)^2)).
template <int D>
double bump(const Point<D>& y) {
  double v = std::sin(2.0 * std::numbers::pi * y[0]);
  for (int i = 0; i < D; ++i) {
    if (!(std::abs(y[i]) < 0.5)) return 0.0;
    v *= detail::cutoff(y[i]);
  }
  return v;
}

template <int D>
std::array<double, D> bump_gradient(const Point<D>& y) {
  std::array<double, D> g{};
  for (int i = 0; i < D; ++i)
    if (!(std::abs(y[i]) < 0.5)) return g;
  const double s = std::sin(2.0 * std::numbers::pi * y[0]);
  const double c = 2.0 * std::numbers::pi * std::cos(2.0 * std::numbers::pi * y[0]);
  std::array<double, D> e, de;
  for (int i = 0; i < D; ++i) {
    e[i] = detail::cutoff(y[i]);
    de[i] = detail::cutoff_derivative(y[i]);
  }
  g[0] = c * e[0] + s * de[0];
  for (int i = 1; i < D; ++i) g[i] = s * e[0] * de[i];
  for (int i = 1; i < D; ++i) g[0] *= e[i];
  for (int i = 1; i < D; ++i)
    for (int j = 1; j < D; ++j)
      if (j != i) g[i] *= e[j];
  return g;
}

/// Norms of the reference bump measured by midpoint quadrature on the unit cube.
struct BumpStats {
  double l1 = 0.0;
  double lp = 0.0;
  double sup = 0.0;
  double grad_sup = 0.0;
  double grad_lp = 0.0;
  double p = 1.0;
  int resolution = 0;
};

template <int D>
BumpStats bump_stats(double p, int m) {
  BumpStats st;
  st.p = p;
  st.resolution = m;
  const std::int64_t n = detail::pow2(m);
  const double vol = std::ldexp(1.0, -D * m);
  double l1 = 0, lp = 0, gp = 0;
  const auto visit = [&](const Point<D>& y) {
    const double v = bump<D>(y);
    const auto g = bump_gradient<D>(y);
    double gn = 0;
    for (double gi : g) gn += gi * gi;
    gn = std::sqrt(gn);
    l1 += std::abs(v);
    lp += std::pow(std::abs(v), p);
    gp += std::pow(gn, p);
    st.sup = std::max(st.sup, std::abs(v));
    st.grad_sup = std::max(st.grad_sup, gn);
  };
  const auto coord = [&](std::int64_t i) { return std::ldexp(static_cast<double>(i) + 0.5, -m) - 0.5; };
  if constexpr (D == 1) {
    for (std::int64_t i = 0; i < n; ++i) visit(Point<1>{coord(i)});
  } else {
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j) visit(Point<2>{coord(i), coord(j)});
  }
  st.l1 = l1 * vol;
  st.lp = std::pow(lp * vol, 1.0 / p);
  st.grad_lp = std::pow(gp * vol, 1.0 / p);
  return st;
}

/// Reference resolution for bump-derived constants: 12 in one dimension, 10 in two.
template <int D>
constexpr int reference_resolution() {
  return D == 1 ? 12 : 10;
}

}  // namespace zbesov
