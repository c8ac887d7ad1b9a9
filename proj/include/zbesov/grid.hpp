#pragma once

// Dense dyadic grids, integral images and the box primitives (mean and mean
// absolute deviation) that every norm in the library is built from.
//
// Coordinates: a grid of resolution m has cells of side 2^-m. Cell j (an
// integer vector) covers prod [j_i 2^-m, (j_i+1) 2^-m) and is sampled at its
// center. All cell boxes below use absolute cell indices, so a grid's domain is
// [origin, origin + extent - 1].

#include <algorithm>
#include <array>
#include <type_traits>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zbesov/error.hpp"

namespace zbesov {

// Non-deduced aliases: D always comes from the grid, cube or field argument,
// since std::array carries its extent as size_t.
template <int D>
using IVec = typename std::type_identity<std::array<std::int64_t, D>>::type;

template <int D>
using Point = typename std::type_identity<std::array<double, D>>::type;

/// Default cap on the number of cells a dense grid may hold (64 Mi cells).
inline constexpr std::int64_t default_cell_budget = std::int64_t{1} << 26;

namespace detail {

inline std::int64_t floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

inline std::int64_t ceil_div(__int128 a, __int128 b) { return -floor_div(-a, b); }

inline bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

inline std::int64_t pow2(int e) {
  require(e >= 0 && e < 62, ErrorCode::overflow_guard, "2^" + std::to_string(e) + " out of range");
  return std::int64_t{1} << e;
}

}  // namespace detail

/// Inclusive integer box of cells.
template <int D>
struct CellBox {
  IVec<D> lo{};
  IVec<D> hi{};

  bool empty() const {
    for (int i = 0; i < D; ++i)
      if (hi[i] < lo[i]) return true;
    return false;
  }

  std::int64_t width(int axis) const { return std::max<std::int64_t>(0, hi[axis] - lo[axis] + 1); }

  /// Number of cells as a double; exact below 2^53.
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < D; ++i) v *= static_cast<double>(width(i));
    return v;
  }

  std::int64_t count() const {
    __int128 c = 1;
    for (int i = 0; i < D; ++i) c *= width(i);
    require(c < (__int128{1} << 62), ErrorCode::overflow_guard, "cell box too large");
    return static_cast<std::int64_t>(c);
  }

  bool contains(const IVec<D>& j) const {
    for (int i = 0; i < D; ++i)
      if (j[i] < lo[i] || j[i] > hi[i]) return false;
    return true;
  }

  bool contains(const CellBox& other) const {
    for (int i = 0; i < D; ++i)
      if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
    return true;
  }

  bool intersects(const CellBox& other) const { return !intersect(*this, other).empty(); }

  friend CellBox intersect(const CellBox& a, const CellBox& b) {
    CellBox r;
    for (int i = 0; i < D; ++i) {
      r.lo[i] = std::max(a.lo[i], b.lo[i]);
      r.hi[i] = std::min(a.hi[i], b.hi[i]);
    }
    return r;
  }

  friend bool operator==(const CellBox&, const CellBox&) = default;
};

/// Fraction 3/5: evaluation boxes have half-width 0.6 * l(Q).
inline constexpr std::int64_t overlap_num = 3;
inline constexpr std::int64_t overlap_den = 5;

/// Dyadic cube prod [2^-k i_j, 2^-k (i_j + 1)).
template <int D>
struct DyadicCube {
  int k = 0;
  IVec<D> index{};

  double side() const { return std::ldexp(1.0, -k); }
  double volume() const { return std::ldexp(1.0, -D * k); }

  Point<D> center() const {
    Point<D> c;
    for (int i = 0; i < D; ++i) c[i] = (static_cast<double>(index[i]) + 0.5) * side();
    return c;
  }

  /// Cells of a resolution-m grid that tile this cube (requires k <= m).
  CellBox<D> cells(int m) const {
    require(k <= m, ErrorCode::resolution_too_coarse, "cube finer than the grid");
    const std::int64_t l = detail::pow2(m - k);
    CellBox<D> b;
    for (int i = 0; i < D; ++i) {
      b.lo[i] = index[i] * l;
      b.hi[i] = index[i] * l + l - 1;
    }
    return b;
  }

  bool contains(const DyadicCube& other) const {
    if (other.k < k) return false;
    const int s = other.k - k;
    for (int i = 0; i < D; ++i)
      if ((other.index[i] >> s) != index[i]) return false;
    return true;
  }

  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

/// Cells whose centers lie in the open cube of half-width 0.6 l(Q) around c_Q.
/// Exact integer arithmetic: a cell center j + 1/2 is inside iff
/// |10 j + 5 - 5 (2 i + 1) L| < 6 L with L = 2^(m-k).
template <int D>
CellBox<D> evaluation_box(const DyadicCube<D>& q, int m) {
  require(q.k <= m, ErrorCode::degenerate_scale, "generation finer than the grid");
  const __int128 l = detail::pow2(m - q.k);
  const __int128 reach = 2 * overlap_num * l;  // 6 L
  CellBox<D> b;
  for (int i = 0; i < D; ++i) {
    const __int128 c10 = 5 * (2 * static_cast<__int128>(q.index[i]) + 1) * l - 5;
    b.lo[i] = detail::floor_div(c10 - reach, 10) + 1;
    b.hi[i] = detail::ceil_div(c10 + reach, 10) - 1;
  }
  return b;
}

/// Cells within the evaluation box of generation k centered at the center of cell j.
template <int D>
CellBox<D> centered_box(const IVec<D>& j, int m, int k) {
  require(k <= m, ErrorCode::degenerate_scale, "generation finer than the grid");
  const std::int64_t l = detail::pow2(m - k);
  const std::int64_t r = (overlap_num * l - 1) / overlap_den;
  CellBox<D> b;
  for (int i = 0; i < D; ++i) {
    b.lo[i] = j[i] - r;
    b.hi[i] = j[i] + r;
  }
  return b;
}

/// Cells whose centers lie in the open box of half-width h around a point.
template <int D>
CellBox<D> point_box(const Point<D>& center, double half_width, int m) {
  require(half_width > 0 && std::isfinite(half_width), ErrorCode::invalid_argument, "half-width must be positive");
  CellBox<D> b;
  for (int i = 0; i < D; ++i) {
    const double u = std::ldexp(center[i], m) - 0.5;
    const double w = std::ldexp(half_width, m);
    b.lo[i] = static_cast<std::int64_t>(std::floor(u - w)) + 1;
    b.hi[i] = static_cast<std::int64_t>(std::ceil(u + w)) - 1;
  }
  return b;
}

template <int D>
inline void require_nondegenerate(const CellBox<D>& box) {
  require(box.volume() >= static_cast<double>(1 << D), ErrorCode::degenerate_box,
          "fewer than 2^d cell centers in the box");
}

/// Integral image over a dense grid. Entry (i0, i1) holds the sum of all
/// samples with smaller indices on every axis.
template <int D>
class PrefixSums {
 public:
  PrefixSums() = default;

  PrefixSums(std::span<const double> samples, const IVec<D>& extent) : extent_(extent) {
    static_assert(D == 1 || D == 2, "only d = 1 and d = 2 are supported");
    if constexpr (D == 1) {
      table_.assign(static_cast<std::size_t>(extent[0] + 1), 0.0);
      for (std::int64_t i = 0; i < extent[0]; ++i) table_[i + 1] = table_[i] + samples[i];
    } else {
      const std::int64_t nx = extent[0], ny = extent[1];
      const std::int64_t stride = ny + 1;
      table_.assign(static_cast<std::size_t>((nx + 1) * stride), 0.0);
      for (std::int64_t i = 0; i < nx; ++i) {
        double row = 0.0;
        for (std::int64_t j = 0; j < ny; ++j) {
          row += samples[i * ny + j];
          table_[(i + 1) * stride + j + 1] = table_[i * stride + j + 1] + row;
        }
      }
    }
  }

  /// Sum over local (0-based) inclusive box; the box must lie inside the grid.
  double sum(const IVec<D>& lo, const IVec<D>& hi) const {
    if constexpr (D == 1) {
      return table_[hi[0] + 1] - table_[lo[0]];
    } else {
      const std::int64_t stride = extent_[1] + 1;
      const auto at = [&](std::int64_t i, std::int64_t j) { return table_[i * stride + j]; };
      return at(hi[0] + 1, hi[1] + 1) - at(lo[0], hi[1] + 1) - at(hi[0] + 1, lo[1]) + at(lo[0], lo[1]);
    }
  }

 private:
  IVec<D> extent_{};
  std::vector<double> table_;
};

/// Piecewise-constant samples of a real function on a dyadic grid. Values
/// outside the domain are identically zero.
template <int D>
class GridFunction {
  static_assert(D == 1 || D == 2, "only d = 1 and d = 2 are supported");

 public:
  static constexpr int dim = D;

  GridFunction(int m, IVec<D> origin, IVec<D> extent, std::vector<double> samples)
      : m_(m), origin_(origin), extent_(extent), samples_(std::move(samples)) {
    __int128 n = 1;
    for (int i = 0; i < D; ++i) {
      require(detail::is_pow2(extent_[i]), ErrorCode::invalid_argument, "extent must be a power of two");
      n *= extent_[i];
    }
    require(n == static_cast<__int128>(samples_.size()), ErrorCode::invalid_argument,
            "sample count does not match extent");
    for (double v : samples_) require(std::isfinite(v), ErrorCode::invalid_argument, "non-finite sample");
    prefix_ = PrefixSums<D>(samples_, extent_);
  }

  static GridFunction zeros(int m, IVec<D> origin, IVec<D> extent) {
    std::int64_t n = 1;
    for (int i = 0; i < D; ++i) n *= extent[i];
    return GridFunction(m, origin, extent, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }

  /// Samples f at the cell centers of the given domain.
  template <class Fn>
  static GridFunction sample(int m, IVec<D> origin, IVec<D> extent, Fn&& fn) {
    std::int64_t n = 1;
    for (int i = 0; i < D; ++i) n *= extent[i];
    std::vector<double> s(static_cast<std::size_t>(n));
    std::size_t at = 0;
    if constexpr (D == 1) {
      for (std::int64_t i = 0; i < extent[0]; ++i)
        s[at++] = fn(Point<1>{std::ldexp(static_cast<double>(origin[0] + i) + 0.5, -m)});
    } else {
      for (std::int64_t i = 0; i < extent[0]; ++i)
        for (std::int64_t j = 0; j < extent[1]; ++j)
          s[at++] = fn(Point<2>{std::ldexp(static_cast<double>(origin[0] + i) + 0.5, -m),
                                std::ldexp(static_cast<double>(origin[1] + j) + 0.5, -m)});
    }
    return GridFunction(m, origin, extent, std::move(s));
  }

  int resolution() const { return m_; }
  const IVec<D>& origin() const { return origin_; }
  const IVec<D>& extent() const { return extent_; }
  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double cell_volume() const { return std::ldexp(1.0, -D * m_); }

  CellBox<D> domain() const {
    CellBox<D> b;
    for (int i = 0; i < D; ++i) {
      b.lo[i] = origin_[i];
      b.hi[i] = origin_[i] + extent_[i] - 1;
    }
    return b;
  }

  Point<D> cell_center(const IVec<D>& j) const {
    Point<D> c;
    for (int i = 0; i < D; ++i) c[i] = std::ldexp(static_cast<double>(j[i]) + 0.5, -m_);
    return c;
  }

  std::size_t linear_index(const IVec<D>& j) const {
    if constexpr (D == 1) return static_cast<std::size_t>(j[0] - origin_[0]);
    else return static_cast<std::size_t>((j[0] - origin_[0]) * extent_[1] + (j[1] - origin_[1]));
  }

  IVec<D> cell_of(std::size_t linear) const {
    if constexpr (D == 1) return {origin_[0] + static_cast<std::int64_t>(linear)};
    else
      return {origin_[0] + static_cast<std::int64_t>(linear) / extent_[1],
              origin_[1] + static_cast<std::int64_t>(linear) % extent_[1]};
  }

  /// Sample at an absolute cell index; zero outside the domain.
  double value(const IVec<D>& j) const { return domain().contains(j) ? samples_[linear_index(j)] : 0.0; }

  double box_sum(const CellBox<D>& box) const {
    const CellBox<D> in = intersect(box, domain());
    if (in.empty()) return 0.0;
    IVec<D> lo, hi;
    for (int i = 0; i < D; ++i) {
      lo[i] = in.lo[i] - origin_[i];
      hi[i] = in.hi[i] - origin_[i];
    }
    return prefix_.sum(lo, hi);
  }

  double box_mean(const CellBox<D>& box) const {
    require_nondegenerate(box);
    return box_sum(box) / box.volume();
  }

  /// Mean of |sample - box mean| over the cell box, zeros outside the domain included.
  double box_mad(const CellBox<D>& box) const {
    const double mu = box_mean(box);
    const CellBox<D> in = intersect(box, domain());
    double acc = 0.0;
    double inside = 0.0;
    double lo = 0.0, hi = 0.0;
    if (!in.empty()) {
      inside = in.volume();
      lo = hi = value(in.lo);
      const auto visit = [&](const double* p, std::int64_t n) {
        for (std::int64_t i = 0; i < n; ++i) {
          acc += std::abs(p[i] - mu);
          lo = std::min(lo, p[i]);
          hi = std::max(hi, p[i]);
        }
      };
      if constexpr (D == 1) {
        visit(samples_.data() + (in.lo[0] - origin_[0]), in.width(0));
      } else {
        for (std::int64_t i = in.lo[0]; i <= in.hi[0]; ++i)
          visit(samples_.data() + linear_index(IVec<2>{i, in.lo[1]}), in.width(1));
      }
    }
    // A box on which f takes one value has no deviation; the prefix-sum mean
    // would otherwise leave rounding residue.
    if (lo == hi && (lo == 0.0 || inside == box.volume())) return 0.0;
    acc += (box.volume() - inside) * std::abs(mu);
    return acc / box.volume();
  }

  /// Boxes covering every cell that can be nonzero.
  std::vector<CellBox<D>> support_boxes() const { return {domain()}; }
  CellBox<D> support_hull() const { return domain(); }

 private:
  int m_;
  IVec<D> origin_;
  IVec<D> extent_;
  std::vector<double> samples_;
  PrefixSums<D> prefix_;
};

/// Mean over the cells whose centers fall in the open box of half-width h around x.
template <int D>
double box_mean(const GridFunction<D>& f, const Point<D>& center, double half_width) {
  return f.box_mean(point_box<D>(center, half_width, f.resolution()));
}

/// Mean absolute deviation from the box mean over the same cell set as box_mean.
template <int D>
double box_mad(const GridFunction<D>& f, const Point<D>& center, double half_width) {
  return f.box_mad(point_box<D>(center, half_width, f.resolution()));
}

}  // namespace zbesov
