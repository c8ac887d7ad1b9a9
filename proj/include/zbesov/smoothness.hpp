#pragma once

// Averaged modulus of smoothness (mean-deviation form, r = 1), the
// per-generation layers L_k and the discrete seminorm
//
//   ||f||_* = ( sum_k L_k^q )^(1/q),
//   L_k     = ( sum_{Q in D_k} |Q| delta[f; 0.6 l(Q)](c_Q)^p )^(1/p),
//
// plus the pointwise maximal modulus and analytic bounds for the layers that
// fall outside a computed generation range.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <vector>

#include "zbesov/atomic_field.hpp"
#include "zbesov/bump.hpp"
#include "zbesov/constructions.hpp"
#include "zbesov/grid.hpp"

namespace zbesov {

/// Anything that answers box means and mean deviations on a dyadic cell grid.
template <class F>
concept SampledField = requires(const F& f, const CellBox<F::dim>& box) {
  { f.resolution() } -> std::convertible_to<int>;
  { f.box_mean(box) } -> std::convertible_to<double>;
  { f.box_mad(box) } -> std::convertible_to<double>;
  { f.support_boxes() };
  { f.support_hull() } -> std::convertible_to<CellBox<F::dim>>;
};

inline constexpr int default_guard = 4;
inline constexpr int default_k_min = -8;

struct ScaleProfile {
  int k_min = 0;
  int k_max = -1;
  std::vector<double> layers;  // layers[k - k_min]

  bool empty() const { return layers.empty(); }
  bool contains(int k) const { return k >= k_min && k <= k_max; }
  double at(int k) const { return contains(k) ? layers[static_cast<std::size_t>(k - k_min)] : 0.0; }
  double& operator[](int k) { return layers[static_cast<std::size_t>(k - k_min)]; }

  static ScaleProfile zeros(int k_min, int k_max) {
    return {k_min, k_max, std::vector<double>(static_cast<std::size_t>(std::max(0, k_max - k_min + 1)), 0.0)};
  }
};

/// delta[f; h](x): mean absolute deviation over the box of half-width h.
template <int D>
double delta(const GridFunction<D>& f, const Point<D>& x, double h) {
  require(h >= std::ldexp(1.0, -f.resolution() + 2), ErrorCode::degenerate_box,
          "half-width below the resolution guard 2^(-m+2)");
  return box_mad(f, x, h);
}

/// Generation-k cubes whose evaluation box meets at least one support box, in
/// lexicographic order.
template <SampledField F>
std::vector<IVec<F::dim>> candidate_cubes(const F& f, int k) {
  constexpr int D = F::dim;
  const int m = f.resolution();
  const std::int64_t l = detail::pow2(m - k);
  std::vector<IVec<D>> out;
  for (const auto& s : f.support_boxes()) {
    IVec<D> lo, hi;
    for (int i = 0; i < D; ++i) {
      lo[i] = detail::floor_div(s.lo[i], l) - 1;
      hi[i] = detail::floor_div(s.hi[i], l) + 1;
    }
    const auto consider = [&](const IVec<D>& idx) {
      if (evaluation_box(DyadicCube<D>{k, idx}, m).intersects(s)) out.push_back(idx);
    };
    if constexpr (D == 1) {
      for (std::int64_t i = lo[0]; i <= hi[0]; ++i) consider({i});
    } else {
      for (std::int64_t i = lo[0]; i <= hi[0]; ++i)
        for (std::int64_t j = lo[1]; j <= hi[1]; ++j) consider({i, j});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// L_k of the discrete seminorm.
template <SampledField F>
double scale_layer(const F& f, int k, const Params& params, int guard = default_guard) {
  constexpr int D = F::dim;
  params.validate();
  require(params.d == D, ErrorCode::invalid_parameters, "dimension mismatch");
  require(k <= f.resolution() - guard, ErrorCode::degenerate_scale,
          "generation " + std::to_string(k) + " exceeds m - guard");
  const double vol = std::ldexp(1.0, -D * k);
  double acc = 0.0;
  for (const auto& idx : candidate_cubes(f, k)) {
    const double d = f.box_mad(evaluation_box(DyadicCube<D>{k, idx}, f.resolution()));
    if (d > 0.0) acc += vol * std::pow(d, params.p);
  }
  return std::pow(acc, 1.0 / params.p);
}

template <SampledField F>
ScaleProfile scale_profile(const F& f, int k_min, int k_max, const Params& params, int guard = default_guard) {
  require(k_min <= k_max, ErrorCode::invalid_argument, "k_min must not exceed k_max");
  require(k_max <= f.resolution() - guard, ErrorCode::degenerate_scale, "k_max exceeds m - guard");
  ScaleProfile prof = ScaleProfile::zeros(k_min, k_max);
  for (int k = k_min; k <= k_max; ++k) prof[k] = scale_layer(f, k, params, guard);
  return prof;
}

/// (sum_k L_k^q)^(1/q) over the stored range.
inline double discrete_seminorm(const ScaleProfile& profile, const Params& params) {
  double acc = 0.0;
  for (double l : profile.layers) acc += std::pow(l, params.q);
  return std::pow(acc, 1.0 / params.q);
}

/// Norms feeding the analytic tail bounds. Unknown entries are +inf.
struct FunctionStats {
  double l1 = std::numeric_limits<double>::infinity();
  double lp = std::numeric_limits<double>::infinity();
  double grad_sup = std::numeric_limits<double>::infinity();
  double grad_lp = std::numeric_limits<double>::infinity();
  double diameter = std::numeric_limits<double>::infinity();
};

enum class TailSide { coarse, fine };

namespace detail {

// Coarse: delta <= 2 mean|f| over the box, and each point lies in at most 2^d
// boxes, so L_k <= 2 (5/3)^d ||f||_1 2^(d k (p-1)/p).
inline double coarse_constant(const FunctionStats& s, int d) { return 2.0 * std::pow(5.0 / 3.0, d) * s.l1; }

// Fine (Poincare on cubes, constant diam/2): delta <= 0.6 sqrt(d) 2^-k mean|grad f|,
// then Jensen and the 2^d overlap: L_k <= 0.6 sqrt(d) (5/3)^(d/p) 2^-k ||grad f||_p.
inline double fine_constant_lp(const FunctionStats& s, const Params& pr) {
  return 0.6 * std::sqrt(static_cast<double>(pr.d)) * std::pow(5.0 / 3.0, pr.d / pr.p) * s.grad_lp;
}

// Fine (sup form): delta <= 1.2 sqrt(d) 2^-k ||grad f||_inf on the boxes meeting
// the support, whose cubes cover at most (diam + 3 2^-k)^d.
inline double fine_bound_sup(const FunctionStats& s, int k, const Params& pr) {
  if (s.grad_sup == 0.0) return 0.0;
  const double h = std::ldexp(1.0, -k);
  const double cover = std::pow(s.diameter + 3.0 * h, pr.d);
  return std::pow(cover, 1.0 / pr.p) * 1.2 * std::sqrt(static_cast<double>(pr.d)) * h * s.grad_sup;
}

inline double min_finite(double a, double b) {
  if (std::isnan(a)) return b;
  if (std::isnan(b)) return a;
  return std::min(a, b);
}

}  // namespace detail

/// Upper bound for L_k^q at a generation outside the computed range.
inline double tail_estimate(const FunctionStats& s, int k, const Params& pr, TailSide side) {
  if (side == TailSide::coarse) {
    const double c = detail::coarse_constant(s, pr.d);
    if (c == 0.0) return 0.0;
    return std::pow(c, pr.q) * std::exp2(pr.d * pr.q * (pr.p - 1.0) / pr.p * k);
  }
  const double lp_form = s.grad_lp == 0.0 ? 0.0 : std::pow(detail::fine_constant_lp(s, pr) * std::ldexp(1.0, -k), pr.q);
  const double sup_form = std::pow(detail::fine_bound_sup(s, k, pr), pr.q);
  return detail::min_finite(lp_form, sup_form);
}

/// Bound for sum of L_k^q over all k < edge (coarse) or all k > edge (fine).
inline double tail_sum(const FunctionStats& s, int edge, const Params& pr, TailSide side) {
  if (side == TailSide::coarse) {
    const double r = pr.d * pr.q * (pr.p - 1.0) / pr.p;
    const double first = tail_estimate(s, edge - 1, pr, TailSide::coarse);
    if (first == 0.0) return 0.0;
    if (r <= 0.0) return std::numeric_limits<double>::infinity();
    return first / (1.0 - std::exp2(-r));
  }
  const double ratio = 1.0 / (1.0 - std::exp2(-pr.q));
  const int k = edge + 1;
  const double lp_form =
      s.grad_lp == 0.0 ? 0.0 : std::pow(detail::fine_constant_lp(s, pr) * std::ldexp(1.0, -k), pr.q) * ratio;
  const double sup_form = std::pow(detail::fine_bound_sup(s, k, pr), pr.q) * ratio;
  return detail::min_finite(lp_form, sup_form);
}

struct SeminormReport {
  double value = 0.0;
  double q_sum = 0.0;
  double coarse_tail = 0.0;  // bound on sum_{k < k_min} L_k^q
  double fine_tail = 0.0;    // bound on sum_{k > k_max} L_k^q
  double tail_fraction = 0.0;
  bool flagged = false;
  int k_min = 0;
  int k_max = 0;
};

inline constexpr double default_tail_tolerance = 0.05;

/// Seminorm over the stored range plus the relative excess the truncated
/// tails could add. Throws tail-too-large when that exceeds `tolerance`
/// and `strict` is set.
inline SeminormReport discrete_seminorm(const ScaleProfile& profile, const Params& params, const FunctionStats& stats,
                                        double tolerance = default_tail_tolerance, bool strict = true) {
  SeminormReport r;
  r.k_min = profile.k_min;
  r.k_max = profile.k_max;
  r.value = discrete_seminorm(profile, params);
  r.q_sum = std::pow(r.value, params.q);
  r.coarse_tail = tail_sum(stats, profile.k_min, params, TailSide::coarse);
  r.fine_tail = tail_sum(stats, profile.k_max, params, TailSide::fine);
  const double tails = r.coarse_tail + r.fine_tail;
  if (tails == 0.0) r.tail_fraction = 0.0;
  else if (r.value == 0.0) r.tail_fraction = std::numeric_limits<double>::infinity();
  else r.tail_fraction = std::pow(1.0 + tails / r.q_sum, 1.0 / params.q) - 1.0;
  r.flagged = !(r.tail_fraction <= tolerance);
  if (strict && r.flagged)
    fail(ErrorCode::tail_too_large, "truncated tail may add " + std::to_string(100.0 * r.tail_fraction) + "%");
  return r;
}

/// Pointwise max over k in [k_min, k_max] of delta(f, x, 0.6 2^-k) at the
/// cell centers of `domain`.
template <SampledField F>
GridFunction<F::dim> maximal_modulus(const F& f, const IVec<F::dim>& origin, const IVec<F::dim>& extent, int k_min,
                                     int k_max, int guard = default_guard) {
  constexpr int D = F::dim;
  const int m = f.resolution();
  require(k_min <= k_max && k_max <= m - guard, ErrorCode::degenerate_scale, "invalid generation range");
  auto out = GridFunction<D>::zeros(m, origin, extent);
  std::vector<double> vals(out.size(), 0.0);
  const CellBox<D> hull = f.support_hull();
  std::vector<std::optional<double>> whole(static_cast<std::size_t>(k_max - k_min + 1));
  for (std::size_t c = 0; c < vals.size(); ++c) {
    const IVec<D> j = out.cell_of(c);
    double best = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
      const CellBox<D> box = centered_box<D>(j, m, k);
      double d;
      if (!hull.empty() && box.contains(hull)) {
        auto& cached = whole[static_cast<std::size_t>(k - k_min)];
        if (!cached) cached = f.box_mad(box);
        d = *cached;
      } else if (!hull.empty() && !box.intersects(hull)) {
        d = 0.0;
      } else {
        d = f.box_mad(box);
      }
      best = std::max(best, d);
    }
    vals[c] = best;
  }
  return GridFunction<D>(m, origin, extent, std::move(vals));
}

template <int D>
GridFunction<D> maximal_modulus(const GridFunction<D>& f, int k_min, int k_max, int guard = default_guard) {
  return maximal_modulus(f, f.origin(), f.extent(), k_min, k_max, guard);
}

/// L_p norm of grid samples.
template <int D>
double lp_norm(const GridFunction<D>& f, double p) {
  double acc = 0.0;
  for (double v : f.samples()) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.cell_volume(), 1.0 / p);
}

/// Statistics of a grid function; gradients by forward differences, with
/// zeros outside the domain.
template <int D>
FunctionStats function_stats(const GridFunction<D>& f, double p) {
  FunctionStats s;
  const double vol = f.cell_volume();
  const double inv_h = std::ldexp(1.0, f.resolution());
  double l1 = 0, lp = 0, gp = 0, gsup = 0;
  CellBox<D> nz;
  nz.lo.fill(std::numeric_limits<std::int64_t>::max());
  nz.hi.fill(std::numeric_limits<std::int64_t>::min());
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double v = f.samples()[c];
    l1 += std::abs(v);
    lp += std::pow(std::abs(v), p);
    if (v != 0.0) {
      const auto j = f.cell_of(c);
      for (int i = 0; i < D; ++i) {
        nz.lo[i] = std::min(nz.lo[i], j[i]);
        nz.hi[i] = std::max(nz.hi[i], j[i]);
      }
    }
  }
  CellBox<D> ext = f.domain();
  for (int i = 0; i < D; ++i) --ext.lo[i];
  const auto visit = [&](const IVec<D>& j) {
    double g2 = 0.0;
    const double v = f.value(j);
    for (int i = 0; i < D; ++i) {
      IVec<D> n = j;
      ++n[i];
      const double g = (f.value(n) - v) * inv_h;
      g2 += g * g;
    }
    const double g = std::sqrt(g2);
    gp += std::pow(g, p);
    gsup = std::max(gsup, g);
  };
  if constexpr (D == 1) {
    for (std::int64_t i = ext.lo[0]; i <= ext.hi[0]; ++i) visit({i});
  } else {
    for (std::int64_t i = ext.lo[0]; i <= ext.hi[0]; ++i)
      for (std::int64_t j = ext.lo[1]; j <= ext.hi[1]; ++j) visit({i, j});
  }
  s.l1 = l1 * vol;
  s.lp = std::pow(lp * vol, 1.0 / p);
  s.grad_lp = std::pow(gp * vol, 1.0 / p);
  s.grad_sup = gsup;
  double diam2 = 0.0;
  if (!nz.empty())
    for (int i = 0; i < D; ++i) {
      const double w = std::ldexp(static_cast<double>(nz.hi[i] - nz.lo[i] + 1), -f.resolution());
      diam2 += w * w;
    }
  s.diameter = std::sqrt(diam2);
  return s;
}

/// Statistics of an atomic function from the bump's own norms.
template <int D>
FunctionStats function_stats(const AtomicFunction<D>& f, const BumpStats& bump) {
  FunctionStats s;
  double l1 = 0, lp = 0, gp = 0, gsup = 0;
  const double p = bump.p;
  Point<D> lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& a : f.atoms) {
    const double l = a.cube.side();
    const double vol = a.cube.volume();
    const double c = std::abs(a.coefficient);
    l1 += c * vol * bump.l1;
    lp += std::pow(c, p) * vol;
    gp += std::pow(c / l, p) * vol;
    gsup = std::max(gsup, c / l * bump.grad_sup);
    for (int i = 0; i < D; ++i) {
      lo[i] = std::min(lo[i], static_cast<double>(a.cube.index[i]) * l);
      hi[i] = std::max(hi[i], static_cast<double>(a.cube.index[i] + 1) * l);
    }
  }
  s.l1 = l1;
  s.lp = std::pow(lp, 1.0 / p) * bump.lp;
  s.grad_lp = std::pow(gp, 1.0 / p) * bump.grad_lp;
  s.grad_sup = gsup;
  double diam2 = 0.0;
  if (!f.atoms.empty())
    for (int i = 0; i < D; ++i) diam2 += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  s.diameter = std::sqrt(diam2);
  return s;
}

}  // namespace zbesov
