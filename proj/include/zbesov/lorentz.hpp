#pragma once

// Exact Lorentz quasi-norms of step rearrangements. For a decreasing step
// function f*(t) = v_i on [s_{i-1}, s_i),
//
//   ||f||_{L_{p,q}}^q = sum_i v_i^q (p/q) (s_i^(q/p) - s_{i-1}^(q/p)),
//
// which is p^(1/q) || t lambda(t)^(1/p) ||_{L_q(dt/t)} summed by parts.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "zbesov/bump.hpp"
#include "zbesov/constructions.hpp"
#include "zbesov/grid.hpp"
#include "zbesov/render.hpp"

namespace zbesov {

struct StepDistribution {
  std::vector<double> levels;  // strictly decreasing, > 0
  std::vector<double> masses;  // cumulative, strictly increasing

  bool empty() const { return levels.empty(); }
  double total_mass() const { return masses.empty() ? 0.0 : masses.back(); }

  /// Builds the canonical form from (|value|, mass) pieces: zero levels are
  /// dropped and equal levels merged.
  static StepDistribution from_pieces(std::vector<std::pair<double, double>> pieces) {
    std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    StepDistribution sd;
    double cum = 0.0;
    for (const auto& [v, w] : pieces) {
      if (!(v > 0.0) || !(w > 0.0)) continue;
      cum += w;
      if (!sd.levels.empty() && sd.levels.back() == v) {
        sd.masses.back() = cum;
      } else {
        sd.levels.push_back(v);
        sd.masses.push_back(cum);
      }
    }
    return sd;
  }
};

/// Decreasing rearrangement of |f|: distinct nonzero |sample| values with
/// cumulative masses count * 2^(-dm).
template <int D>
StepDistribution rearrangement(const GridFunction<D>& f) {
  std::vector<double> v;
  v.reserve(f.size());
  for (double s : f.samples())
    if (s != 0.0) v.push_back(std::abs(s));
  std::sort(v.begin(), v.end(), std::greater<>());
  const double cell = f.cell_volume();
  StepDistribution sd;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    sd.levels.push_back(v[i]);
    sd.masses.push_back(static_cast<double>(j) * cell);
    i = j;
  }
  return sd;
}

namespace detail {

// b^r - a^r for 0 <= a < b without cancellation.
inline double power_difference(double a, double b, double r) {
  if (a <= 0.0) return std::pow(b, r);
  return std::pow(a, r) * std::expm1(r * std::log1p((b - a) / a));
}

}  // namespace detail

inline double lorentz_norm(const StepDistribution& sd, double p, double q) {
  require(p >= 1.0 && q >= 1.0 && std::isfinite(p) && std::isfinite(q), ErrorCode::invalid_parameters,
          "need 1 <= p, q < inf");
  const double r = q / p;
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < sd.levels.size(); ++i) {
    acc += std::pow(sd.levels[i], q) * detail::power_difference(prev, sd.masses[i], r);
    prev = sd.masses[i];
  }
  return std::pow(acc / r, 1.0 / q);
}

inline double lp_norm(const StepDistribution& sd, double p) {
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < sd.levels.size(); ++i) {
    acc += std::pow(sd.levels[i], p) * (sd.masses[i] - prev);
    prev = sd.masses[i];
  }
  return std::pow(acc, 1.0 / p);
}

/// Lorentz norm of a finite sequence under the counting measure.
inline double lorentz_seq_norm(std::span<const double> a, double p, double q) {
  std::vector<std::pair<double, double>> pieces;
  pieces.reserve(a.size());
  for (double v : a) {
    require(v >= 0.0, ErrorCode::invalid_argument, "sequence entries must be nonnegative");
    pieces.emplace_back(v, 1.0);
  }
  return lorentz_norm(StepDistribution::from_pieces(std::move(pieces)), p, q);
}

/// Rearrangement of the reference bump on the unit cube at the reference
/// resolution (12 for d = 1, 10 for d = 2).
template <int D>
StepDistribution bump_distribution(int m = reference_resolution<D>()) {
  const std::int64_t n = detail::pow2(m);
  const auto pat = bump_pattern<D>(n);
  IVec<D> origin{}, extent;
  extent.fill(n);
  return rearrangement(GridFunction<D>(m, origin, extent, pat));
}

/// Distribution of a disjoint atomic sum: each atom c phi_Q contributes levels
/// |c| v_i with masses l(Q)^d (s_i - s_{i-1}).
template <int D>
StepDistribution atomic_distribution(const AtomicFunction<D>& f, const StepDistribution& phi) {
  require_disjoint(f);
  std::map<double, double> weight;  // |c| -> total measure of its atoms
  for (const auto& a : f.atoms)
    if (a.coefficient != 0.0) weight[std::abs(a.coefficient)] += a.cube.volume();
  std::vector<std::pair<double, double>> pieces;
  pieces.reserve(weight.size() * phi.levels.size());
  for (const auto& [c, w] : weight) {
    double prev = 0.0;
    for (std::size_t i = 0; i < phi.levels.size(); ++i) {
      pieces.emplace_back(c * phi.levels[i], w * (phi.masses[i] - prev));
      prev = phi.masses[i];
    }
  }
  return StepDistribution::from_pieces(std::move(pieces));
}

template <int D>
double atomic_lorentz_norm(const AtomicFunction<D>& f, const StepDistribution& phi, double p, double q) {
  return lorentz_norm(atomic_distribution(f, phi), p, q);
}

}  // namespace zbesov
