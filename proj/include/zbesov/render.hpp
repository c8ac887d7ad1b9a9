#pragma once

#include <bit>
#include <map>
#include <optional>

#include "zbesov/constructions.hpp"

namespace zbesov {

/// Samples of phi adjusted to a cube that spans `side` cells per axis, in
/// lexicographic local order. Identical for every atom of the same generation.
template <int D>
std::vector<double> bump_pattern(std::int64_t side) {
  const int e = static_cast<int>(std::countr_zero(static_cast<std::uint64_t>(side)));
  const auto coord = [&](std::int64_t u) { return std::ldexp(static_cast<double>(u) + 0.5, -e) - 0.5; };
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(D == 1 ? side : side * side));
  if constexpr (D == 1) {
    for (std::int64_t u = 0; u < side; ++u) out.push_back(bump<1>(Point<1>{coord(u)}));
  } else {
    for (std::int64_t u = 0; u < side; ++u)
      for (std::int64_t v = 0; v < side; ++v) out.push_back(bump<2>(Point<2>{coord(u), coord(v)}));
  }
  return out;
}

struct RenderOptions {
  int guard = 4;
  std::int64_t max_cells = default_cell_budget;
};

/// Smallest power-of-two-extent domain holding every atom.
template <int D>
std::pair<IVec<D>, IVec<D>> atom_domain(const AtomicFunction<D>& f, int m) {
  IVec<D> origin{}, extent{};
  if (f.atoms.empty()) {
    extent.fill(detail::pow2(m));
    return {origin, extent};
  }
  CellBox<D> hull = f.atoms.front().cube.cells(m);
  for (const auto& a : f.atoms) {
    const auto c = a.cube.cells(m);
    for (int i = 0; i < D; ++i) {
      hull.lo[i] = std::min(hull.lo[i], c.lo[i]);
      hull.hi[i] = std::max(hull.hi[i], c.hi[i]);
    }
  }
  for (int i = 0; i < D; ++i) {
    origin[i] = hull.lo[i];
    extent[i] = static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(hull.width(i))));
  }
  return {origin, extent};
}

/// Dense rendering of an atomic function on an explicit domain.
template <int D>
GridFunction<D> render_on(const AtomicFunction<D>& f, int m, IVec<D> origin, IVec<D> extent,
                          const RenderOptions& opt = {}) {
  if (!f.atoms.empty())
    require(m >= f.finest_generation() + opt.guard, ErrorCode::resolution_too_coarse,
            "resolution must exceed the finest atom generation by the guard");
  __int128 cells = 1;
  for (int i = 0; i < D; ++i) cells *= extent[i];
  require(cells <= opt.max_cells, ErrorCode::overflow_guard, "rendered grid exceeds the cell budget");

  std::vector<double> s(static_cast<std::size_t>(cells), 0.0);
  CellBox<D> dom;
  for (int i = 0; i < D; ++i) {
    dom.lo[i] = origin[i];
    dom.hi[i] = origin[i] + extent[i] - 1;
  }
  std::map<int, std::vector<double>> patterns;
  for (const auto& a : f.atoms) {
    const std::int64_t side = detail::pow2(m - a.cube.k);
    auto it = patterns.find(a.cube.k);
    if (it == patterns.end()) it = patterns.emplace(a.cube.k, bump_pattern<D>(side)).first;
    const auto& pat = it->second;
    const auto cells_of = a.cube.cells(m);
    require(dom.contains(cells_of), ErrorCode::invalid_argument, "atom outside the render domain");
    if constexpr (D == 1) {
      const std::int64_t base = cells_of.lo[0] - origin[0];
      for (std::int64_t u = 0; u < side; ++u) s[base + u] += a.coefficient * pat[u];
    } else {
      for (std::int64_t u = 0; u < side; ++u) {
        const std::int64_t row = (cells_of.lo[0] + u - origin[0]) * extent[1] + (cells_of.lo[1] - origin[1]);
        for (std::int64_t v = 0; v < side; ++v) s[row + v] += a.coefficient * pat[u * side + v];
      }
    }
  }
  return GridFunction<D>(m, origin, extent, std::move(s));
}

/// Dense rendering on the smallest power-of-two domain covering the atoms.
/// An empty atom list renders as zeros on the unit cube.
template <int D>
GridFunction<D> render(const AtomicFunction<D>& f, int m, const RenderOptions& opt = {}) {
  const auto [origin, extent] = atom_domain(f, m);
  return render_on(f, m, origin, extent, opt);
}

}  // namespace zbesov
