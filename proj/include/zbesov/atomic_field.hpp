#pragma once

// Sparse view of an atomic function at resolution m. It reproduces the cell
// values of render(f, m) exactly, but box statistics are evaluated per atom:
// atoms fully inside a box contribute through the sorted bump pattern (so the
// cost is logarithmic in the pattern size), atoms cut by the box boundary are
// summed cell by cell, and uncovered cells are zeros.

#include <algorithm>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "zbesov/render.hpp"

namespace zbesov {

template <int D>
class AtomicField {
  static_assert(D == 1 || D == 2, "only d = 1 and d = 2 are supported");

 public:
  static constexpr int dim = D;

  AtomicField(const AtomicFunction<D>& f, int m, int guard = 4) : m_(m) {
    if (!f.atoms.empty())
      require(m >= f.finest_generation() + guard, ErrorCode::resolution_too_coarse,
              "resolution must exceed the finest atom generation by the guard");
    require_disjoint(f);
    std::map<std::pair<int, double>, std::size_t> species_of;
    for (const auto& a : f.atoms) {
      if (a.coefficient == 0.0) continue;
      const auto key = std::make_pair(a.cube.k, a.coefficient);
      auto it = species_of.find(key);
      if (it == species_of.end()) {
        it = species_of.emplace(key, species_.size()).first;
        species_.push_back({pattern_for(a.cube.k), a.coefficient, {}});
      }
      species_[it->second].indices.push_back(a.cube.index);
      support_.push_back(a.cube.cells(m_));
    }
    for (auto& s : species_) std::sort(s.indices.begin(), s.indices.end());
    if (!support_.empty()) {
      hull_ = support_.front();
      for (const auto& b : support_)
        for (int i = 0; i < D; ++i) {
          hull_.lo[i] = std::min(hull_.lo[i], b.lo[i]);
          hull_.hi[i] = std::max(hull_.hi[i], b.hi[i]);
        }
    } else {
      hull_.lo.fill(0);
      hull_.hi.fill(-1);
    }
  }

  int resolution() const { return m_; }
  const std::vector<CellBox<D>>& support_boxes() const { return support_; }
  CellBox<D> support_hull() const { return hull_; }

  double box_mean(const CellBox<D>& box) const {
    require_nondegenerate(box);
    Scan& sc = scan(box);
    return sc.sum / box.volume();
  }

  double box_mad(const CellBox<D>& box) const {
    require_nondegenerate(box);
    Scan& sc = scan(box);
    const double vol = box.volume();
    const double mu = sc.sum / vol;
    double acc = 0.0;
    for (std::size_t s = 0; s < species_.size(); ++s) {
      const auto n = sc.full[s];
      if (n == 0) continue;
      const Species& sp = species_[s];
      acc += static_cast<double>(n) * std::abs(sp.coefficient) * patterns_[sp.pattern].deviation(mu / sp.coefficient);
    }
    for (const auto& part : sc.partial) {
      const Species& sp = species_[part.species];
      const Pattern& pat = patterns_[sp.pattern];
      visit_local(pat, part.local, [&](double v) { acc += std::abs(sp.coefficient * v - mu); });
    }
    acc += (vol - sc.covered) * std::abs(mu);
    return acc / vol;
  }

 private:
  struct Pattern {
    int generation;
    std::int64_t side;
    std::vector<double> values;
    PrefixSums<D> prefix;
    double total = 0.0;
    std::vector<double> sorted;
    std::vector<double> sorted_prefix;

    /// sum_i |v_i - s| over the whole pattern.
    double deviation(double s) const {
      const auto k = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), s) - sorted.begin());
      const double below = sorted_prefix[k];
      const double all = sorted_prefix.back();
      return (s * static_cast<double>(k) - below) + ((all - below) - s * static_cast<double>(sorted.size() - k));
    }
  };

  struct Species {
    std::size_t pattern;
    double coefficient;
    std::vector<IVec<D>> indices;
  };

  struct Partial {
    std::size_t species;
    CellBox<D> local;  // cells of the atom inside the box, in pattern coordinates
  };

  struct Scan {
    double sum = 0.0;
    double covered = 0.0;
    std::vector<std::int64_t> full;
    std::vector<Partial> partial;
  };

  std::size_t pattern_for(int g) {
    for (std::size_t i = 0; i < patterns_.size(); ++i)
      if (patterns_[i].generation == g) return i;
    Pattern p;
    p.generation = g;
    p.side = detail::pow2(m_ - g);
    p.values = bump_pattern<D>(p.side);
    IVec<D> ext;
    ext.fill(p.side);
    p.prefix = PrefixSums<D>(p.values, ext);
    for (double v : p.values) p.total += v;
    p.sorted = p.values;
    std::sort(p.sorted.begin(), p.sorted.end());
    p.sorted_prefix.assign(p.sorted.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.sorted.size(); ++i) p.sorted_prefix[i + 1] = p.sorted_prefix[i] + p.sorted[i];
    patterns_.push_back(std::move(p));
    return patterns_.size() - 1;
  }

  template <class Fn>
  static void visit_local(const Pattern& pat, const CellBox<D>& local, Fn&& fn) {
    if constexpr (D == 1) {
      for (std::int64_t u = local.lo[0]; u <= local.hi[0]; ++u) fn(pat.values[u]);
    } else {
      for (std::int64_t u = local.lo[0]; u <= local.hi[0]; ++u)
        for (std::int64_t v = local.lo[1]; v <= local.hi[1]; ++v) fn(pat.values[u * pat.side + v]);
    }
  }

  void add_partial(Scan& sc, std::size_t s, const IVec<D>& idx, const CellBox<D>& box) const {
    const Species& sp = species_[s];
    const Pattern& pat = patterns_[sp.pattern];
    CellBox<D> local;
    for (int i = 0; i < D; ++i) {
      const std::int64_t base = idx[i] * pat.side;
      local.lo[i] = std::max(box.lo[i], base) - base;
      local.hi[i] = std::min(box.hi[i], base + pat.side - 1) - base;
    }
    if (local.empty()) return;
    sc.sum += sp.coefficient * pat.prefix.sum(local.lo, local.hi);
    sc.covered += local.volume();
    sc.partial.push_back({s, local});
  }

  Scan& scan(const CellBox<D>& box) const {
    thread_local Scan sc;
    sc.sum = 0.0;
    sc.covered = 0.0;
    sc.full.assign(species_.size(), 0);
    sc.partial.clear();
    for (std::size_t s = 0; s < species_.size(); ++s) {
      const Species& sp = species_[s];
      const Pattern& pat = patterns_[sp.pattern];
      const std::int64_t l = pat.side;
      IVec<D> ia, ib, fa, fb;
      for (int i = 0; i < D; ++i) {
        ia[i] = detail::floor_div(box.lo[i], l);
        ib[i] = detail::floor_div(box.hi[i], l);
        fa[i] = detail::ceil_div(box.lo[i], l);
        fb[i] = detail::floor_div(static_cast<__int128>(box.hi[i]) + 1, l) - 1;
      }
      const auto& idx = sp.indices;
      std::int64_t nfull = 0;
      if constexpr (D == 1) {
        const auto lo = std::lower_bound(idx.begin(), idx.end(), IVec<1>{ia[0]});
        const auto hi = std::upper_bound(lo, idx.end(), IVec<1>{ib[0]});
        if (lo == hi) continue;
        const auto flo = std::lower_bound(lo, hi, IVec<1>{fa[0]});
        const auto fhi = std::upper_bound(flo, hi, IVec<1>{fb[0]});
        nfull = fhi - flo;
        for (auto it = lo; it != flo; ++it) add_partial(sc, s, *it, box);
        for (auto it = fhi; it != hi; ++it) add_partial(sc, s, *it, box);
      } else {
        constexpr std::int64_t lowest = std::numeric_limits<std::int64_t>::min();
        auto it = std::lower_bound(idx.begin(), idx.end(), IVec<2>{ia[0], lowest});
        while (it != idx.end() && (*it)[0] <= ib[0]) {
          const std::int64_t row = (*it)[0];
          const auto rb = std::lower_bound(it, idx.end(), IVec<2>{row, ia[1]});
          const auto re = std::upper_bound(rb, idx.end(), IVec<2>{row, ib[1]});
          if (row >= fa[0] && row <= fb[0]) {
            const auto fbeg = std::lower_bound(rb, re, IVec<2>{row, fa[1]});
            const auto fend = std::upper_bound(fbeg, re, IVec<2>{row, fb[1]});
            nfull += fend - fbeg;
            for (auto a = rb; a != fbeg; ++a) add_partial(sc, s, *a, box);
            for (auto a = fend; a != re; ++a) add_partial(sc, s, *a, box);
          } else {
            for (auto a = rb; a != re; ++a) add_partial(sc, s, *a, box);
          }
          it = std::lower_bound(re, idx.end(), IVec<2>{row + 1, lowest});
        }
      }
      if (nfull > 0) {
        sc.full[s] = nfull;
        sc.sum += static_cast<double>(nfull) * sp.coefficient * pat.total;
        sc.covered += static_cast<double>(nfull) * static_cast<double>(pat.values.size());
      }
    }
    return sc;
  }

  int m_;
  std::vector<Pattern> patterns_;
  std::vector<Species> species_;
  std::vector<CellBox<D>> support_;
  CellBox<D> hull_;
};

}  // namespace zbesov
