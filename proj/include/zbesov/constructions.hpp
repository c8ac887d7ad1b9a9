#pragma once

// Exact sparse representations of the extremal families: bumps adjusted to
// dyadic cubes, the block sequence A^N, the single-scale family f_{N,n},
// building blocks and gap-separated multi-block functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "zbesov/bump.hpp"
#include "zbesov/grid.hpp"

namespace zbesov {

/// Exponents (p, q) and dimension d shared by all norms.
struct Params {
  double p = 2.0;
  double q = 2.0;
  int d = 1;

  void validate() const {
    require(std::isfinite(p) && std::isfinite(q) && p >= 1.0 && q >= 1.0, ErrorCode::invalid_parameters,
            "exponents must satisfy 1 <= p, q < inf");
    require(d == 1 || d == 2, ErrorCode::invalid_parameters, "d must be 1 or 2");
  }
};

/// coefficient * phi((x - c_Q) / l(Q)).
template <int D>
struct Atom {
  DyadicCube<D> cube;
  double coefficient = 1.0;
};

struct ConstructionMeta {
  std::string kind = "custom";
  int N = 0;
  int n = 0;
  int M = 0;
  int T = 0;
  double p = 0.0;
  double q = 0.0;
  int d = 0;
};

template <int D>
struct AtomicFunction {
  std::vector<Atom<D>> atoms;
  ConstructionMeta meta;

  int finest_generation() const {
    int g = INT32_MIN;
    for (const auto& a : atoms) g = std::max(g, a.cube.k);
    return g;
  }
};

/// True when no two atom cubes overlap. Dyadic cubes are nested or disjoint,
/// so it is enough to look for an ancestor (or duplicate) of each cube.
template <int D>
bool atoms_disjoint(const AtomicFunction<D>& f) {
  std::set<DyadicCube<D>> seen;
  std::set<int> gens;
  for (const auto& a : f.atoms) {
    if (!seen.insert(a.cube).second) return false;
    gens.insert(a.cube.k);
  }
  for (const auto& a : f.atoms) {
    for (int g : gens) {
      if (g >= a.cube.k) break;
      DyadicCube<D> anc{g, {}};
      for (int i = 0; i < D; ++i) anc.index[i] = a.cube.index[i] >> (a.cube.k - g);
      if (seen.count(anc)) return false;
    }
  }
  return true;
}

template <int D>
void require_disjoint(const AtomicFunction<D>& f) {
  require(atoms_disjoint(f), ErrorCode::atoms_not_disjoint, "atom supports overlap");
}

/// Shifts every atom by `offset` length units along the first axis.
template <int D>
AtomicFunction<D> translate(AtomicFunction<D> f, std::int64_t offset) {
  for (auto& a : f.atoms) {
    if (a.cube.k >= 0) {
      a.cube.index[0] += offset * detail::pow2(a.cube.k);
    } else {
      const std::int64_t unit = detail::pow2(-a.cube.k);
      require(offset % unit == 0, ErrorCode::invalid_argument, "offset not aligned to atom generation");
      a.cube.index[0] += offset / unit;
    }
  }
  return f;
}

/// The L_p-preserving 2^s-dilation x -> 2^s x: generations drop by s and
/// coefficients scale by 2^(-d s / p).
template <int D>
AtomicFunction<D> dilate(AtomicFunction<D> f, int s, double p) {
  const double scale = std::exp2(-static_cast<double>(D * s) / p);
  for (auto& a : f.atoms) {
    a.cube.k -= s;
    a.coefficient *= scale;
  }
  return f;
}

template <int D>
AtomicFunction<D> merge(const std::vector<AtomicFunction<D>>& parts) {
  AtomicFunction<D> out;
  out.meta.kind = "union";
  for (const auto& p : parts) out.atoms.insert(out.atoms.end(), p.atoms.begin(), p.atoms.end());
  return out;
}

/// The sequence A^N of length 2^(dN), zero-based: entries j < 2^d form block 0;
/// entries in [2^(db), 2^(d(b+1))) form block b. Block b has value 2^(-db/p).
inline std::vector<double> sequence_AN(int N, int d, double p) {
  require(N >= 1 && N * d < 40, ErrorCode::invalid_parameters, "N must be at least 1");
  require(d == 1 || d == 2, ErrorCode::invalid_parameters, "d must be 1 or 2");
  const std::int64_t len = detail::pow2(d * N);
  std::vector<double> a(static_cast<std::size_t>(len));
  int b = 0;
  for (std::int64_t j = 0; j < len; ++j) {
    while (b + 1 < N && j >= detail::pow2(d * (b + 1))) ++b;
    a[static_cast<std::size_t>(j)] = std::exp2(-static_cast<double>(d * b) / p);
  }
  return a;
}

namespace detail {

template <int D>
IVec<D> lex_index(std::int64_t j, std::int64_t side) {
  IVec<D> i;
  if constexpr (D == 1) i = {j};
  else i = {j / side, j % side};
  return i;
}

}  // namespace detail

/// n(N) = 2N + 4.
inline int default_n(int N) { return 2 * N + 4; }

/// f_{N,n} = 2^(dn/p) sum_j a_j phi_{C_j}, where C_j is the generation-n cube
/// containing the center of the j-th generation-N cube of [0,1]^d (lexicographic).
template <int D>
AtomicFunction<D> build_f(int N, int n, const Params& params) {
  params.validate();
  require(params.d == D, ErrorCode::invalid_parameters, "dimension mismatch");
  require(N >= 1 && n > N, ErrorCode::invalid_parameters, "need n > N >= 1");
  require(n < 60, ErrorCode::invalid_parameters, "n too large");
  const auto a = sequence_AN(N, D, params.p);
  const std::int64_t side = detail::pow2(N);
  const std::int64_t shift = detail::pow2(n - N);
  const double amp = std::exp2(static_cast<double>(D * n) / params.p);
  AtomicFunction<D> f;
  f.meta = {"f_Nn", N, n, 0, 0, params.p, params.q, D};
  f.atoms.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto q = detail::lex_index<D>(static_cast<std::int64_t>(j), side);
    DyadicCube<D> c{n, {}};
    for (int i = 0; i < D; ++i) c.index[i] = q[i] * shift + shift / 2;
    f.atoms.push_back({c, amp * a[j]});
  }
  return f;
}

/// Building block Psi = sum_j phi_{2^(n-M) C_j}: 2^(dM) unit-coefficient
/// atoms of generation M, total measure 1. Defaults to n = 3M.
template <int D>
AtomicFunction<D> build_block(int M, const Params& params, int n = 0) {
  params.validate();
  require(params.d == D, ErrorCode::invalid_parameters, "dimension mismatch");
  if (n == 0) n = 3 * M;
  require(M >= 1 && n > M && n < 60, ErrorCode::invalid_parameters, "need n > M >= 1");
  const std::int64_t side = detail::pow2(M);
  const std::int64_t shift = detail::pow2(n - M);
  AtomicFunction<D> f;
  f.meta = {"block", M, n, M, 1, params.p, params.q, D};
  const std::int64_t count = detail::pow2(D * M);
  f.atoms.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) {
    const auto q = detail::lex_index<D>(j, side);
    DyadicCube<D> c{M, {}};
    for (int i = 0; i < D; ++i) c.index[i] = q[i] * shift + shift / 2;
    f.atoms.push_back({c, 1.0});
  }
  return f;
}

/// Certifies that no evaluation box at generation >= k_min meets two blocks,
/// and that every offset is a multiple of 2^(-k_min) (so profiles are
/// translation invariant).
struct GapCertificate {
  int k_min = 0;
  std::int64_t gap = 0;
  std::vector<std::int64_t> offsets;
};

template <int D>
struct PlacedBlock {
  AtomicFunction<D> block;  // at its canonical position
  std::int64_t offset = 0;  // translation along the first axis, length units
};

template <int D>
struct MultiBlock {
  std::vector<PlacedBlock<D>> blocks;
  GapCertificate certificate;

  AtomicFunction<D> combined(std::size_t count) const {
    std::vector<AtomicFunction<D>> parts;
    for (std::size_t i = 0; i < std::min(count, blocks.size()); ++i)
      parts.push_back(translate(blocks[i].block, blocks[i].offset));
    auto f = merge(parts);
    f.meta.kind = "multiblock";
    f.meta.T = static_cast<int>(std::min(count, blocks.size()));
    return f;
  }
};

/// Upper end of the support along the first axis, rounded up to whole units.
template <int D>
std::int64_t support_end(const AtomicFunction<D>& f) {
  double hi = 0.0;
  for (const auto& a : f.atoms) hi = std::max(hi, (static_cast<double>(a.cube.index[0]) + 1.0) * a.cube.side());
  return static_cast<std::int64_t>(std::ceil(hi));
}

/// T building blocks with concentration scales M_t = t * delta_scale, laid out
/// along the first axis with gaps of at least 2^(-k_min + 1).
template <int D>
MultiBlock<D> build_multiblock(int T, int delta_scale, const Params& params, int k_min = -8,
                               std::int64_t atom_budget = std::int64_t{1} << 22) {
  require(T >= 1 && delta_scale >= 2, ErrorCode::invalid_parameters, "need T >= 1 and delta_scale >= 2");
  require(k_min <= 0, ErrorCode::invalid_parameters, "k_min must be <= 0");
  const int deepest = T * delta_scale;
  require(D * deepest < 62 && detail::pow2(D * deepest) <= atom_budget, ErrorCode::budget_exceeded,
          "T * delta_scale too deep for the atom budget");
  MultiBlock<D> mb;
  const std::int64_t unit = detail::pow2(-k_min);
  mb.certificate.k_min = k_min;
  mb.certificate.gap = 2 * unit;
  std::int64_t cursor = 0;
  for (int t = 1; t <= T; ++t) {
    PlacedBlock<D> pb{build_block<D>(t * delta_scale, params), 0};
    if (t > 1) {
      const std::int64_t start = cursor + mb.certificate.gap;
      pb.offset = ((start + unit - 1) / unit) * unit;
    }
    cursor = pb.offset + support_end(pb.block);
    mb.certificate.offsets.push_back(pb.offset);
    mb.blocks.push_back(std::move(pb));
  }
  return mb;
}

/// Portable uniform double in [0, 1) from a 64-bit engine.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Random trigonometric polynomial times the smooth cutoff of the unit cube,
/// sampled on [0,1)^d at resolution m. Fully determined by (seed, index).
template <int D>
GridFunction<D> random_smooth(std::uint64_t seed, int index, int m, int terms = 4) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(index));
  struct Term {
    std::array<double, D> freq;
    double amp, phase;
  };
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Term term{};
    for (int i = 0; i < D; ++i) term.freq[i] = 1.0 + std::floor(4.0 * uniform01(rng));
    term.amp = 2.0 * uniform01(rng) - 1.0;
    term.phase = 2.0 * std::numbers::pi * uniform01(rng);
    ts.push_back(term);
  }
  IVec<D> origin{}, extent;
  extent.fill(detail::pow2(m));
  return GridFunction<D>::sample(m, origin, extent, [&](const Point<D>& x) {
    double s = 0.0;
    for (const auto& t : ts) {
      double arg = t.phase;
      for (int i = 0; i < D; ++i) arg += 2.0 * std::numbers::pi * t.freq[i] * x[i];
      s += t.amp * std::cos(arg);
    }
    for (int i = 0; i < D; ++i) s *= detail::cutoff(x[i] - 0.5);
    return s;
  });
}

}  // namespace zbesov
