#pragma once

// Scale-profile combination, concentration and almost-disjointness checks,
// log-log slope fits, and the three scaling studies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zbesov/atomic_field.hpp"
#include "zbesov/constructions.hpp"
#include "zbesov/lorentz.hpp"
#include "zbesov/smoothness.hpp"

namespace zbesov {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least-squares line through (xs, ys).
inline SlopeFit fit_slope(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, ErrorCode::degenerate_input, "need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0.0, ErrorCode::degenerate_input, "xs must not all coincide");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(ys[i] - (fit.slope * xs[i] + fit.intercept)));
  return fit;
}

/// Layer-wise p-sum of profiles of gap-separated blocks. Exact when every
/// evaluation box in the range meets at most one block.
inline ScaleProfile combine_profiles(const std::vector<ScaleProfile>& profiles, const Params& params,
                                     const std::optional<GapCertificate>& certificate) {
  require(certificate.has_value(), ErrorCode::gap_certificate_missing, "blocks were not placed with a gap certificate");
  require(!profiles.empty(), ErrorCode::invalid_argument, "no profiles to combine");
  const int k_min = profiles.front().k_min, k_max = profiles.front().k_max;
  require(k_min >= certificate->k_min, ErrorCode::gap_certificate_missing,
          "profile range extends below the certified generation");
  ScaleProfile out = ScaleProfile::zeros(k_min, k_max);
  for (int k = k_min; k <= k_max; ++k) {
    double acc = 0.0;
    for (const auto& pr : profiles) {
      require(pr.k_min == k_min && pr.k_max == k_max, ErrorCode::invalid_argument, "profile ranges differ");
      acc += std::pow(pr.at(k), params.p);
    }
    out[k] = std::pow(acc, 1.0 / params.p);
  }
  return out;
}

struct ConcentrationReport {
  int M = 0;
  int peak = 0;
  double left_rate = std::numeric_limits<double>::quiet_NaN();   // bits per generation, l < M
  double right_rate = std::numeric_limits<double>::quiet_NaN();  // bits per generation, l > M
  double left_residual = 0.0;
  double right_residual = 0.0;
  double nu = std::numeric_limits<double>::quiet_NaN();  // min of the two rates
  bool pass = false;
};

/// Peak location and least-squares geometric decay rates of L_l^q on both
/// sides of M, fitted over 2 <= |l - M| <= 2 + window.
inline ConcentrationReport concentration_check(const ScaleProfile& profile, int M, const Params& params,
                                               int window = 4) {
  ConcentrationReport r;
  r.M = M;
  double best = -1.0;
  for (int k = profile.k_min; k <= profile.k_max; ++k)
    if (profile.at(k) > best) {
      best = profile.at(k);
      r.peak = k;
    }
  const auto side_rate = [&](int sign, double& rate, double& residual) {
    std::vector<double> xs, ys;
    for (int dist = 2; dist <= 2 + window; ++dist) {
      const int l = M + sign * dist;
      if (!profile.contains(l) || !(profile.at(l) > 0.0)) continue;
      xs.push_back(static_cast<double>(dist));
      ys.push_back(params.q * std::log2(profile.at(l)));
    }
    if (xs.size() < 2) return;
    const auto fit = fit_slope(xs, ys);
    rate = -fit.slope;
    residual = fit.max_residual;
  };
  side_rate(-1, r.left_rate, r.left_residual);
  side_rate(+1, r.right_rate, r.right_residual);
  r.nu = std::min(r.left_rate, r.right_rate);
  r.pass = std::abs(r.peak - M) <= 1 && r.left_rate > 0.0 && r.right_rate > 0.0;
  return r;
}

struct DisjointnessReport {
  double delta_achieved = 0.0;
  double epsilon_observed = 0.0;
};

/// Measures how far ||a + b||_q^q is from ||a||_q^q + ||b||_q^q given the
/// share of each sequence's mass outside its nominal index set.
inline DisjointnessReport almost_disjoint_check(std::span<const double> a, std::span<const double> b, double q,
                                                const std::vector<std::size_t>& I, const std::vector<std::size_t>& J) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "sequences must have equal length");
  std::set<std::size_t> si(I.begin(), I.end());
  for (std::size_t j : J) require(!si.count(j), ErrorCode::index_sets_overlap, "index sets I and J intersect");
  double na = 0, nb = 0, nab = 0, ia = 0, jb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += std::pow(std::abs(a[i]), q);
    nb += std::pow(std::abs(b[i]), q);
    nab += std::pow(std::abs(a[i] + b[i]), q);
  }
  for (std::size_t i : I)
    if (i < a.size()) ia += std::pow(std::abs(a[i]), q);
  for (std::size_t j : J)
    if (j < b.size()) jb += std::pow(std::abs(b[j]), q);
  DisjointnessReport r;
  r.delta_achieved = std::max(na > 0 ? 1.0 - ia / na : 0.0, nb > 0 ? 1.0 - jb / nb : 0.0);
  r.epsilon_observed = (na + nb) > 0 ? nab / (na + nb) - 1.0 : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Studies

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct NamedSlope {
  std::string name;
  SlopeFit fit;
  double target = 0.0;
  double tolerance = 0.0;
};

struct StudyReport {
  std::string study;
  Params params;
  std::map<std::string, double> config;     // resolved numeric configuration
  std::vector<std::string> columns;          // table columns
  std::vector<std::string> labels;           // optional per-row labels
  std::vector<std::vector<double>> rows;
  std::vector<NamedSlope> slopes;
  std::vector<SeminormReport> tails;         // one per row
  std::vector<ConcentrationReport> concentration;
  std::map<std::string, ScaleProfile> profiles;
  std::vector<Verdict> verdicts;

  bool pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }

  double column(std::size_t row, const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    require(it != columns.end(), ErrorCode::invalid_argument, "no column " + name);
    return rows.at(row)[static_cast<std::size_t>(it - columns.begin())];
  }

  std::vector<double> column(const std::string& name) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(column(i, name));
    return out;
  }
};

struct StudyOptions {
  int resolution_guard = 10;  // m = finest atom generation + resolution_guard
  int layer_guard = default_guard;  // k_max = m - layer_guard unless set
  int k_min = default_k_min;
  std::optional<int> k_max;
  double tail_tolerance = default_tail_tolerance;
  double slope_tolerance = 0.10;
  double residual_fraction = 0.25;
  int n_offset = 4;  // n = 2N + n_offset for the f_{N,n} family
};

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void slope_verdicts(StudyReport& rep, const NamedSlope& s, double residual_fraction) {
  rep.verdicts.push_back({s.name + " residual", s.fit.max_residual <= residual_fraction * std::abs(s.fit.slope),
                          "max residual " + fmt(s.fit.max_residual) + " vs slope " + fmt(s.fit.slope)});
}

template <int D>
struct Measured {
  ScaleProfile profile;
  SeminormReport seminorm;
};

template <int D>
Measured<D> measure_atomic(const AtomicFunction<D>& f, const Params& params, const StudyOptions& opt,
                           const BumpStats& bstats, int m) {
  AtomicField<D> field(f, m, opt.resolution_guard);
  const int k_max = opt.k_max.value_or(m - opt.layer_guard);
  Measured<D> r;
  r.profile = scale_profile(field, opt.k_min, k_max, params, opt.layer_guard);
  r.seminorm = discrete_seminorm(r.profile, params, function_stats(f, bstats), opt.tail_tolerance, false);
  return r;
}

inline void tail_verdict(StudyReport& rep) {
  bool ok = true;
  double worst = 0.0;
  for (const auto& t : rep.tails) {
    ok = ok && !t.flagged;
    worst = std::max(worst, t.tail_fraction);
  }
  rep.verdicts.push_back({"tails", ok, "largest truncated-tail fraction " + fmt(worst)});
}

}  // namespace detail

/// q < p: ratio ||f_{N,n}||_{L_{p,q}} / ||f_{N,n}||_* against N; the expected
/// log-log slope is 1/q - 1/p.
template <int D>
StudyReport study_qlp(const Params& params, const std::vector<int>& N_list, const StudyOptions& opt = {}) {
  params.validate();
  require(params.q < params.p, ErrorCode::parameter_domain, "study-qlp needs q < p");
  require(N_list.size() >= 2, ErrorCode::invalid_argument, "need at least two values of N");
  StudyReport rep;
  rep.study = "study-qlp";
  rep.params = params;
  rep.config = {{"resolution_guard", opt.resolution_guard}, {"layer_guard", opt.layer_guard},
                {"k_min", opt.k_min},                     {"n_offset", opt.n_offset},
                {"tail_tolerance", opt.tail_tolerance},   {"slope_tolerance", opt.slope_tolerance}};
  if (opt.k_max) rep.config["k_max"] = *opt.k_max;
  rep.columns = {"N", "n", "m", "seminorm", "lorentz", "ratio", "seq_lp", "seq_lpq"};
  const auto bstats = bump_stats<D>(params.p, reference_resolution<D>());
  const auto phi = bump_distribution<D>();
  std::vector<double> lx, ly, ratios;
  for (int N : N_list) {
    const int n = 2 * N + opt.n_offset;
    const int m = n + opt.resolution_guard;
    const auto f = build_f<D>(N, n, params);
    const auto meas = detail::measure_atomic(f, params, opt, bstats, m);
    const double lor = atomic_lorentz_norm(f, phi, params.p, params.q);
    const double ratio = lor / meas.seminorm.value;
    const auto a = sequence_AN(N, D, params.p);
    double seq_lp = 0;
    for (double v : a) seq_lp += std::pow(v, params.p);
    seq_lp = std::pow(seq_lp, 1.0 / params.p);
    rep.rows.push_back({double(N), double(n), double(m), meas.seminorm.value, lor, ratio, seq_lp,
                        lorentz_seq_norm(a, params.p, params.q)});
    rep.tails.push_back(meas.seminorm);
    rep.profiles["N" + std::to_string(N)] = meas.profile;
    lx.push_back(std::log(double(N)));
    ly.push_back(std::log(ratio));
    ratios.push_back(ratio);
  }
  const double target = 1.0 / params.q - 1.0 / params.p;
  NamedSlope s{"log ratio vs log N", fit_slope(lx, ly), target, opt.slope_tolerance};
  rep.slopes.push_back(s);
  rep.verdicts.push_back({"ratio slope", std::abs(s.fit.slope - target) <= opt.slope_tolerance,
                          "slope " + detail::fmt(s.fit.slope) + ", target " + detail::fmt(target) + " +/- " +
                              detail::fmt(opt.slope_tolerance)});
  bool increasing = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
  rep.verdicts.push_back({"ratio increasing", increasing, "R strictly increasing in N"});
  detail::slope_verdicts(rep, s, opt.residual_fraction);
  detail::tail_verdict(rep);
  return rep;
}

/// Profiles of single building blocks at the given concentration scales, with
/// a concentration check each and agreement of the fitted rates across M.
template <int D>
StudyReport concentration_study(const Params& params, const std::vector<int>& M_list, const StudyOptions& opt = {},
                                int window = 4, double nu_agreement = 0.30) {
  params.validate();
  require(!M_list.empty(), ErrorCode::invalid_argument, "need at least one M");
  StudyReport rep;
  rep.study = "concentration";
  rep.params = params;
  rep.config = {{"resolution_guard", opt.resolution_guard}, {"layer_guard", opt.layer_guard},
                {"k_min", opt.k_min}, {"window", window}, {"nu_agreement", nu_agreement}};
  rep.columns = {"M", "m", "peak", "left_rate", "right_rate", "nu", "seminorm"};
  const auto bstats = bump_stats<D>(params.p, reference_resolution<D>());
  for (int M : M_list) {
    const auto block = build_block<D>(M, params);
    const int m = M + opt.resolution_guard;
    const auto meas = detail::measure_atomic(block, params, opt, bstats, m);
    const auto c = concentration_check(meas.profile, M, params, window);
    rep.concentration.push_back(c);
    rep.tails.push_back(meas.seminorm);
    rep.profiles["single_M" + std::to_string(M)] = meas.profile;
    rep.rows.push_back({double(M), double(m), double(c.peak), c.left_rate, c.right_rate, c.nu, meas.seminorm.value});
    rep.verdicts.push_back({"concentration M=" + std::to_string(M), c.pass,
                            "peak " + std::to_string(c.peak) + ", rates " + detail::fmt(c.left_rate) + " / " +
                                detail::fmt(c.right_rate)});
  }
  if (rep.concentration.size() >= 2) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& c : rep.concentration) {
      lo = std::min(lo, c.nu);
      hi = std::max(hi, c.nu);
    }
    const bool ok = std::isfinite(lo) && lo > 0.0 && (hi - lo) <= nu_agreement * lo;
    rep.verdicts.push_back({"nu agreement", ok,
                            "nu range [" + detail::fmt(lo) + ", " + detail::fmt(hi) + "], allowed spread " +
                                detail::fmt(100.0 * nu_agreement) + "%"});
  }
  detail::tail_verdict(rep);
  return rep;
}

struct QgpOptions {
  // Blocks spread over 2^(2M) length units, where the generic coarse tail
  // bound is loose; starting at -16 keeps the attested tail far below 5%.
  StudyOptions base = [] {
    StudyOptions o;
    o.k_min = -16;
    return o;
  }();
  double seminorm_slope_margin = 0.15;
  int concentration_window = 4;
};

/// p < q: T gap-separated building blocks. ||Phi||_* should grow like T^(1/q)
/// while ||Phi||_{L_{p,q}} grows like T^(1/p).
template <int D>
StudyReport study_qgp(const Params& params, const std::vector<int>& T_list, int delta_scale,
                      const QgpOptions& qopt = {}) {
  params.validate();
  require(params.p > 1.0 && params.q > params.p, ErrorCode::parameter_domain, "study-qgp needs 1 < p < q");
  require(T_list.size() >= 2, ErrorCode::invalid_argument, "need at least two values of T");
  const StudyOptions& opt = qopt.base;
  const int T_max = *std::max_element(T_list.begin(), T_list.end());
  const auto mb = build_multiblock<D>(T_max, delta_scale, params, opt.k_min);
  const int m = T_max * delta_scale + opt.resolution_guard;

  StudyReport rep;
  rep.study = "study-qgp";
  rep.params = params;
  rep.config = {{"resolution_guard", opt.resolution_guard}, {"layer_guard", opt.layer_guard},
                {"k_min", opt.k_min},                     {"m", m},
                {"delta_scale", delta_scale},             {"gap", static_cast<double>(mb.certificate.gap)},
                {"tail_tolerance", opt.tail_tolerance},   {"slope_tolerance", opt.slope_tolerance},
                {"seminorm_slope_margin", qopt.seminorm_slope_margin}};
  rep.columns = {"T", "seminorm", "lorentz"};
  const auto bstats = bump_stats<D>(params.p, reference_resolution<D>());
  const auto phi = bump_distribution<D>();

  StudyOptions block_opt = opt;
  block_opt.resolution_guard = m - T_max * delta_scale;
  std::vector<ScaleProfile> block_profiles;
  for (const auto& pb : mb.blocks) {
    const auto meas = detail::measure_atomic(pb.block, params, block_opt, bstats, m);
    block_profiles.push_back(meas.profile);
    rep.profiles["block_M" + std::to_string(pb.block.meta.M)] = meas.profile;
    rep.concentration.push_back(concentration_check(meas.profile, pb.block.meta.M, params, qopt.concentration_window));
  }

  std::vector<double> lx, ls, ll;
  for (int T : T_list) {
    const std::vector<ScaleProfile> first(block_profiles.begin(), block_profiles.begin() + T);
    const auto combined = combine_profiles(first, params, mb.certificate);
    const auto phi_T = mb.combined(static_cast<std::size_t>(T));
    const auto sem = discrete_seminorm(combined, params, function_stats(phi_T, bstats), opt.tail_tolerance, false);
    const double lor = atomic_lorentz_norm(phi_T, phi, params.p, params.q);
    rep.rows.push_back({double(T), sem.value, lor});
    rep.tails.push_back(sem);
    rep.profiles["T" + std::to_string(T)] = combined;
    lx.push_back(std::log(double(T)));
    ls.push_back(std::log(sem.value));
    ll.push_back(std::log(lor));
  }
  NamedSlope sl{"log lorentz vs log T", fit_slope(lx, ll), 1.0 / params.p, opt.slope_tolerance};
  NamedSlope ss{"log seminorm vs log T", fit_slope(lx, ls), 1.0 / params.q, qopt.seminorm_slope_margin};
  rep.slopes = {sl, ss};
  rep.verdicts.push_back({"lorentz slope", std::abs(sl.fit.slope - sl.target) <= sl.tolerance,
                          "slope " + detail::fmt(sl.fit.slope) + ", target " + detail::fmt(sl.target) + " +/- " +
                              detail::fmt(sl.tolerance)});
  rep.verdicts.push_back({"seminorm slope", ss.fit.slope <= ss.target + ss.tolerance,
                          "slope " + detail::fmt(ss.fit.slope) + ", bound " + detail::fmt(ss.target + ss.tolerance)});
  detail::slope_verdicts(rep, sl, opt.residual_fraction);
  detail::slope_verdicts(rep, ss, opt.residual_fraction);
  for (const auto& c : rep.concentration)
    rep.verdicts.push_back({"concentration M=" + std::to_string(c.M), c.pass,
                            "peak " + std::to_string(c.peak) + ", rates " + detail::fmt(c.left_rate) + " / " +
                                detail::fmt(c.right_rate)});
  detail::tail_verdict(rep);
  return rep;
}

struct PpOptions {
  StudyOptions base = [] {
    StudyOptions o;
    o.resolution_guard = 8;
    return o;
  }();
  std::vector<int> N_list{2, 3, 4, 5, 6};
  int random_count = 10;
  std::uint64_t seed = 1;
  int dense_resolution = 12;     // bump and random suite members
  int maximal_guard = 4;         // maximal modulus of f_{N,n} at m = n + maximal_guard
  double family_spread = 2.0;    // max/min of ||f||_p / ||f||_* over the family
  double link_spread = 3.0;      // max/min of each chain link over the whole suite
};

/// p = q: the chain ||f||_p <~ ||M f||_p <~ ||f||_* over a suite of functions.
template <int D>
StudyReport study_pp(const Params& params, const PpOptions& popt = {}) {
  params.validate();
  require(params.p == params.q && params.p > 1.0, ErrorCode::parameter_domain, "study-pp needs p = q > 1");
  const StudyOptions& opt = popt.base;
  StudyReport rep;
  rep.study = "study-pp";
  rep.params = params;
  rep.config = {{"resolution_guard", opt.resolution_guard}, {"layer_guard", opt.layer_guard},
                {"k_min", opt.k_min},                     {"n_offset", opt.n_offset},
                {"random_count", popt.random_count},      {"seed", static_cast<double>(popt.seed)},
                {"dense_resolution", popt.dense_resolution}, {"maximal_guard", popt.maximal_guard},
                {"family_spread", popt.family_spread},    {"link_spread", popt.link_spread},
                {"tail_tolerance", opt.tail_tolerance}};
  rep.columns = {"lp", "maximal_lp", "seminorm", "lp_over_maximal", "maximal_over_seminorm", "lp_over_seminorm"};
  const auto bstats = bump_stats<D>(params.p, reference_resolution<D>());

  const auto add_row = [&](const std::string& label, double lp, double mm, const SeminormReport& sem,
                           const ScaleProfile& prof) {
    rep.labels.push_back(label);
    rep.rows.push_back({lp, mm, sem.value, lp / mm, mm / sem.value, lp / sem.value});
    rep.tails.push_back(sem);
    rep.profiles[label] = prof;
  };

  const auto dense_entry = [&](const std::string& label, const GridFunction<D>& g) {
    const int k_max = g.resolution() - opt.layer_guard;
    const auto prof = scale_profile(g, opt.k_min, k_max, params, opt.layer_guard);
    const auto sem = discrete_seminorm(prof, params, function_stats(g, params.p), opt.tail_tolerance, false);
    const auto mm = maximal_modulus(g, opt.k_min, k_max, opt.layer_guard);
    add_row(label, lp_norm(g, params.p), lp_norm(mm, params.p), sem, prof);
  };

  {
    AtomicFunction<D> unit;
    unit.atoms.push_back({DyadicCube<D>{0, {}}, 1.0});
    dense_entry("bump", render(unit, popt.dense_resolution));
  }

  std::vector<double> family;
  for (int N : popt.N_list) {
    const int n = 2 * N + opt.n_offset;
    const auto f = build_f<D>(N, n, params);
    const auto meas = detail::measure_atomic(f, params, opt, bstats, n + opt.resolution_guard);
    const int mm_res = n + popt.maximal_guard;
    AtomicField<D> coarse(f, mm_res, popt.maximal_guard);
    const auto [origin, extent] = atom_domain(f, mm_res);
    const auto mm = maximal_modulus(coarse, origin, extent, opt.k_min, mm_res - opt.layer_guard, opt.layer_guard);
    const double lp = function_stats(f, bstats).lp;
    add_row("f_N" + std::to_string(N), lp, lp_norm(mm, params.p), meas.seminorm, meas.profile);
    family.push_back(lp / meas.seminorm.value);
  }

  for (int i = 0; i < popt.random_count; ++i)
    dense_entry("random_" + std::to_string(i), random_smooth<D>(popt.seed, i, popt.dense_resolution));

  const auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
  };
  if (!family.empty()) {
    const double s = spread(family);
    rep.verdicts.push_back({"family lp/seminorm spread", s < popt.family_spread,
                            "max/min " + detail::fmt(s) + " < " + detail::fmt(popt.family_spread)});
  }
  const auto l1 = rep.column("lp_over_maximal");
  const auto l2 = rep.column("maximal_over_seminorm");
  const bool finite = std::all_of(l1.begin(), l1.end(), [](double v) { return std::isfinite(v) && v > 0; }) &&
                      std::all_of(l2.begin(), l2.end(), [](double v) { return std::isfinite(v) && v > 0; });
  rep.verdicts.push_back({"links finite", finite, "every chain link is a finite positive number"});
  if (finite) {
    rep.verdicts.push_back({"lp/maximal spread", spread(l1) <= popt.link_spread,
                            "max/min " + detail::fmt(spread(l1)) + " <= " + detail::fmt(popt.link_spread)});
    rep.verdicts.push_back({"maximal/seminorm spread", spread(l2) <= popt.link_spread,
                            "max/min " + detail::fmt(spread(l2)) + " <= " + detail::fmt(popt.link_spread)});
  }
  detail::tail_verdict(rep);
  return rep;
}

}  // namespace zbesov
