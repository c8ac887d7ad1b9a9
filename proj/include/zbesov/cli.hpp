#pragma once

// Batch front end: resolves a RunConfig, runs one command and writes
// report.json, study.csv, profile_<id>.csv and optional SVG plots.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zbesov/io.hpp"
#include "zbesov/plot.hpp"
#include "zbesov/validate.hpp"

namespace zbesov::cli {

struct RunConfig {
  std::string command;
  double p = 2.0;
  double q = 2.0;
  int d = 1;
  std::vector<int> N_list;
  std::vector<int> T_list;
  std::vector<int> M_list;
  std::optional<int> n_offset;  // n = 2N + n_offset
  int delta_scale = 3;
  std::optional<int> m;         // dense resolution (bump, random suite)
  std::optional<int> guard;     // resolution minus finest atom generation
  std::optional<int> k_min;
  std::optional<int> k_max;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  bool plots = false;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"bump-norms", "study-qlp", "study-qgp", "study-pp", "validate"};
  return c;
}

struct RunResult {
  int exit_code = 0;
  io::json report;
};

namespace detail {

inline void apply(StudyOptions& o, const RunConfig& c) {
  if (c.guard) o.resolution_guard = *c.guard;
  if (c.k_min) o.k_min = *c.k_min;
  if (c.k_max) o.k_max = c.k_max;
  if (c.n_offset) o.n_offset = *c.n_offset;
}

inline void write_profiles(const std::filesystem::path& dir, const StudyReport& rep) {
  for (std::size_t i = 0; i < rep.tails.size(); ++i) {
    std::string id;
    if (!rep.labels.empty()) id = rep.labels[i];
    else if (rep.study == "study-qlp") id = "N" + io::num(rep.rows[i][0]);
    else if (rep.study == "study-qgp") id = "T" + io::num(rep.rows[i][0]);
    else if (rep.study == "concentration") id = "single_M" + io::num(rep.rows[i][0]);
    const auto it = rep.profiles.find(id);
    if (it == rep.profiles.end()) continue;
    io::write_text(dir / ("profile_" + id + ".csv"), io::profile_csv(it->second, rep.params, &rep.tails[i]));
  }
  for (const auto& [id, prof] : rep.profiles)
    if (id.rfind("block_", 0) == 0) io::write_text(dir / ("profile_" + id + ".csv"), io::profile_csv(prof, rep.params));
}

inline plot::Series profile_series(const std::string& name, const ScaleProfile& p) {
  plot::Series s{name, {}, {}};
  for (int k = p.k_min; k <= p.k_max; ++k) {
    s.x.push_back(k);
    s.y.push_back(p.at(k));
  }
  return s;
}

inline void write_plots(const std::filesystem::path& dir, const StudyReport& rep) {
  if (rep.study == "study-qlp") {
    plot::Series s{"R(N)", rep.column("N"), rep.column("ratio")};
    io::write_text(dir / "ratio_vs_N.svg", plot::svg({s}, {"Lorentz / seminorm ratio", "N", "R"}));
  } else if (rep.study == "study-qgp") {
    const auto T = rep.column("T");
    io::write_text(dir / "norms_vs_T.svg",
                   plot::svg({{"seminorm", T, rep.column("seminorm")}, {"lorentz", T, rep.column("lorentz")}},
                             {"Norms of the multiblock function", "T", "norm"}));
  }
  std::vector<plot::Series> ps;
  for (const auto& [id, prof] : rep.profiles) ps.push_back(profile_series(id, prof));
  if (ps.size() > 6) ps.resize(6);
  if (!ps.empty())
    io::write_text(dir / ("profiles_" + rep.study + ".svg"),
                   plot::svg(ps, {"Scale profiles", "k", "L_k", false, true}));
}

template <int D>
StudyReport bump_norms(const RunConfig& c) {
  const Params params{c.p, c.q, D};
  params.validate();
  const int m = c.m.value_or(reference_resolution<D>());
  const int k_min = c.k_min.value_or(default_k_min);
  const int k_max = c.k_max.value_or(m - default_guard);
  AtomicFunction<D> unit;
  unit.atoms.push_back({DyadicCube<D>{0, {}}, 1.0});
  const auto g = render(unit, m);
  const auto bs = bump_stats<D>(params.p, m);
  const auto prof = scale_profile(g, k_min, k_max, params);
  const auto sem = discrete_seminorm(prof, params, function_stats(g, params.p), default_tail_tolerance, false);
  const double lor = lorentz_norm(rearrangement(g), params.p, params.q);
  const double mm = lp_norm(maximal_modulus(g, k_min, k_max), params.p);

  StudyReport rep;
  rep.study = "bump-norms";
  rep.params = params;
  rep.config = {{"m", m}, {"k_min", k_min}, {"k_max", k_max}};
  rep.columns = {"l1", "lp", "sup", "grad_sup", "grad_lp", "lorentz", "seminorm", "maximal_lp"};
  rep.labels = {"bump"};
  rep.rows.push_back({bs.l1, bs.lp, bs.sup, bs.grad_sup, bs.grad_lp, lor, sem.value, mm});
  rep.tails.push_back(sem);
  rep.profiles["bump"] = prof;
  zbesov::detail::tail_verdict(rep);
  return rep;
}

inline void check_seeded(const RunConfig& c) {
  require(c.seed.has_value(), ErrorCode::invalid_argument, c.command + " draws random functions and needs --seed");
}

template <int D>
std::vector<StudyReport> dispatch(const RunConfig& c) {
  const Params params{c.p, c.q, D};
  if (c.command == "bump-norms") return {bump_norms<D>(c)};
  if (c.command == "study-qlp") {
    StudyOptions o;
    apply(o, c);
    return {study_qlp<D>(params, c.N_list.empty() ? std::vector<int>{4, 6, 8, 10} : c.N_list, o)};
  }
  if (c.command == "study-qgp") {
    QgpOptions o;
    apply(o.base, c);
    std::vector<StudyReport> out{study_qgp<D>(params, c.T_list.empty() ? std::vector<int>{1, 2, 3, 4} : c.T_list,
                                              c.delta_scale, o)};
    StudyOptions so;
    apply(so, c);
    out.push_back(concentration_study<D>(params, c.M_list.empty() ? std::vector<int>{4, 7} : c.M_list, so));
    return out;
  }
  if (c.command == "study-pp") {
    check_seeded(c);
    PpOptions o;
    apply(o.base, c);
    if (!c.N_list.empty()) o.N_list = c.N_list;
    if (c.m) o.dense_resolution = *c.m;
    o.seed = *c.seed;
    return {study_pp<D>(params, o)};
  }
  fail(ErrorCode::invalid_argument, "unknown command " + c.command);
}

}  // namespace detail

/// Runs one command. Exit code 0 iff every verdict passes; 1 on a failed
/// verdict; 2 on an error (with an error record in report.json).
inline RunResult run(const RunConfig& c) {
  RunResult res;
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  try {
    require(!ec, ErrorCode::io_error, "cannot create " + c.out.string());
    std::vector<StudyReport> reps;
    if (c.command == "validate") {
      detail::check_seeded(c);
      reps.push_back(validation_report(*c.seed));
    } else if (c.d == 1) {
      reps = detail::dispatch<1>(c);
    } else if (c.d == 2) {
      reps = detail::dispatch<2>(c);
    } else {
      fail(ErrorCode::invalid_parameters, "d must be 1 or 2");
    }
    io::json j;
    j["command"] = c.command;
    j["resolved"] = {{"p", c.p}, {"q", c.q}, {"d", c.d}, {"delta_scale", c.delta_scale}};
    if (c.seed) j["resolved"]["seed"] = *c.seed;
    j["reports"] = io::json::array();
    bool pass = true;
    for (const auto& r : reps) {
      j["reports"].push_back(io::to_json(r));
      pass = pass && r.pass();
      detail::write_profiles(c.out, r);
      if (c.plots) detail::write_plots(c.out, r);
    }
    j["all_pass"] = pass;
    if (!pass) {
      io::json failed = io::json::array();
      for (const auto& r : reps)
        for (const auto& v : r.verdicts)
          if (!v.pass) failed.push_back(r.study + ": " + v.name);
      j["error"] = {{"error", "verdict-failed"}, {"failed", failed}};
    }
    io::write_text(c.out / "report.json", j.dump(2) + "\n");
    std::string csv;
    for (const auto& r : reps) csv += (reps.size() > 1 ? "# " + r.study + "\n" : "") + io::study_csv(r);
    io::write_text(c.out / "study.csv", csv);
    res.report = std::move(j);
    res.exit_code = pass ? 0 : 1;
  } catch (const Error& e) {
    res.report = io::error_record(e);
    res.exit_code = 2;
    std::error_code ignored;
    if (std::filesystem::is_directory(c.out, ignored))
      io::write_text(c.out / "report.json", res.report.dump(2) + "\n");
  }
  return res;
}

}  // namespace zbesov::cli
