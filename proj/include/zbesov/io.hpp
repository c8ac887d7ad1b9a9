#pragma once

// File formats: grid manifests (JSON + raw little-endian float64), profile and
// distribution CSVs, atomic-function CSVs, and study reports.

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "zbesov/analysis.hpp"

namespace zbesov::io {

using json = nlohmann::ordered_json;

/// Shortest text that round-trips the double.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorCode::io_error, "write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Grid functions

/// Writes `<stem>.json` and `<stem>.bin`; samples are float64 little endian,
/// axis 0 slowest.
template <int D>
void write_grid(const std::filesystem::path& stem, const GridFunction<D>& f) {
  static_assert(std::endian::native == std::endian::little, "raw sample files assume a little-endian host");
  auto bin = stem;
  bin += ".bin";
  auto manifest = stem;
  manifest += ".json";
  {
    std::ofstream out(bin, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::io_error, "cannot write " + bin.string());
    out.write(reinterpret_cast<const char*>(f.samples().data()),
              static_cast<std::streamsize>(f.samples().size() * sizeof(double)));
  }
  json j;
  j["d"] = D;
  j["m"] = f.resolution();
  j["origin"] = f.origin();
  j["extent"] = f.extent();
  j["samples_file"] = bin.filename().string();
  write_text(manifest, j.dump(2) + "\n");
}

template <int D>
GridFunction<D> read_grid(const std::filesystem::path& manifest) {
  const json j = json::parse(read_text(manifest));
  require(j.at("d").get<int>() == D, ErrorCode::invalid_argument, "manifest dimension mismatch");
  const int m = j.at("m").get<int>();
  const auto origin = j.at("origin").get<std::array<std::int64_t, D>>();
  const auto extent = j.at("extent").get<std::array<std::int64_t, D>>();
  const auto bin = manifest.parent_path() / j.at("samples_file").get<std::string>();
  std::size_t count = 1;
  for (auto e : extent) {
    require(e > 0, ErrorCode::invalid_argument, "extent must be positive");
    count *= static_cast<std::size_t>(e);
  }
  std::vector<double> s(count);
  std::ifstream in(bin, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot read " + bin.string());
  in.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(count * sizeof(double)));
  require(static_cast<std::size_t>(in.gcount()) == count * sizeof(double), ErrorCode::io_error,
          "sample file is shorter than the manifest says");
  return GridFunction<D>(m, origin, extent, std::move(s));
}

// ---------------------------------------------------------------------------
// Profiles and distributions

/// Columns k, L_k, L_k^q, tail_flag. The flag marks the edge layer of a side
/// whose attested tail alone exceeds the tolerance.
inline std::string profile_csv(const ScaleProfile& profile, const Params& params,
                               const SeminormReport* report = nullptr,
                               double tolerance = default_tail_tolerance) {
  const auto side_flag = [&](double tail) {
    if (!report || report->q_sum <= 0.0) return false;
    return std::pow(1.0 + tail / report->q_sum, 1.0 / params.q) - 1.0 > tolerance;
  };
  std::string out = "k,L_k,L_k^q,tail_flag\n";
  for (int k = profile.k_min; k <= profile.k_max; ++k) {
    bool flag = false;
    if (report && k == profile.k_min) flag = side_flag(report->coarse_tail);
    if (report && k == profile.k_max) flag = flag || side_flag(report->fine_tail);
    out += std::to_string(k) + "," + num(profile.at(k)) + "," + num(std::pow(profile.at(k), params.q)) + "," +
           (flag ? "1" : "0") + "\n";
  }
  return out;
}

inline ScaleProfile parse_profile_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  require(line.rfind("k,L_k", 0) == 0, ErrorCode::invalid_argument, "not a profile CSV");
  std::vector<std::pair<int, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string k, v;
    std::getline(ls, k, ',');
    std::getline(ls, v, ',');
    rows.emplace_back(std::stoi(k), std::stod(v));
  }
  require(!rows.empty(), ErrorCode::invalid_argument, "empty profile");
  ScaleProfile p = ScaleProfile::zeros(rows.front().first, rows.back().first);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].first == p.k_min + static_cast<int>(i), ErrorCode::invalid_argument, "profile rows not contiguous");
    p[rows[i].first] = rows[i].second;
  }
  return p;
}

inline std::string distribution_csv(const StepDistribution& sd) {
  std::string out = "level,cumulative_mass\n";
  for (std::size_t i = 0; i < sd.levels.size(); ++i) out += num(sd.levels[i]) + "," + num(sd.masses[i]) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Atomic functions

/// First line `# {meta json}`, then `generation,index_0[,index_1],coefficient`.
template <int D>
std::string atomic_csv(const AtomicFunction<D>& f) {
  const auto& m = f.meta;
  json meta{{"kind", m.kind}, {"N", m.N}, {"n", m.n}, {"M", m.M}, {"T", m.T}, {"p", m.p}, {"q", m.q}, {"d", D}};
  std::string out = "# " + meta.dump() + "\n";
  out += D == 1 ? "generation,index_0,coefficient\n" : "generation,index_0,index_1,coefficient\n";
  for (const auto& a : f.atoms) {
    out += std::to_string(a.cube.k);
    for (int i = 0; i < D; ++i) out += "," + std::to_string(a.cube.index[i]);
    out += "," + num(a.coefficient) + "\n";
  }
  return out;
}

template <int D>
AtomicFunction<D> parse_atomic_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  require(line.rfind("# ", 0) == 0, ErrorCode::invalid_argument, "missing meta header");
  const json meta = json::parse(line.substr(2));
  require(meta.at("d").get<int>() == D, ErrorCode::invalid_argument, "atomic CSV dimension mismatch");
  AtomicFunction<D> f;
  f.meta = {meta.at("kind").get<std::string>(), meta.at("N").get<int>(),    meta.at("n").get<int>(),
            meta.at("M").get<int>(),            meta.at("T").get<int>(),    meta.at("p").get<double>(),
            meta.at("q").get<double>(),         meta.at("d").get<int>()};
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    Atom<D> a;
    std::getline(ls, cell, ',');
    a.cube.k = std::stoi(cell);
    for (int i = 0; i < D; ++i) {
      std::getline(ls, cell, ',');
      a.cube.index[i] = std::stoll(cell);
    }
    std::getline(ls, cell, ',');
    a.coefficient = std::stod(cell);
    f.atoms.push_back(a);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Study reports

inline json to_json(const SlopeFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"max_residual", f.max_residual}};
}

inline json to_json(const SeminormReport& r) {
  return {{"value", r.value},
          {"coarse_tail", r.coarse_tail},
          {"fine_tail", r.fine_tail},
          {"tail_fraction", r.tail_fraction},
          {"flagged", r.flagged},
          {"k_min", r.k_min},
          {"k_max", r.k_max}};
}

inline json to_json(const ConcentrationReport& c) {
  const auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"M", c.M},
          {"peak", c.peak},
          {"left_rate", finite_or_null(c.left_rate)},
          {"right_rate", finite_or_null(c.right_rate)},
          {"nu", finite_or_null(c.nu)},
          {"pass", c.pass}};
}

inline json to_json(const StudyReport& rep) {
  json j;
  j["study"] = rep.study;
  j["params"] = {{"p", rep.params.p}, {"q", rep.params.q}, {"d", rep.params.d}};
  j["config"] = json::object();
  for (const auto& [k, v] : rep.config) j["config"][k] = v;
  j["columns"] = rep.columns;
  if (!rep.labels.empty()) j["labels"] = rep.labels;
  j["rows"] = rep.rows;
  j["slopes"] = json::array();
  for (const auto& s : rep.slopes)
    j["slopes"].push_back({{"name", s.name}, {"fit", to_json(s.fit)}, {"target", s.target}, {"tolerance", s.tolerance}});
  j["tails"] = json::array();
  for (const auto& t : rep.tails) j["tails"].push_back(to_json(t));
  if (!rep.concentration.empty()) {
    j["concentration"] = json::array();
    for (const auto& c : rep.concentration) j["concentration"].push_back(to_json(c));
  }
  j["verdicts"] = json::array();
  for (const auto& v : rep.verdicts) j["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["all_pass"] = rep.pass();
  return j;
}

inline std::string study_csv(const StudyReport& rep) {
  std::string out;
  if (!rep.labels.empty()) out += "label,";
  for (std::size_t i = 0; i < rep.columns.size(); ++i) out += (i ? "," : "") + rep.columns[i];
  out += "\n";
  for (std::size_t r = 0; r < rep.rows.size(); ++r) {
    if (!rep.labels.empty()) out += rep.labels[r] + ",";
    for (std::size_t i = 0; i < rep.rows[r].size(); ++i) out += (i ? "," : "") + num(rep.rows[r][i]);
    out += "\n";
  }
  return out;
}

inline json error_record(const Error& e) { return {{"error", to_string(e.code())}, {"message", e.what()}}; }

}  // namespace zbesov::io
