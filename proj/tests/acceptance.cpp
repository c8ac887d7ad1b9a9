// Acceptance run: one [PASS]/[FAIL] line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "zbesov/zbesov.hpp"

using namespace zbesov;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over the " + io::num(budget_s) + " s budget";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

const Verdict& verdict(const StudyReport& rep, const std::string& name) {
  for (const auto& v : rep.verdicts)
    if (v.name == name) return v;
  fail(ErrorCode::invalid_argument, "no verdict " + name);
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
  return io::read_text(a) == io::read_text(b);
}

}  // namespace

int main() {
  criterion(1, "sandwich delta <= delta_double <= 2 delta", 30, [] {
    const auto r = sandwich_check(1, 200);
    return Outcome{r.cases >= 100 && r.pass(),
                   std::to_string(r.cases) + " probes, worst violation " + fmt(r.observed)};
  });

  criterion(2, "closed-form Lorentz norm vs t-integration", 60, [] {
    const auto a = lorentz_check(1, 50, 10000);
    const auto b = lorentz_diagonal_check(1, 50);
    return Outcome{a.pass() && b.pass(), "max rel error " + fmt(a.observed) + " (<= 1e-4), q = p vs L_p " +
                                             fmt(b.observed) + " (<= 1e-10)"};
  });

  criterion(3, "q < p ratio growth, slope 1/3 +/- 0.10 and R increasing", 600, [] {
    StudyOptions o;
    o.n_offset = 4;
    const auto rep = study_qlp<1>(Params{3.0, 1.5, 1}, {4, 6, 8, 10}, o);
    const auto& s = verdict(rep, "ratio slope");
    const auto& inc = verdict(rep, "ratio increasing");
    std::string R;
    for (double v : rep.column("ratio")) R += (R.empty() ? "" : ",") + fmt(v);
    return Outcome{s.pass && inc.pass, "fitted slope " + fmt(rep.slopes[0].fit.slope) + ", R = " + R};
  });

  criterion(4, "p < q block growth, Lorentz slope 2/3 +/- 0.10, seminorm slope <= 1/3 + 0.15", 1200, [] {
    const auto rep = study_qgp<1>(Params{1.5, 3.0, 1}, {1, 2, 3, 4}, 3);
    const auto& l = verdict(rep, "lorentz slope");
    const auto& s = verdict(rep, "seminorm slope");
    return Outcome{l.pass && s.pass, "Lorentz slope " + fmt(rep.slopes[0].fit.slope) + ", seminorm slope " +
                                         fmt(rep.slopes[1].fit.slope)};
  });

  criterion(5, "single-block concentration, M = 4 and 7", 600, [] {
    const auto rep = concentration_study<1>(Params{1.5, 3.0, 1}, {4, 7});
    bool ok = verdict(rep, "nu agreement").pass;
    std::string d;
    for (const auto& c : rep.concentration) {
      ok = ok && c.pass;
      d += (d.empty() ? "" : "; ") + std::string("M=") + std::to_string(c.M) + " peak " + std::to_string(c.peak) +
           " rates " + fmt(c.left_rate) + "/" + fmt(c.right_rate);
    }
    return Outcome{ok, d};
  });

  criterion(6, "T = 2 combined profiles vs dense shared grid within 5%", 300, [] {
    const auto r = combination_check(Params{1.5, 3.0, 1}, 2, 3);
    return Outcome{r.pass(), "relative difference " + fmt(r.observed)};
  });

  criterion(7, "p = q = 2 chain links bounded, family spread < 2", 600, [] {
    PpOptions o;
    o.seed = 1;
    const auto rep = study_pp<1>(Params{2.0, 2.0, 1}, o);
    const bool ok = verdict(rep, "family lp/seminorm spread").pass && verdict(rep, "links finite").pass &&
                    verdict(rep, "lp/maximal spread").pass && verdict(rep, "maximal/seminorm spread").pass;
    return Outcome{ok, verdict(rep, "family lp/seminorm spread").detail + "; " +
                           verdict(rep, "lp/maximal spread").detail + "; " +
                           verdict(rep, "maximal/seminorm spread").detail};
  });

  criterion(8, "identical configs give byte-identical reports", 600, [] {
    const auto root = std::filesystem::temp_directory_path() / "zbesov_acceptance";
    std::filesystem::remove_all(root);
    bool ok = true;
    for (const std::string cmd : {"validate", "study-qlp"}) {
      cli::RunConfig c;
      c.command = cmd;
      c.seed = 1;
      if (cmd == "study-qlp") {
        c.p = 3.0;
        c.q = 1.5;
        c.N_list = {4, 6, 8, 10};
      }
      c.out = root / (cmd + "_1");
      const int e1 = cli::run(c).exit_code;
      c.out = root / (cmd + "_2");
      const int e2 = cli::run(c).exit_code;
      ok = ok && e1 != 2 && e1 == e2 && same_bytes(root / (cmd + "_1") / "report.json", c.out / "report.json") &&
           same_bytes(root / (cmd + "_1") / "study.csv", c.out / "study.csv");
    }
    return Outcome{ok, "validate and study-qlp, report.json and study.csv"};
  });

  criterion(9, "invariants: homogeneity, constants, rearrangement, dilation, disjoint additivity", 120, [] {
    std::string d;
    bool ok = true;
    const Params pr{2.0, 3.0, 1};

    // Homogeneity of the seminorm and the Lorentz norm.
    const auto g = random_smooth<1>(1, 0, 10);
    std::vector<double> scaled(g.samples().begin(), g.samples().end());
    for (auto& v : scaled) v *= -2.5;
    const GridFunction<1> h(g.resolution(), g.origin(), g.extent(), scaled);
    const double s0 = discrete_seminorm(scale_profile(g, -8, 6, pr), pr);
    const double s1 = discrete_seminorm(scale_profile(h, -8, 6, pr), pr);
    const double l0 = lorentz_norm(rearrangement(g), pr.p, pr.q), l1 = lorentz_norm(rearrangement(h), pr.p, pr.q);
    const double hom = std::max(std::abs(s1 / (2.5 * s0) - 1), std::abs(l1 / (2.5 * l0) - 1));
    ok = ok && hom <= 1e-10;
    d += "homogeneity " + fmt(hom);

    // Constants: every evaluation box inside the domain has zero deviation.
    const GridFunction<1> c(10, {0}, {1024}, std::vector<double>(1024, 3.7));
    double worst = 0.0;
    for (int k = 0; k <= 6; ++k)
      for (std::int64_t i = 1; i + 1 < (std::int64_t{1} << k); ++i)
        worst = std::max(worst, c.box_mad(evaluation_box(DyadicCube<1>{k, {i}}, 10)));
    worst = std::max(worst, delta(c, Point<1>{0.5}, 0.3));
    ok = ok && worst == 0.0;
    d += ", constants " + fmt(worst);

    // Rearrangement invariance: permuted samples give bit-identical norms.
    std::vector<double> perm(g.samples().begin(), g.samples().end());
    std::mt19937_64 rng(1);
    std::shuffle(perm.begin(), perm.end(), rng);
    const GridFunction<1> gp(g.resolution(), g.origin(), g.extent(), perm);
    const bool rearr = lorentz_norm(rearrangement(gp), pr.p, pr.q) == l0 &&
                       lorentz_norm(rearrangement(gp), 3.0, 1.5) == lorentz_norm(rearrangement(g), 3.0, 1.5);
    ok = ok && rearr;
    d += std::string(", rearrangement ") + (rearr ? "exact" : "differs");

    // Dilation shifts the profile.
    const Params qp{3.0, 1.5, 1};
    const auto f = build_f<1>(3, 8, qp);
    const auto pf = scale_profile(AtomicField<1>(f, 14), -2, 10, qp);
    const auto pg = scale_profile(AtomicField<1>(dilate(f, 3, qp.p), 11), -5, 7, qp);
    double dil = 0.0;
    for (int k = -2; k <= 10; ++k) dil = std::max(dil, std::abs(pg.at(k - 3) / pf.at(k) - 1));
    ok = ok && dil <= 1e-6;
    d += ", dilation " + fmt(dil);

    // Disjoint sequences are exactly additive.
    const std::vector<double> a{1.0, 0.3, 0.0, 0.0, 0.0}, b{0.0, 0.0, 2.0, 0.7, 0.1};
    const double eps = almost_disjoint_check(a, b, 1.7, {0, 1}, {2, 3, 4}).epsilon_observed;
    ok = ok && std::abs(eps) <= 1e-12;
    d += ", disjoint epsilon " + fmt(eps);
    return Outcome{ok, d};
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
