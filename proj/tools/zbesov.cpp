#include <iostream>

#include <CLI11.hpp>

#include "zbesov/cli.hpp"

int main(int argc, char** argv) {
  zbesov::cli::RunConfig c;
  CLI::App app{"Zero-smoothness Besov seminorms and Lorentz norms on dyadic grids"};
  app.add_option("command", c.command, "bump-norms | study-qlp | study-qgp | study-pp | validate")
      ->required()
      ->check(CLI::IsMember(zbesov::cli::commands()));
  app.add_option("--p", c.p, "integrability exponent");
  app.add_option("--q", c.q, "secondary exponent");
  app.add_option("--d", c.d, "dimension (1 or 2)");
  app.add_option("--N", c.N_list, "values of N (study-qlp, study-pp family)")->delimiter(',');
  app.add_option("--T", c.T_list, "numbers of blocks (study-qgp)")->delimiter(',');
  app.add_option("--M", c.M_list, "single-block scales for the concentration check")->delimiter(',');
  app.add_option("--n-offset", c.n_offset, "n = 2N + offset");
  app.add_option("--delta-scale", c.delta_scale, "scale separation between blocks");
  app.add_option("--m", c.m, "resolution of dense grids");
  app.add_option("--guard", c.guard, "resolution minus finest atom generation");
  app.add_option("--kmin", c.k_min, "coarsest generation");
  app.add_option("--kmax", c.k_max, "finest generation");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--seed", c.seed, "seed for randomized suites");
  app.add_flag("--plots", c.plots, "write SVG plots");
  CLI11_PARSE(app, argc, argv);

  const auto res = zbesov::cli::run(c);
  if (res.exit_code == 2) {
    std::cerr << res.report.dump() << "\n";
  } else {
    for (const auto& r : res.report["reports"])
      for (const auto& v : r["verdicts"])
        std::cout << (v["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << r["study"].get<std::string>() << ": "
                  << v["name"].get<std::string>() << " (" << v["detail"].get<std::string>() << ")\n";
  }
  return res.exit_code;
}
