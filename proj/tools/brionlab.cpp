// brionlab: polytope transforms, oracle checks and circle probes from the shell.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "brionlab/cli.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("BRIONLAB_LOG");
  if (env == nullptr) return 1;
  const std::string s = env;
  if (s == "quiet" || s == "0") return 0;
  if (s == "debug" || s == "2") return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace brionlab::cli;
  CLI::App app{"Fourier-Laplace transforms of convex polytopes"};
  app.set_version_flag("--version", std::string(BRIONLAB_VERSION));
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "json";
  int n_max = -1;

  const std::map<std::string, Command> commands = {
      {"validate", Command::validate},         {"transform", Command::transform},
      {"verify", Command::verify},             {"circle-scan", Command::circle_scan},
      {"lemma-check", Command::lemma_check},   {"dominant-probe", Command::dominant_probe},
      {"bessel-table", Command::bessel_table}};
  const std::map<std::string, std::string> help = {
      {"validate", "load a polytope and report its combinatorics and cone triangulation"},
      {"transform", "evaluate the transform at --z points"},
      {"verify", "compare against box, simplex and Monte Carlo oracles"},
      {"circle-scan", "minimum modulus on circles z(t) for each alpha"},
      {"lemma-check", "Bessel coefficient sums against the FFT of F(t)"},
      {"dominant-probe", "scaled high-order coefficients against the dominant-vertex limit"},
      {"bessel-table", "series against integral representation of J_n"}};

  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--polytope", cfg.polytope_path, "polytope JSON file");
    sub->add_option("--out", cfg.output_path, "output file (default stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--alpha", cfg.alpha_text, "start:stop:step or comma list like 1,0.5+2i");
    sub->add_option("--plane", cfg.plane_text, "two vectors \"v1;v2\", comma separated coordinates");
    sub->add_option("--z", cfg.z_text, "points separated by ';', coordinates by ','");
    sub->add_option("--n-max", n_max, "largest coefficient index (default N + 40)");
    sub->add_option("--t-grid", cfg.t_grid, "samples per circle")->capture_default_str();
    sub->add_option("--fft-grid", cfg.fft_grid, "initial FFT size")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str();
    sub->callback([&cfg, c = cmd] { cfg.command = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  cfg.format = format == "csv" ? Format::csv : Format::json;
  if (n_max >= 0) cfg.n_max = n_max;

  const int verbosity = log_level();
  try {
    const Report report = run(cfg);
    const std::string text = serialize(report, cfg.format);
    if (cfg.output_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.output_path, std::ios::binary);
      if (!out) throw brionlab::Error("cannot write '" + cfg.output_path + "'");
      out << text;
    }
    if (verbosity >= 1 && !report.pass) std::cerr << "brionlab: " << report.command << " check failed\n";
    if (verbosity >= 2) std::cerr << "brionlab: " << report.rows.size() << " rows\n";
    return report.pass ? 0 : 1;
  } catch (const std::exception& e) {
    if (verbosity >= 1) std::cerr << "brionlab: error: " << e.what() << "\n";
    return 2;
  }
}
