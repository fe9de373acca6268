#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "convbody/constants.hpp"
#include "convbody/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"convbody: delta convolution bodies of convex symmetric bodies "
               "from support oracles (mean width estimation, radial solves, "
               "convergence and homothety experiments)"};
  app.set_version_flag("--version", convbody::kVersion);

  std::string body_path, cmd, method = "auto", out_path;
  std::vector<double> deltas;
  std::size_t dirs = 16, samples = 1u << 16;
  std::uint64_t seed = 0;
  int jobs = 1;

  app.add_option("--body", body_path, "Body specification (JSON file)")->required();
  app.add_option("--cmd", cmd, "meanwidth | radial | converge | cube-check | rate")->required();
  app.add_option("--deltas", deltas, "Comma-separated delta list, each in (0,1)")->delimiter(',');
  app.add_option("--dirs", dirs, "Number of experiment directions");
  app.add_option("--samples", samples, "Monte Carlo sample budget");
  app.add_option("--seed", seed, "RNG seed (required; runs are deterministic)")->required();
  app.add_option("--jobs", jobs, "Worker threads");
  app.add_option("--method", method, "auto | mc | deterministic");
  app.add_option("--out", out_path, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  convbody::ExperimentConfig cfg;
  try {
    std::ifstream f(body_path);
    if (!f) throw std::invalid_argument("cannot read body file: " + body_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    cfg.body_json = ss.str();
    cfg.command = convbody::command_from_name(cmd);
    cfg.method = convbody::method_from_name(method);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  cfg.deltas = deltas;
  cfg.n_directions = dirs;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.seed_set = true;
  cfg.jobs = jobs;
  cfg.out_path = out_path;

  return convbody::run(cfg);
}
