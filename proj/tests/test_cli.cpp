#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "convbody/experiment.hpp"

using namespace convbody;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) { return "cli_test_" + name; }

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.body_json = R"({"type":"box","dim":3,"half_sides":[1,1,1]})";
  cfg.seed = 7;
  cfg.seed_set = true;
  cfg.jobs = 1;
  return cfg;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("config validation maps to exit code 2") {
  ExperimentConfig cfg = base_config();
  cfg.command = Command::radial;
  cfg.deltas = {0.9};
  cfg.out_path = tmp_path("bad.csv");

  ExperimentConfig no_seed = cfg;
  no_seed.seed_set = false;
  CHECK(run(no_seed) == 2);

  ExperimentConfig bad_delta = cfg;
  bad_delta.deltas = {1.5};
  CHECK(run(bad_delta) == 2);

  ExperimentConfig no_delta = cfg;
  no_delta.deltas = {};
  CHECK(run(no_delta) == 2);

  ExperimentConfig bad_body = cfg;
  bad_body.body_json = R"({"type":"box","dim":3,"half_sides":[1,-1,1]})";
  CHECK(run(bad_body) == 2);

  ExperimentConfig bad_jobs = cfg;
  bad_jobs.jobs = 0;
  CHECK(run(bad_jobs) == 2);

  ExperimentConfig cube_on_ball = cfg;
  cube_on_ball.command = Command::cube_check;
  cube_on_ball.body_json = R"({"type":"ball","dim":3,"radius":1.0})";
  CHECK(run(cube_on_ball) == 2);
}

TEST_CASE("meanwidth command emits the deterministic row") {
  ExperimentConfig cfg = base_config();
  cfg.command = Command::meanwidth;
  cfg.out_path = tmp_path("mw.csv");
  CHECK(run(cfg) == 0);
  std::string csv = slurp(cfg.out_path);
  CHECK(csv.rfind("method,value,std_error,n_samples,status\n", 0) == 0);
  CHECK(csv.find("box-closed,1.5,0,0,ok") != std::string::npos);

  cfg.method = MethodSelect::mc;
  cfg.samples = 4096;
  cfg.out_path = tmp_path("mw_mc.csv");
  CHECK(run(cfg) == 0);
  std::string mc_csv = slurp(cfg.out_path);
  CHECK(mc_csv.find("mc,") != std::string::npos);
  double mc_value = std::stod(mc_csv.substr(mc_csv.find("mc,") + 3));
  CHECK(std::fabs(mc_value - 1.5) < 0.05);
}

TEST_CASE("radial command writes one row per direction and delta") {
  ExperimentConfig cfg = base_config();
  cfg.command = Command::radial;
  cfg.deltas = {0.9, 0.99};
  cfg.n_directions = 4;
  cfg.out_path = tmp_path("radial.csv");
  CHECK(run(cfg) == 0);
  std::string csv = slurp(cfg.out_path);
  CHECK(csv.rfind("x0,x1,x2,delta,lambda_star,rho,T,status\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + 2 * 4);
  CHECK(csv.find(",failed") == std::string::npos);
}

TEST_CASE("radial failures are marked and exit 3") {
  ExperimentConfig cfg = base_config();
  cfg.command = Command::radial;
  cfg.deltas = {0.3};  // no root along near-axis directions
  cfg.n_directions = 24;
  cfg.out_path = tmp_path("radial_fail.csv");
  int code = run(cfg);
  std::string csv = slurp(cfg.out_path);
  if (code == 3) {
    CHECK(csv.find(",failed") != std::string::npos);
    CHECK(csv.find(",ok") != std::string::npos);  // partial results flushed
  } else {
    CHECK(code == 0);  // every sampled direction happened to be valid
  }
}

TEST_CASE("converge command emits one row per delta") {
  ExperimentConfig cfg = base_config();
  cfg.body_json = R"({"type":"ball","dim":2,"radius":1.0})";
  cfg.command = Command::converge;
  cfg.deltas = {0.9, 0.99, 0.999};
  cfg.n_directions = 3;
  cfg.out_path = tmp_path("conv.csv");
  CHECK(run(cfg) == 0);
  std::string csv = slurp(cfg.out_path);
  CHECK(csv.rfind("delta,sup_dev,n_directions,method,status\n", 0) == 0);
  CHECK(count_lines(csv) == 4);
  CHECK(csv.find("lens-quadrature") != std::string::npos);
}

TEST_CASE("converge on the ball: sup_dev shrinks about 4x per halving of 1-delta") {
  ExperimentConfig cfg = base_config();
  cfg.body_json = R"({"type":"ball","dim":3,"radius":1.0})";
  cfg.command = Command::converge;
  for (int k = 4; k <= 9; ++k) cfg.deltas.push_back(1.0 - std::pow(2.0, -k));
  cfg.n_directions = 2;
  cfg.out_path = tmp_path("conv4x.csv");
  CHECK(run(cfg) == 0);
  std::istringstream lines(slurp(cfg.out_path));
  std::string line;
  std::getline(lines, line);  // header
  std::vector<double> sup_devs;
  while (std::getline(lines, line)) {
    std::size_t comma = line.find(',');
    sup_devs.push_back(std::stod(line.substr(comma + 1)));
  }
  REQUIRE(sup_devs.size() == 6);
  for (std::size_t i = 1; i < sup_devs.size(); ++i) {
    double ratio = sup_devs[i - 1] / sup_devs[i];
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
  }
}

TEST_CASE("rate command fits the ball schedule") {
  ExperimentConfig cfg = base_config();
  cfg.body_json = R"({"type":"ball","dim":2,"radius":1.0})";
  cfg.command = Command::rate;
  for (int k = 4; k <= 9; ++k) cfg.deltas.push_back(1.0 - std::pow(2.0, -k));
  cfg.n_directions = 2;
  cfg.out_path = tmp_path("rate.csv");
  CHECK(run(cfg) == 0);
  std::string csv = slurp(cfg.out_path);
  CHECK(csv.rfind("slope,intercept,r_squared,n_points,status\n", 0) == 0);
  double slope = std::stod(csv.substr(csv.find('\n') + 1));
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
}

TEST_CASE("cube-check emits the homothety constant") {
  ExperimentConfig cfg = base_config();
  cfg.command = Command::cube_check;
  cfg.deltas = {0.5, 0.9};
  cfg.n_directions = 6;
  cfg.out_path = tmp_path("cube.csv");
  CHECK(run(cfg) == 0);
  std::string csv = slurp(cfg.out_path);
  CHECK(csv.rfind("x0,x1,x2,delta,rho_times_l1norm,constant_estimate,status\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::size_t p = 0;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 7);
    CHECK(std::stod(cells[4]) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(std::stod(cells[5]) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(cells[6] == "ok");
    (void)p;
  }
}

TEST_CASE("runs are byte-identical across reruns and worker counts") {
  ExperimentConfig cfg = base_config();
  cfg.command = Command::cube_check;
  cfg.method = MethodSelect::mc;
  cfg.samples = 2048;
  cfg.deltas = {0.5, 0.9};
  cfg.n_directions = 6;

  cfg.out_path = tmp_path("det_a.csv");
  CHECK(run(cfg) == 0);
  cfg.out_path = tmp_path("det_b.csv");
  CHECK(run(cfg) == 0);
  cfg.jobs = 8;
  cfg.out_path = tmp_path("det_c.csv");
  CHECK(run(cfg) == 0);

  std::string a = slurp(tmp_path("det_a.csv"));
  CHECK(a == slurp(tmp_path("det_b.csv")));
  CHECK(a == slurp(tmp_path("det_c.csv")));
}

TEST_CASE("manifest echoes the configuration") {
  ExperimentConfig cfg = base_config();
  cfg.command = Command::meanwidth;
  cfg.out_path = tmp_path("manifest.csv");
  CHECK(run(cfg) == 0);
  nlohmann::json m = nlohmann::json::parse(slurp(cfg.out_path + ".manifest.json"));
  CHECK(m["command"] == "meanwidth");
  CHECK(m["config"]["seed"] == 7);
  CHECK(m["config"]["body"]["type"] == "box");
  CHECK(m.contains("timings"));
  CHECK(m["version"] == "0.1.0");
}

TEST_CASE("command and method name parsing") {
  CHECK(command_from_name("cube-check") == Command::cube_check);
  CHECK_THROWS_AS(command_from_name("nope"), std::invalid_argument);
  CHECK(method_from_name("mc") == MethodSelect::mc);
  CHECK_THROWS_AS(method_from_name("fast"), std::invalid_argument);
}
