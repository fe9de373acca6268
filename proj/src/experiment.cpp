#include "convbody/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "convbody/constants.hpp"
#include "convbody/errors.hpp"
#include "convbody/parallel.hpp"

namespace convbody {

namespace {

constexpr std::uint64_t kDirectionStreamTweak = 0xC3A5C85C97CB3127ull;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
    out.flush();
  }
};

const char* to_string(Command c) {
  switch (c) {
    case Command::meanwidth: return "meanwidth";
    case Command::radial: return "radial";
    case Command::converge: return "converge";
    case Command::cube_check: return "cube-check";
    default: return "rate";
  }
}

const char* to_string(MethodSelect m) {
  switch (m) {
    case MethodSelect::automatic: return "auto";
    case MethodSelect::mc: return "mc";
    default: return "deterministic";
  }
}

void validate(const ExperimentConfig& cfg) {
  if (!cfg.seed_set) throw std::invalid_argument("config: seed must be given explicitly");
  if (cfg.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  if (cfg.out_path.empty()) throw std::invalid_argument("config: output path required");
  if (cfg.command != Command::meanwidth) {
    if (cfg.deltas.empty()) throw std::invalid_argument("config: this command needs --deltas");
    for (double d : cfg.deltas)
      if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("config: deltas must lie in (0, 1)");
  }
  if (cfg.n_directions == 0) throw std::invalid_argument("config: dirs must be >= 1");
  if (cfg.samples < 2) throw std::invalid_argument("config: samples must be >= 2");
}

std::vector<Direction> experiment_directions(std::size_t n, std::size_t count,
                                             std::uint64_t seed) {
  SphereSample s = sample_sphere(n, count, seed ^ kDirectionStreamTweak, false);
  std::vector<Direction> dirs;
  dirs.reserve(count);
  for (const Vec& u : s.directions) dirs.emplace_back(u);
  return dirs;
}

// Directions for the cube homothety check, restricted to the region where
// the intersection box stays proper for every requested delta. The draw is
// prefix-stable, so the accepted set is deterministic in the seed.
std::vector<Direction> cube_check_directions(std::size_t n, std::size_t count,
                                             std::uint64_t seed, double delta_min) {
  std::vector<Direction> accepted;
  std::size_t draw = std::max<std::size_t>(4 * count, 64);
  while (true) {
    SphereSample s = sample_sphere(n, draw, seed ^ kDirectionStreamTweak, false);
    accepted.clear();
    for (const Vec& u : s.directions) {
      double ratio = linf_norm(u) / l1_norm(u);
      if (static_cast<double>(n) * (1.0 - delta_min) * ratio <= 0.98) {
        accepted.emplace_back(u);
        if (accepted.size() == count) return accepted;
      }
    }
    draw *= 2;
    if (draw > (1u << 22))
      throw std::invalid_argument(
          "cube-check: could not find enough directions inside the validity region; "
          "raise the smallest delta");
  }
}

struct RowResult {
  std::vector<std::string> cells;
  bool failed = false;
};

int run_radial_like(const ExperimentConfig& cfg, const BodyDescriptor& body, CsvWriter& csv) {
  const std::size_t n = body.dim();
  const bool cube_mode = cfg.command == Command::cube_check;

  double side = 0.0;
  if (cube_mode) {
    const Box* b = std::get_if<Box>(&body.shape());
    if (!b) throw std::invalid_argument("cube-check: body must be a box (cube)");
    side = b->half_sides[0];
    for (double s : b->half_sides)
      if (s != side) throw std::invalid_argument("cube-check: box must have equal half-sides");
  }

  std::vector<Direction> dirs =
      cube_mode ? cube_check_directions(n, cfg.n_directions, cfg.seed,
                                        *std::min_element(cfg.deltas.begin(), cfg.deltas.end()))
                : experiment_directions(n, cfg.n_directions, cfg.seed);

  std::vector<std::string> header;
  for (std::size_t j = 0; j < n; ++j) header.push_back("x" + std::to_string(j));
  if (cube_mode) {
    header.insert(header.end(), {"delta", "rho_times_l1norm", "constant_estimate", "status"});
  } else {
    header.insert(header.end(), {"delta", "lambda_star", "rho", "T", "status"});
  }
  csv.row(header);

  // One sample and one M* estimate shared by every solve (common random
  // numbers across deltas and directions).
  std::optional<SphereSample> shared;
  RadialOptions opts;
  opts.method = cfg.method;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  opts.jobs = 1;
  bool mc_path = cfg.method == MethodSelect::mc ||
                 (cfg.method == MethodSelect::automatic &&
                  !std::holds_alternative<Ball>(body.shape()) &&
                  !std::holds_alternative<Box>(body.shape()));
  if (mc_path) {
    shared.emplace(sample_sphere(n, cfg.samples, cfg.seed, true));
    opts.shared_sample = &*shared;
    opts.mstar_hint = mean_width_mc(body, *shared, McOptions{cfg.jobs, {}}).value;
  }

  bool any_failed = false;
  const double nan = std::nan("");
  for (double delta : cfg.deltas) {
    std::vector<RowResult> rows(dirs.size());
    parallel_for(dirs.size(), cfg.jobs, [&](std::size_t i) {
      RowResult& r = rows[i];
      for (double c : dirs[i].coords()) r.cells.push_back(fmt17(c));
      r.cells.push_back(fmt17(delta));
      try {
        RadialSolve solve = radial_lambda(body, dirs[i], delta, opts);
        double rho = normalized_radial(solve);
        if (cube_mode) {
          double l1 = l1_norm(dirs[i].coords());
          double closed = side * cube_radial_closed(n, dirs[i].coords(), delta) * l1;
          r.cells.push_back(fmt17(rho * l1));
          r.cells.push_back(fmt17(closed));
        } else {
          double t = limiting_radius(solve.mstar_body, n) / rho;
          r.cells.push_back(fmt17(solve.lambda_star));
          r.cells.push_back(fmt17(rho));
          r.cells.push_back(fmt17(t));
        }
        r.cells.push_back("ok");
      } catch (const std::exception&) {
        std::size_t want = n + (cube_mode ? 3 : 4);
        while (r.cells.size() < want) r.cells.push_back(fmt17(nan));
        r.cells.push_back("failed");
        r.failed = true;
      }
    });
    for (const RowResult& r : rows) {
      csv.row(r.cells);
      any_failed = any_failed || r.failed;
    }
  }
  return any_failed ? 3 : 0;
}

int run_meanwidth(const ExperimentConfig& cfg, const BodyDescriptor& body, CsvWriter& csv) {
  csv.row({"method", "value", "std_error", "n_samples", "status"});
  MeanWidthEstimate est;
  bool deterministic_ok = std::holds_alternative<Ball>(body.shape()) ||
                          std::holds_alternative<Box>(body.shape());
  bool use_det = cfg.method == MethodSelect::deterministic ||
                 (cfg.method == MethodSelect::automatic && deterministic_ok);
  if (use_det && !deterministic_ok)
    throw std::invalid_argument("meanwidth: no deterministic path for this body");
  if (use_det) {
    if (const Ball* ball = std::get_if<Ball>(&body.shape())) {
      est.value = ball->radius;  // constant support
      est.method = MwMethod::lens_quadrature;
    } else {
      const Box& box = std::get<Box>(body.shape());
      est = box_mean_width_closed(box.half_sides, Vec(body.dim(), 0.0));
    }
    est.std_error = 0.0;
    est.n_samples = 0;
  } else {
    SphereSample sample = sample_sphere(body.dim(), cfg.samples, cfg.seed, true);
    est = mean_width_mc(body, sample, McOptions{cfg.jobs, {}});
  }
  csv.row({to_string(est.method), fmt17(est.value), fmt17(est.std_error),
           std::to_string(est.n_samples), "ok"});
  return 0;
}

int run_converge(const ExperimentConfig& cfg, const BodyDescriptor& body, CsvWriter& csv) {
  csv.row({"delta", "sup_dev", "n_directions", "method", "status"});
  std::vector<Direction> dirs = experiment_directions(body.dim(), cfg.n_directions, cfg.seed);
  RadialOptions opts;
  opts.method = cfg.method;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  opts.jobs = cfg.jobs;
  bool any_failed = false;
  for (double delta : cfg.deltas) {
    try {
      DeviationReport rep = deviation_T(body, delta, dirs, opts);
      csv.row({fmt17(delta), fmt17(rep.sup_dev), std::to_string(rep.n_directions),
               to_string(rep.mw_method), "ok"});
    } catch (const std::exception&) {
      csv.row({fmt17(delta), "nan", std::to_string(dirs.size()), "-", "failed"});
      any_failed = true;
    }
  }
  return any_failed ? 3 : 0;
}

int run_rate(const ExperimentConfig& cfg, const BodyDescriptor& body, CsvWriter& csv) {
  csv.row({"slope", "intercept", "r_squared", "n_points", "status"});
  RateOptions opts;
  opts.radial.method = cfg.method;
  opts.radial.samples = cfg.samples;
  opts.radial.seed = cfg.seed;
  opts.radial.jobs = cfg.jobs;
  opts.n_directions = cfg.n_directions;
  opts.direction_seed = cfg.seed ^ kDirectionStreamTweak;
  try {
    RateFit fit = rate_fit(body, cfg.deltas, opts);
    csv.row({fmt17(fit.slope), fmt17(fit.intercept), fmt17(fit.r_squared),
             std::to_string(fit.deltas.size()), fit.decaying ? "ok" : "ok-nondecaying"});
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    csv.row({"nan", "nan", "nan", "0", "failed"});
    return 3;
  }
  return 0;
}

}  // namespace

Command command_from_name(const std::string& name) {
  if (name == "meanwidth") return Command::meanwidth;
  if (name == "radial") return Command::radial;
  if (name == "converge") return Command::converge;
  if (name == "cube-check") return Command::cube_check;
  if (name == "rate") return Command::rate;
  throw std::invalid_argument("unknown command: " + name);
}

MethodSelect method_from_name(const std::string& name) {
  if (name == "auto") return MethodSelect::automatic;
  if (name == "mc") return MethodSelect::mc;
  if (name == "deterministic") return MethodSelect::deterministic;
  throw std::invalid_argument("unknown method: " + name);
}

int run(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    validate(cfg);
    BodyDescriptor body = body_from_json_text(cfg.body_json);
    CsvWriter csv(cfg.out_path);

    switch (cfg.command) {
      case Command::meanwidth: code = run_meanwidth(cfg, body, csv); break;
      case Command::radial:
      case Command::cube_check: code = run_radial_like(cfg, body, csv); break;
      case Command::converge: code = run_converge(cfg, body, csv); break;
      case Command::rate: code = run_rate(cfg, body, csv); break;
    }

    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["command"] = to_string(cfg.command);
    manifest["config"] = {
        {"body", nlohmann::json::parse(body_to_json_text(body))},
        {"deltas", cfg.deltas},
        {"dirs", cfg.n_directions},
        {"samples", cfg.samples},
        {"seed", cfg.seed},
        {"jobs", cfg.jobs},
        {"method", to_string(cfg.method)},
        {"out", cfg.out_path},
    };
    manifest["timings"] = {{"total_seconds", seconds}};
    std::ofstream mf(cfg.out_path + ".manifest.json", std::ios::binary);
    mf << manifest.dump(2) << '\n';
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
  return code;
}

}  // namespace convbody
