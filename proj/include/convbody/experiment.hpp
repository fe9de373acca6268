#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "convbody/bodies.hpp"
#include "convbody/convolution.hpp"

namespace convbody {

// Batch experiment driver. Every run writes a CSV data file at `out` and a
// JSON manifest (config echo, version, timings) at `out` + ".manifest.json".
// CSV floats carry 17 significant digits and reruns are byte-identical for a
// fixed config, independent of the worker count.
//
// Exit codes: 0 success, 2 invalid config, 3 numerical failure (partial CSV
// is flushed with failing rows marked in the status column).

enum class Command { meanwidth, radial, converge, cube_check, rate };

struct ExperimentConfig {
  std::string body_json;       // schema documented in bodies.hpp
  Command command = Command::meanwidth;
  std::vector<double> deltas;  // each in (0, 1)
  std::size_t n_directions = 16;
  std::size_t samples = 1u << 16;
  std::uint64_t seed = 0;
  bool seed_set = false;       // seeds are always explicit
  int jobs = 1;
  MethodSelect method = MethodSelect::automatic;
  std::string out_path;
};

Command command_from_name(const std::string& name);
MethodSelect method_from_name(const std::string& name);

int run(const ExperimentConfig& config);

}  // namespace convbody
