#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "edgpe/dynamics.hpp"
#include "edgpe/ground_state.hpp"

namespace edgpe {

struct RunConfig {
  ModelParams params;
  Grid3D grid = Grid3D::cubic(64, 16.0);
  DipolarOptions dipolar;
  SolverConfig solver;
  PropagationConfig propagation;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "edgpe-out";
};

// Accepts a full run configuration {"params", "grid", "solver", "propagation",
// "seed", "output_dir"} or a bare parameter object {"lambda1", ...}. Missing
// fields take their defaults (L = 16, n = 64 per axis). Throws ConfigError
// listing every violation found.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON of a configuration (used in run manifests).
std::string dump_config(const RunConfig& config);

}  // namespace edgpe
