#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgpe/config.hpp"
#include "edgpe/dynamics.hpp"
#include "edgpe/ground_state.hpp"
#include "edgpe/thresholds.hpp"

namespace edgpe {

using Json = nlohmann::ordered_json;

// Non-finite values become the strings "inf", "-inf" or "nan".
Json number(double x);
Json to_json(const ModelParams& p);
Json to_json(const EnergyBreakdown& e);
Json to_json(const ChemicalPotentialReport& c);
Json to_json(const QualitativeReport& q);
Json to_json(const GaussianAnsatz& g);
Json to_json(const MassWindow& w);
Json to_json(const GammaCurve& curve, const std::vector<std::string>& witnesses);
Json to_json(const ScanReport& scan);
Json to_json(const ThresholdReport& r);
Json to_json(const ScatterReport& r);
Json to_json(const GNConstant& g);
std::string trace_csv(const ConservationTrace& t);
std::string gamma_csv(const GammaCurve& curve);
std::string scan_csv(const ScanReport& scan);

// Smooth, localized random field: a sum of anisotropic Gaussian blobs with
// random plane-wave phases, all well inside the box.
WaveField random_smooth_field(const Grid3D& grid, std::mt19937_64& rng, int blobs = 3);

// "gaussian:sigma,tau,c" or a snapshot path.
WaveField load_initial_field(const std::string& spec, const Grid3D& grid);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// The quick invariant suite of every module; one line per check on `log`.
std::vector<VerifyCheck> run_verify(const RunConfig& config, std::ostream& log);

// Command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace edgpe
