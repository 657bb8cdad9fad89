#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "edgpe/config.hpp"
#include "edgpe/errors.hpp"

namespace edgpe {

namespace {

using nlohmann::json;

std::string join_messages(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += "; ";
    out += x.code + ": " + x.message;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<Violation>& out) : out_(out) {}

  void schema(const std::string& msg) { out_.push_back({"schema", msg}); }

  void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items())
      if (!ok.count(k)) schema(where + ": unknown key \"" + k + "\"");
  }

  void number(const json& obj, const char* key, const std::string& where, double& dst) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      schema(where + "." + key + " must be a number");
      return;
    }
    dst = v.get<double>();
  }

  void integer(const json& obj, const char* key, const std::string& where, long long& dst) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      schema(where + "." + key + " must be an integer");
      return;
    }
    dst = v.get<long long>();
  }

  void boolean(const json& obj, const char* key, const std::string& where, bool& dst) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      schema(where + "." + key + " must be a boolean");
      return;
    }
    dst = v.get<bool>();
  }

  // A scalar applies to all three axes.
  template <class T>
  void triple(const json& obj, const char* key, const std::string& where, std::array<T, 3>& dst) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    auto read_one = [&](const json& x, T& d) {
      if constexpr (std::is_integral_v<T>) {
        if (!x.is_number_integer()) return false;
        d = static_cast<T>(x.get<long long>());
      } else {
        if (!x.is_number()) return false;
        d = x.get<T>();
      }
      return true;
    };
    if (v.is_array() && v.size() == 3) {
      for (int a = 0; a < 3; ++a)
        if (!read_one(v[a], dst[a])) schema(where + "." + key + " entries must be numbers");
    } else {
      T x{};
      if (read_one(v, x)) dst = {x, x, x};
      else schema(where + "." + key + " must be a number or a list of three");
    }
  }

  bool object(const json& parent, const char* key, const std::string& where) {
    if (!parent.contains(key)) return false;
    if (!parent.at(key).is_object()) {
      schema(where + key + " must be an object");
      return false;
    }
    return true;
  }

 private:
  std::vector<Violation>& out_;
};

void read_params(Reader& r, const json& j, ModelParams& p) {
  r.check_keys(j, "params", {"lambda1", "lambda2", "lambda3", "p", "trap"});
  r.number(j, "lambda1", "params", p.lambda1);
  r.number(j, "lambda2", "params", p.lambda2);
  r.number(j, "lambda3", "params", p.lambda3);
  r.number(j, "p", "params", p.p);
  if (j.contains("trap") && !j.at("trap").is_null()) {
    const json& t = j.at("trap");
    if (!t.is_object()) {
      r.schema("params.trap must be an object or null");
    } else {
      HarmonicTrap trap;
      r.check_keys(t, "params.trap", {"ratio1", "ratio2"});
      r.number(t, "ratio1", "params.trap", trap.ratio1);
      r.number(t, "ratio2", "params.trap", trap.ratio2);
      p.trap = trap;
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<Violation> violations)
    : Error(ExitCode::config, join_messages(violations)), violations_(std::move(violations)) {}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({Violation{"schema", std::string("malformed JSON: ") + e.what()}});
  }
  std::vector<Violation> v;
  Reader r(v);
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError({Violation{"schema", "configuration must be a JSON object"}});

  const bool bare = j.contains("lambda1") || j.contains("lambda2") || j.contains("lambda3") || j.contains("p");
  std::array<std::size_t, 3> n{64, 64, 64};
  std::array<double, 3> L{16.0, 16.0, 16.0};
  if (bare) {
    read_params(r, j, cfg.params);
  } else {
    r.check_keys(j, "config", {"params", "grid", "solver", "propagation", "seed", "output_dir"});
    if (r.object(j, "params", "")) read_params(r, j.at("params"), cfg.params);
    if (r.object(j, "grid", "")) {
      const json& g = j.at("grid");
      r.check_keys(g, "grid", {"n", "L", "dipolar", "cutoff"});
      r.triple(g, "n", "grid", n);
      r.triple(g, "L", "grid", L);
      if (g.contains("dipolar")) {
        const json& k = g.at("dipolar");
        if (k == "truncated") cfg.dipolar.kernel = DipolarKernel::truncated;
        else if (k == "periodic") cfg.dipolar.kernel = DipolarKernel::periodic;
        else v.push_back({"grid", "grid.dipolar must be \"truncated\" or \"periodic\""});
      }
      r.number(g, "cutoff", "grid", cfg.dipolar.cutoff);
      if (!(cfg.dipolar.cutoff >= 0.0) || !std::isfinite(cfg.dipolar.cutoff))
        v.push_back({"grid", "grid.cutoff must be nonnegative (0 selects min(L)/2)"});
    }
    if (r.object(j, "solver", "")) {
      const json& s = j.at("solver");
      r.check_keys(s, "solver", {"dt", "max_iters", "energy_tol", "residual_tol", "virial_tol",
                                 "spreading_boundary_mass", "conjugate"});
      long long iters = cfg.solver.max_iters;
      r.number(s, "dt", "solver", cfg.solver.dt);
      r.integer(s, "max_iters", "solver", iters);
      r.number(s, "energy_tol", "solver", cfg.solver.energy_tol);
      r.number(s, "residual_tol", "solver", cfg.solver.residual_tol);
      r.number(s, "virial_tol", "solver", cfg.solver.virial_tol);
      r.number(s, "spreading_boundary_mass", "solver", cfg.solver.spreading_boundary_mass);
      r.boolean(s, "conjugate", "solver", cfg.solver.conjugate);
      if (iters <= 0) v.push_back({"solver", "solver.max_iters must be positive"});
      cfg.solver.max_iters = static_cast<int>(iters);
      if (!(cfg.solver.dt > 0.0)) v.push_back({"solver", "solver.dt must be positive"});
      if (!(cfg.solver.energy_tol > 0.0) || !(cfg.solver.residual_tol > 0.0) || !(cfg.solver.virial_tol > 0.0))
        v.push_back({"solver", "solver tolerances must be positive"});
    }
    if (r.object(j, "propagation", "")) {
      const json& s = j.at("propagation");
      r.check_keys(s, "propagation", {"dt", "t_end", "snapshot_stride", "conserve_tol_mass", "conserve_tol_energy",
                                      "keep_snapshots", "experimental"});
      long long stride = cfg.propagation.snapshot_stride;
      r.number(s, "dt", "propagation", cfg.propagation.dt);
      r.number(s, "t_end", "propagation", cfg.propagation.t_end);
      r.integer(s, "snapshot_stride", "propagation", stride);
      r.number(s, "conserve_tol_mass", "propagation", cfg.propagation.conserve_tol_mass);
      r.number(s, "conserve_tol_energy", "propagation", cfg.propagation.conserve_tol_energy);
      r.boolean(s, "keep_snapshots", "propagation", cfg.propagation.keep_snapshots);
      r.boolean(s, "experimental", "propagation", cfg.propagation.experimental);
      if (stride <= 0) v.push_back({"propagation", "propagation.snapshot_stride must be positive"});
      cfg.propagation.snapshot_stride = static_cast<int>(stride);
      if (!(cfg.propagation.dt > 0.0)) v.push_back({"propagation", "propagation.dt must be positive"});
      if (!(cfg.propagation.t_end >= 0.0)) v.push_back({"propagation", "propagation.t_end must be nonnegative"});
      if (!(cfg.propagation.conserve_tol_mass > 0.0) || !(cfg.propagation.conserve_tol_energy > 0.0))
        v.push_back({"propagation", "conservation tolerances must be positive"});
    }
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) r.schema("seed must be a nonnegative integer");
      else cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
      if (!j.at("output_dir").is_string()) r.schema("output_dir must be a string");
      else cfg.output_dir = j.at("output_dir").get<std::string>();
    }
  }
  if (std::any_of(n.begin(), n.end(), [](std::size_t k) { return k < 2 || k % 2 != 0; }))
    v.push_back({"grid", "grid.n must be even and at least 2 on every axis"});
  if (std::any_of(L.begin(), L.end(), [](double x) { return !(x > 0.0) || !std::isfinite(x); }))
    v.push_back({"grid", "grid.L must be positive on every axis"});
  for (auto& x : cfg.params.violations()) v.push_back(std::move(x));
  if (!v.empty()) throw ConfigError(std::move(v));
  cfg.grid = Grid3D(n, L);
  cfg.propagation.dipolar = cfg.dipolar;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({Violation{"schema", "cannot read configuration file " + path.string()}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["params"] = {{"lambda1", c.params.lambda1}, {"lambda2", c.params.lambda2}, {"lambda3", c.params.lambda3},
                 {"p", c.params.p}};
  if (c.params.trap) j["params"]["trap"] = {{"ratio1", c.params.trap->ratio1}, {"ratio2", c.params.trap->ratio2}};
  else j["params"]["trap"] = nullptr;
  j["grid"] = {{"n", c.grid.points()},
               {"L", c.grid.length()},
               {"dipolar", c.dipolar.kernel == DipolarKernel::truncated ? "truncated" : "periodic"},
               {"cutoff", c.dipolar.cutoff}};
  j["solver"] = {{"dt", c.solver.dt},
                 {"max_iters", c.solver.max_iters},
                 {"energy_tol", c.solver.energy_tol},
                 {"residual_tol", c.solver.residual_tol},
                 {"virial_tol", c.solver.virial_tol},
                 {"spreading_boundary_mass", c.solver.spreading_boundary_mass},
                 {"conjugate", c.solver.conjugate}};
  j["propagation"] = {{"dt", c.propagation.dt},
                      {"t_end", c.propagation.t_end},
                      {"snapshot_stride", c.propagation.snapshot_stride},
                      {"conserve_tol_mass", c.propagation.conserve_tol_mass},
                      {"conserve_tol_energy", c.propagation.conserve_tol_energy},
                      {"keep_snapshots", c.propagation.keep_snapshots},
                      {"experimental", c.propagation.experimental}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir.string();
  return j.dump(2);
}

}  // namespace edgpe
