#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace edgpe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("edgpe-unit-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> codes(const char* text) {
  std::vector<std::string> out;
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) out.push_back(v.code);
  }
  return out;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "edgpe");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("snapshot encoding is bit exact and validated") {
  const Grid3D g({8, 6, 4}, {3.0, 2.5, 2.0});
  const WaveField u = test::smooth_field(g, 4);
  const std::string bytes = encode_snapshot(u);
  CHECK(bytes.size() == 4 + 4 + 12 + 24 + 16 * g.size());
  CHECK(bytes.substr(0, 4) == "EDGP");
  const WaveField v = decode_snapshot(bytes);
  CHECK(v.grid() == g);
  CHECK(std::equal(u.values().begin(), u.values().end(), v.values().begin()));

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bad), std::runtime_error);
  CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, bytes.size() - 8)), std::runtime_error);
  bad = bytes;
  bad[4] = 9;
  CHECK_THROWS_AS(decode_snapshot(bad), std::runtime_error);

  const fs::path dir = scratch("snap");
  write_snapshot(dir / "u.edgp", u);
  const WaveField w = read_snapshot(dir / "u.edgp");
  CHECK(std::equal(u.values().begin(), u.values().end(), w.values().begin()));
  CHECK_THROWS_AS(read_snapshot(dir / "missing.edgp"), std::runtime_error);
}

TEST_CASE("number formatting and digests") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(number(std::nan("")) == "nan");
  CHECK(number(2.5) == 2.5);
}

TEST_CASE("artifact writer keeps a manifest") {
  const fs::path dir = scratch("artifacts");
  ArtifactWriter w(dir / "run");
  w.write("a.txt", "hello");
  w.write("b.bin", std::string("\0\1\2", 3));
  w.finalize("unit");
  const Json m = Json::parse(slurp(dir / "run" / "manifest.json"));
  CHECK(m["command"] == "unit");
  REQUIRE(m["files"].size() == 2);
  CHECK(m["files"][0]["name"] == "a.txt");
  CHECK(m["files"][0]["sha256"] == sha256_hex("hello"));
  CHECK(m["files"][1]["bytes"] == 3);
  CHECK(slurp(dir / "run" / "a.txt") == "hello");
}

TEST_CASE("configuration parsing") {
  const RunConfig bare = parse_config(R"({"lambda1": -1, "lambda2": 0.5, "lambda3": 2, "p": 4.5})");
  CHECK(bare.params.lambda1 == -1.0);
  CHECK(bare.params.p == 4.5);
  CHECK(bare.grid == Grid3D::cubic(64, 16.0));
  CHECK(bare.dipolar.kernel == DipolarKernel::truncated);

  const RunConfig full = parse_config(R"({
    "params": {"lambda1": 0, "lambda2": 1, "lambda3": 1, "p": 5, "trap": {"ratio1": 2, "ratio2": 3}},
    "grid": {"n": [32, 32, 48], "L": [12, 12, 16], "dipolar": "periodic", "cutoff": 7},
    "solver": {"max_iters": 10, "virial_tol": 1e-3},
    "propagation": {"dt": 0.01, "t_end": 2, "experimental": true},
    "seed": 9, "output_dir": "out"})");
  CHECK(full.grid.points(2) == 48);
  CHECK(full.grid.length(0) == 12.0);
  CHECK(full.dipolar.kernel == DipolarKernel::periodic);
  CHECK(full.dipolar.cutoff == 7.0);
  CHECK(full.propagation.dipolar.cutoff == 7.0);
  CHECK(full.params.trap->ratio2 == 3.0);
  CHECK(full.solver.max_iters == 10);
  CHECK(full.propagation.experimental);
  CHECK(full.seed == 9);

  const RunConfig again = parse_config(dump_config(full));
  CHECK(dump_config(again) == dump_config(full));

  CHECK(codes(R"({"lambda1": 1, "p": 7})") == std::vector<std::string>{"p_range"});
  CHECK(codes(R"({"lambda1": 0, "lambda2": 0})") == std::vector<std::string>{"nondegeneracy"});
  CHECK(codes(R"({"lambda1": 1, "lambda3": -1, "p": 3})").size() == 2);
  CHECK(codes(R"({"params": {"lambda1": 1}, "bogus": 1})") == std::vector<std::string>{"schema"});
  CHECK(codes(R"({"params": {"lambda1": 1}, "grid": {"n": 33}})") == std::vector<std::string>{"grid"});
  CHECK(codes(R"({"params": {"lambda1": 1}, "grid": {"dipolar": "open"}})") == std::vector<std::string>{"grid"});
  CHECK(codes(R"([1, 2])") == std::vector<std::string>{"schema"});
  CHECK(codes("{not json") == std::vector<std::string>{"schema"});
  CHECK_THROWS_AS(load_config("/nonexistent/edgpe.json"), ConfigError);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  {
    std::ofstream(dir / "a1.json") << R"({"lambda1": 1, "lambda2": 0, "lambda3": 1, "p": 5})";
    std::ofstream(dir / "bad.json") << R"({"lambda1": 1, "p": 9})";
  }
  CHECK(cli({}) == 64);
  CHECK(cli({"no-such-command"}) == 64);
  CHECK(cli({"ground-state", "--params", (dir / "bad.json").string(), "--c", "1"}) == 65);
  CHECK(cli({"gaussian-scan", "--params", (dir / "a1.json").string(), "--sigma", "0.5,2,4", "--tau",
             "0.5,2,4", "--c", "0.1,10,3", "--out", (dir / "scan").string()}) == 0);
  CHECK(fs::exists(dir / "scan" / "manifest.json"));
  CHECK(cli({"ground-state", "--params", (dir / "a1.json").string(), "--c", "1", "--n", "16", "--L", "8",
             "--out", (dir / "gs").string()}) == 3);
  CHECK(cli({"evolve", "--params", (dir / "a1.json").string(), "--init", "gaussian:1,1,1", "--n", "16", "--L",
             "8", "--t-end", "0.05", "--out", (dir / "ev").string()}) == 0);
  CHECK(fs::exists(dir / "ev" / "trace.csv"));
  CHECK(cli({"evolve", "--params", (dir / "a1.json").string(), "--init", "gaussian:1,1", "--n", "16", "--L",
             "8", "--out", (dir / "ev2").string()}) == 65);
}
