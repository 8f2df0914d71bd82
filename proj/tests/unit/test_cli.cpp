#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name)
      : path(fs::temp_directory_path() / ("smbcs_cli_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string command = std::string(SMBCS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("simulate is byte-identical across runs") {
  ScratchDir a("sim_a"), b("sim_b");
  const std::string args = "simulate -N 2 -M 4 -k 3 --trials 50 --seed 7 -o ";
  REQUIRE(run(args + a.path.string()) == 0);
  REQUIRE(run(args + b.path.string()) == 0);
  for (const char* name : {"simulate.jsonl", "simulate.csv", "simulate.manifest.json"}) {
    INFO(name);
    const auto first = slurp(a.path / name);
    CHECK(!first.empty());
    CHECK(first == slurp(b.path / name));
  }
  const auto manifest = nlohmann::json::parse(slurp(a.path / "simulate.manifest.json"));
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.at("config").at("photons") == 2);
  CHECK(manifest.at("config_hash").get<std::string>().size() == 16);

  // The manifest reproduces the run.
  ScratchDir c("sim_c");
  REQUIRE(run("simulate --config " + (a.path / "simulate.manifest.json").string() + " -o " +
              c.path.string()) == 0);
  CHECK(slurp(c.path / "simulate.csv") == slurp(a.path / "simulate.csv"));
}

TEST_CASE("distribution csv sums to one") {
  ScratchDir d("dist");
  for (const char* flavor : {"rfm", "rtm"}) {
    INFO(flavor);
    REQUIRE(run(std::string("distribution -N 2 -M 4 --flavor ") + flavor + " -o " +
                d.path.string()) == 0);
    const auto rows = read_csv(d.path / "distribution.csv");
    REQUIRE(rows.size() > 1);
    const auto p = column(rows[0], "probability");
    CHECK(column(rows[0], "schema_version") == 0);
    double total = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(rows[i][p]);
    CHECK(std::abs(total - 1.0) < 1e-6);
  }
}

TEST_CASE("success-prob reproduces the curve floor") {
  ScratchDir d("curve");
  REQUIRE(run("success-prob --no-mc -a 1.2 -k 8 --gamma 0.7071067811865476 -o " +
              d.path.string()) == 0);
  const auto rows = read_csv(d.path / "success_prob.csv");
  REQUIRE(rows.size() == 401);
  const auto mode = column(rows[0], "mode");
  const auto p = column(rows[0], "P_analytic");
  double min_ff = 1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][mode] == "feed_forward") min_ff = std::min(min_ff, std::stod(rows[i][p]));
  }
  CHECK(min_ff > 0.88);
}

TEST_CASE("other subcommands write their outputs") {
  ScratchDir d("misc");
  const std::string out = " -o " + d.path.string();
  CHECK(run("perm-bench --n-max 6 --repeats 1" + out) == 0);
  CHECK(read_csv(d.path / "perm_bench.csv").size() == 1 + 6 * 3);
  CHECK(run("diagnose-gaussian --diag-trials 50" + out) == 0);
  CHECK(read_csv(d.path / "gaussian.csv").size() == 2);
  CHECK(run("check-resolution -N 2 -k 8" + out) == 0);
  CHECK(read_csv(d.path / "resolution.csv").size() == 2);
  CHECK(run("distribution -N 2 -M 4 --samples 1000" + out) == 0);
  CHECK(read_csv(d.path / "tvd.csv").size() == 4);
  CHECK(run("distribution -N 2 -M 4 --outcome-ports 0,1 --outcome-bins 0,1" + out) == 0);
  CHECK(fs::exists(d.path / "outcome.jsonl"));
}

TEST_CASE("unitary files round-trip through the cli") {
  ScratchDir d("unitary");
  const auto u = (d.path / "u.bin").string();
  REQUIRE(run("distribution -N 2 -M 4 --seed 3 --save-unitary " + u + " -o " +
              (d.path / "a").string()) == 0);
  REQUIRE(run("distribution -N 2 -M 4 --seed 99 --unitary-file " + u + " -o " +
              (d.path / "b").string()) == 0);
  const auto a = read_csv(d.path / "a" / "distribution.csv");
  const auto b = read_csv(d.path / "b" / "distribution.csv");
  REQUIRE(a.size() == b.size());
  const auto p = column(a[0], "probability");
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i][p] == b[i][p]);
}

TEST_CASE("exit codes") {
  ScratchDir d("errors");
  const std::string out = " -o " + d.path.string();
  const auto bad = d.path / "bad.json";
  std::ofstream(bad) << R"({"photons": 2, "colour": "blue"})";
  CHECK(run("simulate --config " + bad.string() + out) == 2);
  CHECK(run("simulate --gamma 1.5" + out) == 2);
  CHECK(run("simulate -N 3 -M 2" + out) == 2);
  CHECK(run("simulate --bogus" + out) == 2);
  CHECK(run("distribution -N 5 -M 8" + out) == 3);
  CHECK(run("perm-bench --n-min 31 --n-max 31 --repeats 1" + out) == 3);
  CHECK(run("--version") == 0);
}

TEST_CASE("output directory falls back to the environment") {
  ScratchDir d("env");
  const std::string command = "SMBCS_OUTPUT_DIR=" + d.path.string() + " " + SMBCS_CLI_PATH +
                              " check-resolution >/dev/null 2>&1";
  REQUIRE(std::system(command.c_str()) == 0);
  CHECK(fs::exists(d.path / "resolution.csv"));
  CHECK(fs::exists(d.path / "check-resolution.manifest.json"));
}
