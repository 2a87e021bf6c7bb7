#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sg/cli.hpp"

namespace fs = std::filesystem;
using sg::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run sg_run(std::vector<std::string> args) {
  args.insert(args.begin(), "sg");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  TempDir() : path(fs::temp_directory_path() / ("sg_cli_" + std::to_string(counter++))) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
  fs::path path;
  static inline int counter = 0;
};

double reported(const std::string& out, const std::string& key) {
  const auto pos = out.find(key + " = ");
  REQUIRE(pos != std::string::npos);
  return std::stod(out.substr(pos + key.size() + 3));
}

} // namespace

TEST_CASE("constants") {
  const Run r = sg_run({"constants"});
  CHECK(r.code == 0);
  CHECK(reported(r.out, "u") == doctest::Approx(1.03).epsilon(0.01));
  CHECK(reported(r.out, "t_s") == doctest::Approx(2.9e-4).epsilon(0.01));
  CHECK(reported(r.out, "omega/2pi") == doctest::Approx(1.4e11).epsilon(0.01));
  CHECK(r.out.find("m/s") != std::string::npos);
  CHECK(r.out.find("rad/s") != std::string::npos);

  TempDir dir;
  fs::create_directories(dir.path);
  std::ofstream(dir.path / "fast.json") << R"({"v": 1000})";
  const Run fast = sg_run({"constants", "--config", (dir.path / "fast.json").string()});
  CHECK(fast.code == 0);
  CHECK(reported(fast.out, "delta_t") == doctest::Approx(0.5 * reported(r.out, "delta_t")));
}

TEST_CASE("malformed configs name the field") {
  TempDir dir;
  fs::create_directories(dir.path);
  std::ofstream(dir.path / "bad.json") << R"({"sigma0": "wide"})";
  const Run r = sg_run({"constants", "--config", (dir.path / "bad.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("sigma0") != std::string::npos);
  CHECK(sg_run({"constants", "--config", (dir.path / "none.json").string()}).code == 1);
  CHECK(sg_run({"bogus"}).code == 1);
  CHECK(sg_run({}).code == 1);
  CHECK(sg_run({"constants", "--seed", "abc"}).code == 1);
}

TEST_CASE("density command") {
  TempDir dir;
  const Run r = sg_run({"density", "--times", "0,0.01,0.11,0.21", "--out", dir.str()});
  REQUIRE(r.code == 0);
  for (const char* f : {"density_0.csv", "density_1.csv", "density_2.csv", "density_3.csv",
                        "density.svg", "manifest.json"})
    CHECK(fs::exists(dir.path / f));
  // first two unimodal, last two bimodal
  CHECK(r.out.find("y = 1.000000000000e-02 m: 1 peak") != std::string::npos);
  CHECK(r.out.find("y = 2.100000000000e-01 m: 2 peaks") != std::string::npos);

  const auto m = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
  CHECK(m["command"] == "density");
  CHECK(m["outputs"].size() == 5);
  CHECK(m["config"]["v"] == 500.0);

  CHECK(sg_run({"density", "--out", dir.str(), "--exact", "--times", "0.21"}).code == 0);
}

TEST_CASE("empty or bad time lists write nothing") {
  TempDir dir;
  Run r = sg_run({"density", "--times", "", "--out", dir.str()});
  CHECK(r.code == 1);
  CHECK(!fs::exists(dir.path));
  r = sg_run({"density", "--times", " , ", "--out", dir.str()});
  CHECK(r.code == 1);
  r = sg_run({"density", "--times", "0.1,x", "--out", dir.str()});
  CHECK(r.code == 1);
  r = sg_run({"density", "--times", "-0.1", "--out", dir.str()});
  CHECK(r.code == 1);
  CHECK(!fs::exists(dir.path));
}

TEST_CASE("unwritable output path") {
  TempDir dir;
  fs::create_directories(dir.path);
  std::ofstream(dir.path / "file") << "x";
  const Run r = sg_run({"density", "--out", (dir.path / "file" / "sub").string()});
  CHECK(r.code == 1);
}

TEST_CASE("trajectories command") {
  TempDir dir;
  const Run r = sg_run({"trajectories", "--n", "10", "--theta0", "1.0471975511965976", "--seed",
                        "7", "--out", dir.str()});
  REQUIRE(r.code == 0);
  for (int i = 0; i < 10; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "traj_%03d.csv", i);
    CHECK(fs::exists(dir.path / name));
  }
  const auto j = nlohmann::json::parse(slurp(dir.path / "trajectories.json"));
  CHECK(j.size() == 10);
  int up = 0;
  int down = 0;
  for (const auto& t : j) {
    up += t["outcome"] == "up";
    down += t["outcome"] == "down";
  }
  CHECK(up + down == 10);
  CHECK(fs::exists(dir.path / "trajectories.svg"));

  TempDir one;
  const Run single = sg_run({"trajectories", "--n", "1", "--theta0", "0", "--out", one.str()});
  REQUIRE(single.code == 0);
  CHECK(single.out.find("-> up") != std::string::npos);

  TempDir zero;
  CHECK(sg_run({"trajectories", "--n", "0", "--out", zero.str()}).code == 1);
  CHECK(sg_run({"trajectories", "--theta0", "4", "--out", zero.str()}).code == 1);
}

TEST_CASE("ensemble command is reproducible from its manifest") {
  TempDir a;
  TempDir b;
  const std::vector<std::string> args{"ensemble", "--n", "300", "--seed", "12"};
  auto with_out = [&](const TempDir& d) {
    auto v = args;
    v.push_back("--out");
    v.push_back(d.str());
    return v;
  };
  REQUIRE(sg_run(with_out(a)).code == 0);
  for (const char* f : {"ensemble.json", "impacts.csv", "histogram.csv", "spots.csv", "manifest.json"})
    CHECK(fs::exists(a.path / f));
  const auto e = nlohmann::json::parse(slurp(a.path / "ensemble.json"));
  CHECK(e["n"] == 300);
  CHECK(e["spec"]["seed"] == 12);

  // replay from the recorded argv
  const auto m = nlohmann::json::parse(slurp(a.path / "manifest.json"));
  std::vector<std::string> replay = m["parameters"]["argv"].get<std::vector<std::string>>();
  for (auto& s : replay)
    if (s == a.str())
      s = b.str();
  REQUIRE(sg_run(replay).code == 0);
  for (const char* f : {"ensemble.json", "impacts.csv", "histogram.csv", "spots.csv"})
    CHECK(slurp(a.path / f) == slurp(b.path / f));

  TempDir c;
  CHECK(sg_run({"ensemble", "--n", "0", "--out", c.str()}).code == 1);
}

TEST_CASE("verify command") {
  const Run r = sg_run({"verify", "--level", "quick"});
  CHECK(r.code == 0);
  CHECK(r.out.find("approximation error") != std::string::npos);
  CHECK(sg_run({"verify", "--level", "fast"}).code == 1);
}
