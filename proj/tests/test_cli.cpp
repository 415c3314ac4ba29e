#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "app.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using cylev::app::run;

namespace {

struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("cylev_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  std::string config(const json& j, const std::string& name = "config.json") const {
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / "out" / name, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::string out() const { return (dir / "out").string(); }
};

json stable_series() {
  return {{"seed", 7},
          {"process",
           {{"kind", "series"},
            {"truncation", 8},
            {"driver", {{"family", "symmetric_stable"}, {"alpha", 1.0}, {"scale", 1.0}}},
            {"scaling", {{"type", "power"}, {"amplitude", 1.0}, {"exponent", 1.0}}}}},
          {"theta", {{"functional", {1.0, 0.5}}, {"multipliers", {0.0, 1.0, 2.0}}}}};
}

json brownian_ou() {
  return {{"seed", 2024},
          {"horizon", 5.0},
          {"steps", 512},
          {"samples", 6000},
          {"process",
           {{"kind", "series"},
            {"truncation", 1},
            {"driver", {{"family", "brownian"}, {"sigma", 1.0}}},
            {"scaling", {{"type", "constant"}, {"value", 1.0}}}}},
          {"ou", {{"eigenvalues", {{"type", "constant"}, {"value", -1.0}}}, {"record_every", 128}}},
          {"theta", {{"functional", {1.0}}, {"multipliers", {0.5, 1.0, 2.0}}}},
          {"validation", {{"allowance", 0.01}}}};
}

}  // namespace

TEST_CASE("check reports weak and strong verdicts") {
  Sandbox box("check");
  REQUIRE(run({"check", "--config", box.config(stable_series()), "--out", box.out()}) == 0);
  const json r = json::parse(box.read("check.json"));
  CHECK(r["weak"]["verdict"] == "converges");
  CHECK(r["strong"]["verdict"] == "diverges");
}

TEST_CASE("check marks subordinator strong criterion unsupported") {
  Sandbox box("check_sub");
  json c = stable_series();
  c["process"]["driver"] = {{"family", "stable_subordinator"}, {"index", 0.5}, {"scale", 1.0}};
  REQUIRE(run({"check", "--config", box.config(c), "--out", box.out()}) == 0);
  CHECK(json::parse(box.read("check.json"))["strong"]["verdict"] == "unsupported");
}

TEST_CASE("symbol at theta grid {0}") {
  Sandbox box("symbol");
  json c = stable_series();
  c["theta"]["multipliers"] = {0.0};
  REQUIRE(run({"symbol", "--config", box.config(c), "--out", box.out()}) == 0);
  CHECK(box.read("symbol.csv") == "multiplier,real,imag\n0,0,0\n");
}

TEST_CASE("validate on the Brownian OU fixture is reproducible") {
  Sandbox box("validate");
  const auto cfg = box.config(brownian_ou());
  REQUIRE(run({"validate", "--config", cfg, "--out", box.out()}) == 0);
  const json a = json::parse(box.read("validate.json"));
  CHECK(a["pass"] == true);
  CHECK(a["ks"]["pass"] == true);
  REQUIRE(run({"validate", "--config", cfg, "--out", box.out()}) == 0);
  const json b = json::parse(box.read("validate.json"));
  CHECK(a["cf"]["max_deviation"].get<double>() == b["cf"]["max_deviation"].get<double>());
}

TEST_CASE("ou subcommand writes paths and report") {
  Sandbox box("ou");
  REQUIRE(run({"ou", "--config", box.config(brownian_ou()), "--out", box.out()}) == 0);
  const std::string csv = box.read("ou_paths.csv");
  CHECK(csv.rfind("path,node,time,mode_1\n", 0) == 0);
  CHECK(json::parse(box.read("ou_report.json"))["pass"] == true);
}

TEST_CASE("simulate CSV values round-trip") {
  Sandbox box("simulate");
  json c = stable_series();
  c["steps"] = 4;
  c["samples"] = 3;
  REQUIRE(run({"simulate", "--config", box.config(c), "--out", box.out()}) == 0);
  std::istringstream in(box.read("paths.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "path,node,time,mode_1,mode_2,mode_3,mode_4,mode_5,mode_6,mode_7,mode_8");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) {
      const double v = std::strtod(f.c_str(), nullptr);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      CHECK(std::strtod(buf, nullptr) == v);
      CHECK(f == buf);
    }
  }
  CHECK(rows == 15);
  const json s = json::parse(box.read("summary.json"));
  CHECK(s["scheme"] == "series_exact");
  CHECK(s["seed"] == 7);
}

TEST_CASE("seeds: flag overrides config, and one is required") {
  Sandbox box("seed");
  json c = stable_series();
  c["steps"] = 2;
  c["samples"] = 2;
  c.erase("seed");
  const auto cfg = box.config(c);
  CHECK(run({"simulate", "--config", cfg, "--out", box.out()}) == 2);
  CHECK_FALSE(fs::exists(box.dir / "out" / "paths.csv"));
  REQUIRE(run({"simulate", "--config", cfg, "--seed", "99", "--out", box.out()}) == 0);
  CHECK(json::parse(box.read("summary.json"))["seed"] == 99);
}

TEST_CASE("strict config parsing") {
  Sandbox box("strict");
  json c = stable_series();
  c["bogus"] = 1;
  CHECK(run({"check", "--config", box.config(c), "--out", box.out()}) == 2);
  json d = stable_series();
  d["process"]["driver"]["alpha"] = 2.5;
  CHECK(run({"check", "--config", box.config(d), "--out", box.out()}) == 2);
  json e = stable_series();
  e["process"]["scaling"]["extra"] = true;
  CHECK(run({"check", "--config", box.config(e), "--out", box.out()}) == 2);
  CHECK(run({"check", "--config", (box.dir / "missing.json").string()}) == 2);
  CHECK(run({"frobnicate", "--config", box.config(stable_series())}) == 2);
  CHECK_THROWS_AS(cylev::app::parse_config(json::parse(R"({"seed": 1})")), cylev::app::ConfigError);
  std::ofstream(box.dir / "broken.json") << "{ not json";
  CHECK(run({"check", "--config", (box.dir / "broken.json").string()}) == 2);
  CHECK_FALSE(fs::exists(box.dir / "out"));
}

TEST_CASE("failed validation exits 1 and keeps the report") {
  Sandbox box("fail");
  json c = brownian_ou();
  c["samples"] = 20000;
  c["ou"]["eigenvalues"]["value"] = -1.0;
  c["initial"] = {0.0};
  c["validation"]["allowance"] = 0.0;
  c["steps"] = 2;  // coarse grid: discretization bias far above the Monte Carlo band
  CHECK(run({"validate", "--config", box.config(c), "--out", box.out()}) == 1);
  CHECK(json::parse(box.read("validate.json"))["pass"] == false);
}

TEST_CASE("log level does not change results") {
  Sandbox box("log");
  json c = stable_series();
  c["steps"] = 3;
  c["samples"] = 5;
  const auto cfg = box.config(c);
  setenv("CYLEV_LOG", "debug", 1);
  REQUIRE(run({"simulate", "--config", cfg, "--out", box.out()}) == 0);
  const auto loud = box.read("paths.csv");
  setenv("CYLEV_LOG", "quiet", 1);
  REQUIRE(run({"simulate", "--config", cfg, "--out", box.out()}) == 0);
  unsetenv("CYLEV_LOG");
  CHECK(loud == box.read("paths.csv"));
  for (const auto& entry : fs::directory_iterator(box.dir / "out"))
    CHECK(entry.path().extension() != ".partial");
}
