#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "svg.hpp"

using namespace pcl;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result pcl_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("pcl_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& name) { return (scratch() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

ordered_json load(const std::string& path) { return ordered_json::parse(slurp(path)); }

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<std::string> keys(const ordered_json& j) {
  std::vector<std::string> k;
  for (const auto& [key, v] : j.items()) k.push_back(key);
  return k;
}

}  // namespace

TEST_CASE("theorem pappus verifies and reports in the fixed schema") {
  const auto json = path_of("pappus.json");
  const auto r = pcl_run({"theorem", "pappus", "--trials", "20", "--seed", "0", "--json", json});
  CHECK(r.code == 0);
  const auto j = load(json);
  const std::vector<std::string> expected{"tool_version", "subcommand", "config",     "verdict",
                                          "trials",       "residual_stats", "witnesses", "details",
                                          "runtime_ms"};
  CHECK(keys(j) == expected);
  CHECK(j["verdict"] == "verified");
  CHECK(j["residual_stats"]["max"] == "0");
  CHECK(j["witnesses"].empty());
  CHECK(j["trials"].size() == 20);
  CHECK(j["config"]["seed"] == "0");
  for (const auto& t : j["trials"]) CHECK(t["residual"].is_string());
}

TEST_CASE("unknown theorem id is a usage error listing the ids") {
  const auto r = pcl_run({"theorem", "no-such-id"});
  CHECK(r.code == 2);
  for (const auto& id : cli::theorem_ids()) CHECK(r.err.find("  " + id + "\n") != std::string::npos);
  CHECK(pcl_run({"steiner", "--bogus"}).code == 2);
  CHECK(pcl_run({}).code == 2);
  CHECK(pcl_run({"verify", path_of("missing.pcl")}).code == 2);
  CHECK(pcl_run({"pappus-curve", "--x", "0.3", "--y", "0.2", "--depth", "40"}).code == 2);
  CHECK(pcl_run({"--help"}).code == 0);
}

TEST_CASE("every listed id runs") {
  for (const auto& id : cli::theorem_ids()) {
    CAPTURE(id);
    CHECK(pcl_run({"theorem", id, "--trials", "2", "--seed", "4"}).code == 0);
  }
}

TEST_CASE("falsified script writes a replayable witness") {
  const auto script = path_of("bad.pcl");
  std::ofstream(script) << "point A B C D;\nE = meet(join(A, B), join(C, D));\nassert collinear A C E;\n";
  const auto json = path_of("bad.json");
  const auto r = pcl_run({"verify", script, "--seed", "2", "--json", json});
  CHECK(r.code == 1);
  const auto j = load(json);
  CHECK(j["verdict"] == "falsified");
  REQUIRE(j["witnesses"].size() == 1);
  const auto& values = j["witnesses"][0]["values"];
  for (const char* name : {"A", "B", "C", "D"}) {
    REQUIRE(values.contains(name));
    CHECK(std::regex_match(values[name].get<std::string>(), std::regex(R"(\(-?\d+(/\d+)?(:-?\d+(/\d+)?){2}\))")));
  }

  const auto replay = path_of("replay.json");
  CHECK(pcl_run({"verify", script, "--replay", json, "--json", replay}).code == 1);
  const auto k = load(replay);
  CHECK(k["residual_stats"]["max"] == j["residual_stats"]["max"]);
  CHECK(k["witnesses"][0]["values"] == values);

  // a true statement holds on the same witness
  const auto good = path_of("good.pcl");
  std::ofstream(good) << "point A B C D;\nE = meet(join(A, B), join(C, D));\nassert collinear A B E;\n";
  CHECK(pcl_run({"verify", good, "--replay", json}).code == 0);
}

TEST_CASE("float backend and complex rejection") {
  const auto script = path_of("desargues.pcl");
  std::ofstream(script) << "point O A1 A2 A3 B1 B2 B3;\nl1 = join(O, A1);\nl2 = join(O, A2);\nl3 = join(O, A3);\n"
                           "on B1 l1; on B2 l2; on B3 l3;\nC1 = meet(join(A2, A3), join(B2, B3));\n"
                           "C2 = meet(join(A1, A3), join(B1, B3));\nC3 = meet(join(A1, A2), join(B1, B2));\n"
                           "assert collinear C1 C2 C3;\n";
  CHECK(pcl_run({"verify", script, "--backend", "float", "--tolerance", "1e-9"}).code == 0);
  CHECK(pcl_run({"verify", script, "--backend", "complex"}).code == 2);
}

TEST_CASE("outputs are byte-identical for identical arguments") {
  for (int rep = 0; rep < 2; ++rep) {
    const std::string tag = std::to_string(rep);
    CHECK(pcl_run({"theorem", "pascal", "--seed", "9", "--no-timing", "--json", path_of("d" + tag + ".json"), "--svg",
                   path_of("d" + tag + ".svg")})
              .code == 0);
    CHECK(pcl_run({"poncelet", "--n", "5", "--seed", "3", "--no-timing", "--json", path_of("q" + tag + ".json")})
              .code == 0);
  }
  CHECK(slurp(path_of("d0.json")) == slurp(path_of("d1.json")));
  CHECK(slurp(path_of("d0.svg")) == slurp(path_of("d1.svg")));
  CHECK(slurp(path_of("q0.json")) == slurp(path_of("q1.json")));
  CHECK(load(path_of("d0.json"))["runtime_ms"] == "0");
}

TEST_CASE("PCL_SEED overrides --seed") {
  ::setenv("PCL_SEED", "17", 1);
  const auto json = path_of("env.json");
  const auto r = pcl_run({"theorem", "desargues", "--seed", "3", "--trials", "2", "--json", json});
  ::setenv("PCL_SEED", "x17", 1);
  const auto bad = pcl_run({"theorem", "desargues"});
  ::unsetenv("PCL_SEED");
  CHECK(r.code == 0);
  CHECK(load(json)["config"]["seed"] == "17");
  CHECK(bad.code == 2);
}

TEST_CASE("Pappus figure element counts") {
  const auto svg = path_of("pappus.svg");
  REQUIRE(pcl_run({"theorem", "pappus", "--trials", "1", "--svg", svg}).code == 0);
  const std::string text = slurp(svg);
  CHECK(count(text, "<circle ") == 9);
  CHECK(count(text, "<line ") == 9);
  CHECK(count(text, "class=\"line highlight\"") == 1);
  CHECK(text.find("<metadata>") != std::string::npos);
  CHECK(text.find("\"transform\"") != std::string::npos);
}

TEST_CASE("Poncelet grid figure colors 45 points by concentric set") {
  const auto svg = path_of("grid.svg");
  const auto json = path_of("grid.json");
  REQUIRE(pcl_run({"poncelet", "--a1", "2", "--a2", "1", "--n", "9", "--svg", svg, "--json", json}).code == 0);
  const std::string text = slurp(svg);
  CHECK(count(text, "<circle ") == 45);
  std::map<std::string, std::set<std::string>> colors;
  const std::regex re(R"re(<circle class="point (P\d+)"[^>]*fill="(#[0-9a-f]{6})")re");
  std::size_t matched = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    colors[(*it)[1]].insert((*it)[2]);
    ++matched;
  }
  CHECK(matched == 45);
  CHECK(colors.size() == 5);
  std::set<std::string> all;
  for (const auto& [set, c] : colors) {
    CHECK(c.size() == 1);
    all.insert(*c.begin());
  }
  CHECK(all.size() == 5);
  CHECK(count(text, "class=\"conic table\"") >= 1);
  CHECK(load(json)["verdict"] == "verified");
}

TEST_CASE("pappus-curve figure and dimension report") {
  const auto svg = path_of("curve.svg");
  const auto json = path_of("curve.json");
  REQUIRE(pcl_run({"pappus-curve", "--x", "0.3", "--y", "0.2", "--depth", "12", "--svg", svg, "--dimension", "--json",
                   json})
              .code == 0);
  const auto j = load(json);
  const auto& d = j["details"]["dimension"];
  CHECK(keys(d) == std::vector<std::string>{"x", "y", "estimate", "scales"});
  const double est = std::stod(d["estimate"].get<std::string>());
  CHECK(est > 1.0);
  CHECK(est <= 1.3);
  CHECK(count(slurp(svg), "class=\"curve\"") == 1);

  const auto sweep = path_of("sweep.json");
  const auto csv = path_of("sweep.csv");
  REQUIRE(pcl_run({"pappus-curve", "--x", "0.5", "--y", "0.5", "--depth", "10", "--sweep", "--grid", "2", "--json",
                   sweep, "--csv", csv})
              .code == 0);
  const auto s = load(sweep)["details"]["sweep"];
  REQUIRE(s.size() == 4);
  for (const auto& e : s) CHECK(keys(e) == std::vector<std::string>{"x", "y", "estimate", "scales"});
  CHECK(s[0]["x"] == "0.3333333333333333");
  CHECK(slurp(csv).rfind("x,y,level,epsilon,count,estimate\n", 0) == 0);
}

TEST_CASE("steiner and skewer-pentagram runs") {
  const auto json = path_of("steiner.json");
  CHECK(pcl_run({"steiner", "--samples", "10", "--seed", "1", "--json", json}).code == 0);
  const auto j = load(json);
  CHECK(j["trials"].size() == 10);
  CHECK(std::stod(j["residual_stats"]["max"].get<std::string>()) <= 1e-9);

  const auto orbit = path_of("orbit.json");
  CHECK(pcl_run({"skewer-pentagram", "--n", "7", "--iters", "200", "--seed", "2", "--json", orbit}).code == 0);
  const auto k = load(orbit);
  CHECK(k["details"]["iterations_completed"] == "200");
  CHECK(k["details"]["steps"].size() == 200);
  // co-axial input: the first step already asks for the skewer of two lines
  // skewering the same axis, which is undefined
  CHECK(pcl_run({"skewer-pentagram", "--n", "7", "--iters", "10", "--coaxial"}).code == 1);
}

TEST_CASE("empty scene renders a valid empty figure") {
  const std::string text = cli::render_svg(cli::Scene{});
  CHECK(text.rfind("<?xml", 0) == 0);
  CHECK(text.find("<svg ") != std::string::npos);
  CHECK(text.size() >= 7);
  CHECK(text.substr(text.size() - 7) == "</svg>\n");
  CHECK(count(text, "<circle") == 0);
  CHECK(count(text, "<line") == 0);
  CHECK(count(text, "<polyline") == 0);
}

TEST_CASE("line clipping and conic sampling") {
  const cli::Viewport v{-1.0, 2.0, -1.0, 1.0};
  std::array<double, 2> a, b;
  const Vec3<double> l{1.0, 2.0, -0.5};
  REQUIRE(cli::clip_line(l, v, a, b));
  for (const auto& p : {a, b}) {
    CHECK(std::fabs(l[0] * p[0] + l[1] * p[1] + l[2]) < 1e-12);
    const bool on_edge = std::fabs(p[0] - v.xmin) < 1e-12 || std::fabs(p[0] - v.xmax) < 1e-12 ||
                         std::fabs(p[1] - v.ymin) < 1e-12 || std::fabs(p[1] - v.ymax) < 1e-12;
    CHECK(on_edge);
  }
  CHECK_FALSE(cli::clip_line({1.0, 0.0, -5.0}, v, a, b));

  // ellipse, hyperbola and parabola: every sample on the conic
  const std::vector<Matrix3<double>> conics{
      {{{0.25, 0, 0}, {0, 1, 0}, {0, 0, -1}}}, {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}}, {{{1, 0, 0}, {0, 0, -0.5}, {0, -0.5, 0}}}};
  for (const auto& m : conics) {
    const auto pts = cli::sample_conic(m);
    CHECK(pts.size() == 256);
    for (const auto& p : pts) {
      const double n2 = dot(p, p);
      CHECK(std::fabs(dot(p, mul(m, p))) <= 1e-12 * n2);
    }
  }
  CHECK(cli::sample_conic({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}).empty());
  CHECK(cli::fixed6(-0.0000001) == "0.000000");
  CHECK(cli::fixed6(1.5) == "1.500000");
}
