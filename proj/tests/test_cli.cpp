// End-to-end behavior of the command-line tool: exit codes, report files,
// mesh outputs, and byte-level determinism across reruns. Each case drives
// the real binary through std::system.

#include <catch2/catch_amalgamated.hpp>

#include "reifenberg/io.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

using namespace reifenberg;
namespace fs = std::filesystem;

namespace {

const std::string kCli = REIFENBERG_CLI_PATH;
const std::string kData = REIFENBERG_DATA_DIR;

int run_cli(const std::string& args) {
  std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("reifenberg_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json slab_collapse_scenario() {
  Ball b{Vec::Zero(2), 2.0};
  Slice q = Slice::full(2).with_fixed(1, 0.0).with_bounds(0, -1.0, 1.0);

  SimplicialSet content(2);
  int a = content.add_vertex(make_vec({-0.3, 0.0}));
  int c = content.add_vertex(make_vec({0.3, 0.0}));
  content.add_simplex({a, c}, {});

  Json j;
  j["kind"] = "collapse";
  j["ball"] = ball_to_json(b);
  j["slice"] = slice_to_json(q);
  j["apex"] = Json::array({0.0, 0.0});
  j["content"] = geometry_to_json(content);
  j["delta"] = 0.5;
  j["eps"] = 0.75;
  j["cutoff_scale"] = 0.001;
  j["dt"] = 0.001;
  j["refine_per_edge"] = 4;
  return j;
}

}  // namespace

TEST_CASE("constants subcommand writes a full-precision ledger report") {
  fs::path dir1 = scratch("const1");
  fs::path dir2 = scratch("const2");
  REQUIRE(run_cli("constants --m 2 --n 2 --out " + dir1.string()) == 0);

  Json report = parse_json_file((dir1 / "report.json").string());
  REQUIRE(report["schema"] == 1);
  REQUIRE(report["subcommand"] == "constants");
  const Json& table = report["table"];
  REQUIRE(table["length_multiplier"].get<double>() == 5.0);
  REQUIRE_FALSE(table["convention_note"].get<std::string>().empty());

  // Console output truncates; the report must carry full precision.
  bool saw[3] = {false, false, false};
  for (const auto& row : table["rows"]) {
    int k = row["k"].get<int>();
    double v = row["value"].get<double>();
    if (k == 2) REQUIRE(v == Catch::Approx(8.0 * std::sqrt(2.0)).margin(1e-12));
    if (k == 1) REQUIRE(v == Catch::Approx(240.0 * std::sqrt(2.0)).margin(1e-12));
    if (k == 0) REQUIRE(v == Catch::Approx(7200.0 * std::sqrt(2.0)).margin(1e-12));
    saw[k] = true;
  }
  REQUIRE((saw[0] && saw[1] && saw[2]));

  REQUIRE(run_cli("constants --m 2 --n 2 --out " + dir2.string()) == 0);
  REQUIRE(read_text_file((dir1 / "report.json").string()) ==
          read_text_file((dir2 / "report.json").string()));
}

TEST_CASE("measure subcommand reports frozen reference values") {
  fs::path dir = scratch("measure");
  SimplicialSet seg(1);
  int a = seg.add_vertex(make_vec({0.0}));
  int b = seg.add_vertex(make_vec({1.0}));
  seg.add_simplex({a, b}, {});
  std::string input = (dir / "segment.json").string();
  write_geometry(input, seg);

  REQUIRE(run_cli("measure --input " + input + " --d 1 --out " + dir.string()) == 0);
  Json report = parse_json_file((dir / "report.json").string());
  REQUIRE(report["measure"]["value"].get<double>() == 0.5);
  REQUIRE(report["measure"]["degenerate_count"] == 0);

  REQUIRE(run_cli("measure --input " + input +
                  " --d 1 --method covering --grid 0.001 --out " + dir.string()) == 0);
  report = parse_json_file((dir / "report.json").string());
  REQUIRE(report["measure"].get<double>() == Catch::Approx(0.5).margin(0.025));

  SECTION("covering needs a positive grid") {
    REQUIRE(run_cli("measure --input " + input + " --d 1 --method covering") == 2);
  }
  SECTION("unknown estimator is an input error") {
    REQUIRE(run_cli("measure --input " + input + " --d 1 --method banana") == 2);
  }
}

TEST_CASE("span subcommand writes meshes and a deterministic report") {
  fs::path dir1 = scratch("span1");
  fs::path dir2 = scratch("span2");
  std::string input = kData + "/circle_256.json";
  std::string args = " --input " + input + " --ball 0,0,0,2 --m 2 --L auto --out ";

  REQUIRE(run_cli("span" + args + dir1.string()) == 0);
  REQUIRE(fs::exists(dir1 / "A_tilde.obj"));
  REQUIRE(fs::exists(dir1 / "S_tilde.obj"));
  REQUIRE(fs::exists(dir1 / "report.json"));

  Json report = parse_json_file((dir1 / "report.json").string());
  const Json& result = report["result"];
  REQUIRE(result["all_checks_pass"] == true);
  REQUIRE(result["m"] == 2);
  REQUIRE(result["n"] == 3);
  REQUIRE(result["final_constant"].get<double>() ==
          Catch::Approx(216000.0 * std::sqrt(3.0)).margin(1e-9));
  double lhs = result["spanning_inequality"]["lhs"].get<double>();
  double rhs = result["spanning_inequality"]["rhs"].get<double>();
  REQUIRE(lhs <= rhs);

  REQUIRE(run_cli("span" + args + dir2.string()) == 0);
  REQUIRE(read_text_file((dir1 / "report.json").string()) ==
          read_text_file((dir2 / "report.json").string()));
  REQUIRE(read_text_file((dir1 / "A_tilde.obj").string()) ==
          read_text_file((dir2 / "A_tilde.obj").string()));
}

TEST_CASE("flow subcommand runs a collapse scenario end to end") {
  fs::path dir = scratch("flow_collapse");
  std::string sc_path = (dir / "scenario.json").string();
  write_json(sc_path, slab_collapse_scenario());

  REQUIRE(run_cli("flow --scenario " + sc_path + " --times 2,6 --out " + dir.string()) == 0);
  Json report = parse_json_file((dir / "flow_report.json").string());
  REQUIRE(report["kind"] == "collapse");
  REQUIRE(report["collapse"]["collapse_monotone"] == true);
  REQUIRE(report["collapse"]["collapse_final"].get<double>() <= 1e-3);
  REQUIRE(report["collapse"]["outside_movement"].get<double>() == 0.0);
  REQUIRE(report["meshes"].size() == 2);
  for (const auto& entry : report["meshes"])
    REQUIRE(fs::exists(dir / entry["file"].get<std::string>()));
}

TEST_CASE("flow subcommand composes stages") {
  fs::path dir = scratch("flow_compose");
  Json stage = slab_collapse_scenario();
  stage.erase("kind");
  stage.erase("ball");
  stage.erase("content");
  stage["time"] = 6.0;

  Json j;
  j["kind"] = "composition";
  j["ball"] = slab_collapse_scenario()["ball"];
  j["parent"] = slice_to_json(Slice::full(2));
  j["slabs"] = Json::array({slice_to_json(Slice::full(2).with_bounds(0, -2.0, 2.0))});
  Json empty_wall = geometry_to_json(SimplicialSet(2));
  j["walls"] = Json::array({empty_wall, empty_wall});
  j["eps"] = 0.75;
  j["content"] = slab_collapse_scenario()["content"];
  j["stages"] = Json::array({stage});

  std::string sc_path = (dir / "compose.json").string();
  write_json(sc_path, j);

  REQUIRE(run_cli("flow --scenario " + sc_path + " --out " + dir.string()) == 0);
  Json report = parse_json_file((dir / "flow_report.json").string());
  REQUIRE(report["kind"] == "composition");
  REQUIRE(report["composition"]["boundary_transfer"].get<double>() <= 1e-3);
  REQUIRE(report["composition"]["trace_transfer"].get<double>() <= 1e-3);
  REQUIRE(report["composition"]["evolved_vertices"] == 2 + 16);
  REQUIRE(fs::exists(dir / "evolved_final.off"));
}

TEST_CASE("verify subcommand passes its sanity suite") {
  fs::path dir = scratch("verify");
  REQUIRE(run_cli("verify --out " + dir.string()) == 0);
  Json report = parse_json_file((dir / "report.json").string());
  REQUIRE(report["checks"].size() >= 3);
  for (const auto& row : report["checks"]) REQUIRE(row["pass"] == true);
}

TEST_CASE("bad inputs exit with the input-error code") {
  fs::path dir = scratch("errors");
  SECTION("malformed geometry file") {
    REQUIRE(run_cli("span --input " + kData + "/malformed.json --ball 0,0,0,2") == 2);
  }
  SECTION("missing file") {
    REQUIRE(run_cli("measure --input " + (dir / "nope.json").string() + " --d 1") == 2);
  }
  SECTION("malformed scenario") {
    REQUIRE(run_cli("flow --scenario " + kData + "/malformed.json") == 2);
  }
  SECTION("ball option with too few numbers") {
    REQUIRE(run_cli("span --input " + kData + "/circle_256.json --ball 0,0,2") == 2);
  }
  SECTION("non-increasing times") {
    REQUIRE(run_cli("flow --scenario " + kData + "/flow_disk.json --times 5,2") == 2);
  }
  SECTION("unknown subcommand") {
    REQUIRE(run_cli("frobnicate") == 2);
  }
  SECTION("missing subcommand") {
    REQUIRE(run_cli("") == 2);
  }
  SECTION("ledger index errors are precondition failures, not parse errors") {
    REQUIRE(run_cli("constants --m 0 --n 2") == 1);
  }
}
