// Command-line front end: span construction, deformation flows, the constant
// ledger, measure queries, and a built-in sanity check. Outputs are mesh
// files plus a schema-versioned JSON report; reports are deterministic given
// (inputs, flags, seed) and never embed timestamps or absolute paths.
//
// Exit codes: 0 = all asserted properties hold; 1 = a geometric precondition
// or asserted inequality failed; 2 = malformed input.

#include "reifenberg/io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rf = reifenberg;
namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string out_dir;
  std::uint64_t seed = 0;
};

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  rf::require(!ec, rf::ErrorCode::BadInput, "cannot create output directory: " + dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Mesh export: OBJ for ambient dimension 3, OFF otherwise. Returns the
// file name actually written (relative to the output directory).
std::string write_mesh(const std::string& dir, const std::string& stem,
                       const rf::SimplicialSet& x) {
  if (x.n == 3) {
    std::string name = stem + ".obj";
    rf::write_obj(join_path(dir, name), x);
    return name;
  }
  std::string name = stem + ".off";
  rf::write_off(join_path(dir, name), x);
  return name;
}

rf::Ball parse_ball(const std::string& text, int n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      rf::require(used == tok.size(), rf::ErrorCode::ParseError, "bad ball component: " + tok);
    } catch (const std::exception&) {
      rf::fail(rf::ErrorCode::ParseError, "bad ball component: " + tok);
    }
  }
  rf::require(static_cast<int>(vals.size()) == n + 1, rf::ErrorCode::ParseError,
              "--ball needs n center coordinates plus a radius");
  rf::Ball b;
  b.center.resize(n);
  for (int i = 0; i < n; ++i) b.center[i] = vals[static_cast<size_t>(i)];
  b.radius = vals.back();
  rf::require(b.radius > 0, rf::ErrorCode::ParseError, "ball radius must be positive");
  return b;
}

std::vector<double> parse_times(const std::string& text) {
  std::vector<double> times;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      times.push_back(std::stod(tok));
    } catch (const std::exception&) {
      rf::fail(rf::ErrorCode::ParseError, "bad time value: " + tok);
    }
  }
  rf::require(!times.empty(), rf::ErrorCode::ParseError, "--times must list at least one value");
  for (size_t i = 1; i < times.size(); ++i)
    rf::require(times[i] > times[i - 1], rf::ErrorCode::ParseError,
                "--times must be strictly increasing");
  return times;
}

// ── span ────────────────────────────────────────────────────────────────────

int run_span(const std::string& input, const std::string& ball_text, int m,
             const std::string& length_text, const CommonFlags& flags) {
  rf::SimplicialSet a = rf::read_geometry(input);
  rf::Ball ball = parse_ball(ball_text, a.n);
  double length = 0.0;  // <= 0 requests the automatic bound
  if (length_text != "auto") {
    try {
      length = std::stod(length_text);
    } catch (const std::exception&) {
      rf::fail(rf::ErrorCode::ParseError, "--L must be 'auto' or a positive number");
    }
    rf::require(length > 0, rf::ErrorCode::ParseError, "--L must be positive");
  }

  rf::SpanResult result = rf::span(a, ball, m, length);

  ensure_out_dir(flags.out_dir);
  rf::Json report = rf::report_document("span", flags.seed);
  report["input_file"] = fs::path(input).filename().string();
  report["result"] = rf::span_result_to_json(result);
  if (!flags.out_dir.empty()) {
    report["meshes"] = rf::Json::object();
    report["meshes"]["output"] = write_mesh(flags.out_dir, "A_tilde", result.root.a_tilde);
    report["meshes"]["exceptional"] = write_mesh(flags.out_dir, "S_tilde", result.root.s_tilde);
    rf::write_json(join_path(flags.out_dir, "report.json"), report);
  }

  bool ok = result.root.all_checks_pass() && result.spanning_inequality.ok();
  std::cout << "span: H^" << m - 1 << "(input) = " << result.input_measure << ", H^" << m
            << "(output) = " << result.output_measure << "\n"
            << "spanning inequality [" << result.spanning_inequality.verdict
            << "]: " << result.spanning_inequality.lhs
            << " <= " << result.spanning_inequality.rhs << "\n"
            << "note: " << result.convention_note << "\n";
  if (!ok) {
    std::vector<std::pair<std::string, rf::PropertyCheck>> failures;
    rf::collect_failures(result.root, failures);
    for (const auto& [path, chk] : failures)
      std::cout << "FAILED " << path << " / " << chk.name << ": " << chk.lhs
                << " vs " << chk.rhs << "\n";
  }
  std::cout << (ok ? "all checks pass" : "checks FAILED") << "\n";
  return ok ? 0 : 1;
}

// ── flow ────────────────────────────────────────────────────────────────────

int run_flow(const std::string& scenario_path, const std::string& times_text,
             const CommonFlags& flags) {
  rf::FlowRun run = rf::flow_run_from_json(rf::parse_json_file(scenario_path));
  ensure_out_dir(flags.out_dir);
  rf::Json report = rf::report_document("flow", flags.seed);
  report["scenario_file"] = fs::path(scenario_path).filename().string();
  report["kind"] = run.kind;

  bool ok = false;
  if (run.kind == "collapse") {
    std::vector<double> times = parse_times(times_text);
    rf::build_disk(run.scenario);
    rf::CollapseReport rep = rf::check_collapse(run.scenario, run.content, times);
    report["collapse"] = rf::collapse_report_to_json(rep);
    if (!flags.out_dir.empty()) {
      rf::Json meshes = rf::Json::array();
      for (size_t i = 0; i < times.size(); ++i) {
        rf::FlowOutput ev = rf::flow_evolve(run.content, run.scenario, times[i]);
        rf::Json entry;
        entry["time"] = rf::json_number(times[i]);
        entry["file"] = write_mesh(flags.out_dir, "evolved_" + std::to_string(i), ev.set);
        meshes.push_back(std::move(entry));
      }
      report["meshes"] = std::move(meshes);
    }
    ok = rep.pass(1e-3);
    std::cout << "flow collapse: final distance " << rep.collapse_final << ", boundary "
              << rep.boundary_distance << ", frozen movement " << rep.outside_movement
              << (rep.collapse_monotone ? " (monotone)" : " (NOT monotone)") << "\n";
  } else {
    for (auto& st : run.stages) rf::build_disk(st.scenario);
    rf::CompositionReport rep = rf::compose_flows(run.plan, run.stages, run.content);
    report["composition"] = rf::composition_report_to_json(rep);
    if (!flags.out_dir.empty())
      report["meshes"] = write_mesh(flags.out_dir, "evolved_final", rep.evolved);
    ok = rep.pass(1e-3);
    std::cout << "flow composition: boundary transfer " << rep.boundary_transfer
              << ", trace transfer " << rep.trace_transfer << "\n";
  }

  if (!flags.out_dir.empty())
    rf::write_json(join_path(flags.out_dir, "flow_report.json"), report);
  std::cout << (ok ? "all checks pass" : "checks FAILED") << "\n";
  return ok ? 0 : 1;
}

// ── constants ───────────────────────────────────────────────────────────────

int run_constants(int m, int n, const CommonFlags& flags) {
  rf::ConstantLedger ledger;
  rf::ConstantLedger::Table table = ledger.report_table(m, n);
  std::cout << "constants for target dimension " << m << " in ambient free dimension " << n
            << " (length multiplier " << table.length_multiplier << ")\n";
  for (const auto& row : table.rows) {
    std::cout << "  k = " << row.k << ": " << row.value;
    if (!row.closed_form.empty()) std::cout << "  [= " << row.closed_form << "]";
    std::cout << "\n";
  }
  std::cout << "note: " << table.convention_note << "\n";
  if (!flags.out_dir.empty()) {
    ensure_out_dir(flags.out_dir);
    rf::Json report = rf::report_document("constants", flags.seed);
    report["table"] = rf::constants_table_to_json(table);
    rf::write_json(join_path(flags.out_dir, "report.json"), report);
  }
  return 0;
}

// ── measure ─────────────────────────────────────────────────────────────────

int run_measure(const std::string& input, int d, const std::string& method, double grid,
                const CommonFlags& flags) {
  rf::SimplicialSet x = rf::read_geometry(input);
  rf::Json report = rf::report_document("measure", flags.seed);
  report["input_file"] = fs::path(input).filename().string();
  report["dimension"] = d;
  report["method"] = method;

  double value = 0.0;
  if (method == "simplicial") {
    rf::MeasureReport rep = rf::measure_simplicial(x, d);
    value = rep.value;
    report["measure"] = rf::measure_report_to_json(rep);
  } else if (method == "covering") {
    rf::require(grid > 0, rf::ErrorCode::ParseError, "--grid must be positive for covering");
    value = rf::measure_covering(x, d, grid);
    report["grid"] = rf::json_number(grid);
    report["measure"] = rf::json_number(value);
  } else {
    rf::fail(rf::ErrorCode::ParseError, "--method must be 'simplicial' or 'covering'");
  }

  std::cout << "measure (dimension " << d << ", " << method << "): " << value << "\n";
  if (!flags.out_dir.empty()) {
    ensure_out_dir(flags.out_dir);
    rf::write_json(join_path(flags.out_dir, "report.json"), report);
  }
  return 0;
}

// ── verify ──────────────────────────────────────────────────────────────────
// Built-in sanity suite: reference measures, estimator agreement, and a mesh
// convergence check. Mirrors the library's frozen reference values.

int run_verify(const CommonFlags& flags) {
  struct Line {
    std::string name;
    double got, want, tol;
  };
  std::vector<Line> lines;

  {
    rf::SimplicialSet seg(1);
    int a = seg.add_vertex(rf::make_vec({0.0}));
    int b = seg.add_vertex(rf::make_vec({1.0}));
    seg.add_simplex({a, b}, {});
    lines.push_back({"unit segment length", rf::hausdorff_measure(seg, 1), 0.5, 1e-12});
    lines.push_back({"unit segment covering", rf::measure_covering(seg, 1, 1e-3), 0.5, 0.025});
  }
  {
    // Unit-disk fan mesh at two resolutions; the finer one must land within
    // one percent of the normalized area 1.
    auto disk = [&](int sides) {
      rf::SimplicialSet mesh(2);
      int c = mesh.add_vertex(rf::make_vec({0.0, 0.0}));
      std::vector<int> ring;
      for (int i = 0; i < sides; ++i) {
        double t = 2.0 * M_PI * i / sides;
        ring.push_back(mesh.add_vertex(rf::make_vec({std::cos(t), std::sin(t)})));
      }
      for (int i = 0; i < sides; ++i)
        mesh.add_simplex({c, ring[static_cast<size_t>(i)],
                          ring[static_cast<size_t>((i + 1) % sides)]}, {});
      return mesh;
    };
    lines.push_back({"disk mesh area (256-gon)", rf::hausdorff_measure(disk(256), 2), 1.0, 0.01});
  }

  bool ok = true;
  rf::Json rows = rf::Json::array();
  for (const auto& l : lines) {
    bool pass = std::abs(l.got - l.want) <= l.tol;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << l.name << ": " << l.got << " (reference "
              << l.want << " +/- " << l.tol << ")\n";
    rf::Json row;
    row["name"] = l.name;
    row["value"] = rf::json_number(l.got);
    row["reference"] = rf::json_number(l.want);
    row["tolerance"] = rf::json_number(l.tol);
    row["pass"] = pass;
    rows.push_back(std::move(row));
  }
  if (!flags.out_dir.empty()) {
    ensure_out_dir(flags.out_dir);
    rf::Json report = rf::report_document("verify", flags.seed);
    report["checks"] = std::move(rows);
    rf::write_json(join_path(flags.out_dir, "report.json"), report);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spanning-set construction and deformation-flow toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;

  // span
  auto* span_cmd = app.add_subcommand("span", "Build a spanning competitor for a boundary");
  std::string span_input, span_ball, span_length = "auto";
  int span_m = 2;
  span_cmd->add_option("--input", span_input, "boundary geometry (JSON schema)")->required();
  span_cmd->add_option("--ball", span_ball, "ball as cx,cy,...,r")->required();
  span_cmd->add_option("--m", span_m, "target dimension (output is m-dimensional)");
  span_cmd->add_option("--L", span_length, "length bound, or 'auto'");
  span_cmd->add_option("--out", flags.out_dir, "output directory");
  span_cmd->add_option("--seed", flags.seed, "seed recorded in the report");

  // flow
  auto* flow_cmd = app.add_subcommand("flow", "Run a deformation-flow scenario");
  std::string flow_scenario, flow_times = "1,2,5,10,50";
  flow_cmd->add_option("--scenario", flow_scenario, "scenario file (JSON)")->required();
  flow_cmd->add_option("--times", flow_times, "comma-separated checkpoint times");
  flow_cmd->add_option("--out", flags.out_dir, "output directory");
  flow_cmd->add_option("--seed", flags.seed, "seed recorded in the report");

  // constants
  auto* const_cmd = app.add_subcommand("constants", "Print the constant ledger");
  int const_m = 2, const_n = 2;
  const_cmd->add_option("--m", const_m, "target dimension")->required();
  const_cmd->add_option("--n", const_n, "ambient free dimension")->required();
  const_cmd->add_option("--out", flags.out_dir, "output directory");
  const_cmd->add_option("--seed", flags.seed, "seed recorded in the report");

  // measure
  auto* meas_cmd = app.add_subcommand("measure", "Measure a simplicial complex");
  std::string meas_input, meas_method = "simplicial";
  int meas_d = 1;
  double meas_grid = 0.0;
  meas_cmd->add_option("--input", meas_input, "geometry file (JSON schema)")->required();
  meas_cmd->add_option("--d", meas_d, "measure dimension")->required();
  meas_cmd->add_option("--method", meas_method, "'simplicial' or 'covering'");
  meas_cmd->add_option("--grid", meas_grid, "covering grid width");
  meas_cmd->add_option("--out", flags.out_dir, "output directory");
  meas_cmd->add_option("--seed", flags.seed, "seed recorded in the report");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in sanity suite");
  verify_cmd->add_option("--out", flags.out_dir, "output directory");
  verify_cmd->add_option("--seed", flags.seed, "seed recorded in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits cleanly; bad flags are input errors
  }

  try {
    if (span_cmd->parsed()) return run_span(span_input, span_ball, span_m, span_length, flags);
    if (flow_cmd->parsed()) return run_flow(flow_scenario, flow_times, flags);
    if (const_cmd->parsed()) return run_constants(const_m, const_n, flags);
    if (meas_cmd->parsed()) return run_measure(meas_input, meas_d, meas_method, meas_grid, flags);
    if (verify_cmd->parsed()) return run_verify(flags);
  } catch (const rf::Error& e) {
    rf::Json err;
    err["error"]["code"] = rf::error_code_name(e.code);
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return e.code == rf::ErrorCode::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    rf::Json err;
    err["error"]["code"] = "Internal";
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
  return 2;
}
