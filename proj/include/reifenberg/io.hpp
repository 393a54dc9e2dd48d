#pragma once

// Serialization: geometry files (JSON schema, OBJ, OFF), and report builders
// that render the analysis structs into a schema-versioned JSON document.
// All numbers use shortest round-trip formatting; non-finite values are
// encoded as the strings "inf", "-inf", "nan" so documents stay valid JSON
// and byte-stable. Reports carry no timestamps or absolute paths.

#include "reifenberg/base.hpp"
#include "reifenberg/constants.hpp"
#include "reifenberg/flow.hpp"
#include "reifenberg/measure.hpp"
#include "reifenberg/simplicial.hpp"
#include "reifenberg/slicing.hpp"
#include "reifenberg/span.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace reifenberg {

using Json = nlohmann::ordered_json;

// ── Number encoding ─────────────────────────────────────────────────────────

inline Json json_number(double x) {
  if (std::isnan(x)) return Json("nan");
  if (std::isinf(x)) return Json(x > 0 ? "inf" : "-inf");
  return Json(x);
}

inline double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(ErrorCode::ParseError, "expected a number");
}

// ── Geometry JSON ───────────────────────────────────────────────────────────
// { "n": int, "dim": int, "vertices": [[f64...]], "simplices": [[int...]],
//   "tags": { "<simplex index>": ["tag", ...], ... } }
// "dim" is the top simplex dimension (-1 for a complex with no simplices).

inline int top_dimension(const SimplicialSet& x) {
  int d = -1;
  for (const auto& s : x.simplices) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

inline Json geometry_to_json(const SimplicialSet& x) {
  Json j;
  j["n"] = x.n;
  j["dim"] = top_dimension(x);
  Json verts = Json::array();
  for (const auto& v : x.vertices) {
    Json row = Json::array();
    for (int i = 0; i < v.size(); ++i) row.push_back(json_number(v[i]));
    verts.push_back(std::move(row));
  }
  j["vertices"] = std::move(verts);
  Json simps = Json::array();
  for (const auto& s : x.simplices) simps.push_back(s);
  j["simplices"] = std::move(simps);
  Json tags = Json::object();
  for (size_t s = 0; s < x.tags.size(); ++s)
    if (!x.tags[s].empty()) tags[std::to_string(s)] = x.tags[s];
  j["tags"] = std::move(tags);
  return j;
}

inline SimplicialSet geometry_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::ParseError, "geometry document must be an object");
  require(j.contains("n") && j["n"].is_number_integer(), ErrorCode::ParseError,
          "geometry needs integer field 'n'");
  int n = j["n"].get<int>();
  require(n >= 1, ErrorCode::ParseError, "ambient dimension must be >= 1");
  SimplicialSet x(n);
  require(j.contains("vertices") && j["vertices"].is_array(), ErrorCode::ParseError,
          "geometry needs array field 'vertices'");
  for (const auto& row : j["vertices"]) {
    require(row.is_array() && static_cast<int>(row.size()) == n, ErrorCode::ParseError,
            "vertex rows must have length n");
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = number_from_json(row[static_cast<size_t>(i)]);
    x.add_vertex(v);
  }
  require(j.contains("simplices") && j["simplices"].is_array(), ErrorCode::ParseError,
          "geometry needs array field 'simplices'");
  for (const auto& row : j["simplices"]) {
    require(row.is_array() && !row.empty(), ErrorCode::ParseError,
            "simplices must be nonempty index arrays");
    std::vector<int> ix;
    for (const auto& e : row) {
      require(e.is_number_integer(), ErrorCode::ParseError, "simplex indices must be integers");
      int i = e.get<int>();
      require(i >= 0 && i < static_cast<int>(x.vertices.size()), ErrorCode::ParseError,
              "simplex index out of range");
      ix.push_back(i);
    }
    x.add_simplex(ix, {});
  }
  if (j.contains("tags")) {
    require(j["tags"].is_object(), ErrorCode::ParseError, "'tags' must be an object");
    for (const auto& [key, val] : j["tags"].items()) {
      int s = -1;
      try {
        s = std::stoi(key);
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "tag keys must be simplex indices");
      }
      require(s >= 0 && s < static_cast<int>(x.simplices.size()), ErrorCode::ParseError,
              "tag key out of range");
      require(val.is_array(), ErrorCode::ParseError, "tag values must be arrays of strings");
      for (const auto& t : val) {
        require(t.is_string(), ErrorCode::ParseError, "tags must be strings");
        x.add_tag(s, t.get<std::string>());
      }
    }
  }
  if (j.contains("dim")) {
    require(j["dim"].is_number_integer(), ErrorCode::ParseError, "'dim' must be an integer");
    require(j["dim"].get<int>() == top_dimension(x), ErrorCode::ParseError,
            "'dim' disagrees with the simplices");
  }
  try {
    x.validate();
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, std::string("invalid geometry: ") + e.what());
  }
  return x;
}

// ── File helpers ────────────────────────────────────────────────────────────

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::ParseError, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::BadInput, "cannot write file: " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCode::BadInput, "short write: " + path);
}

inline Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("JSON parse failure in ") + path + ": " + e.what());
  }
}

inline SimplicialSet read_geometry(const std::string& path) {
  return geometry_from_json(parse_json_file(path));
}

inline void write_json(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline void write_geometry(const std::string& path, const SimplicialSet& x) {
  write_json(path, geometry_to_json(x));
}

// ── OBJ (ambient dimension 3 only) ──────────────────────────────────────────
// v lines for vertices; p/l/f elements with 1-based indices. Tags are not
// representable in OBJ; use the JSON schema when they matter.

namespace detail {

inline std::string format_coord(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline std::string obj_text(const SimplicialSet& x) {
  require(x.n == 3, ErrorCode::BadInput, "OBJ export requires ambient dimension 3");
  std::ostringstream out;
  for (const auto& v : x.vertices)
    out << "v " << detail::format_coord(v[0]) << ' ' << detail::format_coord(v[1]) << ' '
        << detail::format_coord(v[2]) << '\n';
  for (const auto& s : x.simplices) {
    if (s.size() == 1)
      out << "p " << s[0] + 1 << '\n';
    else if (s.size() == 2)
      out << "l " << s[0] + 1 << ' ' << s[1] + 1 << '\n';
    else if (s.size() == 3)
      out << "f " << s[0] + 1 << ' ' << s[1] + 1 << ' ' << s[2] + 1 << '\n';
    else
      fail(ErrorCode::BadInput, "OBJ export supports content dimension <= 2");
  }
  return out.str();
}

inline void write_obj(const std::string& path, const SimplicialSet& x) {
  write_text_file(path, obj_text(x));
}

inline SimplicialSet read_obj_text(const std::string& text) {
  SimplicialSet x(3);
  std::istringstream in(text);
  std::string line;
  auto resolve = [&](long i) {
    long count = static_cast<long>(x.vertices.size());
    long v = i < 0 ? count + i : i - 1;  // negative OBJ indices are relative
    require(v >= 0 && v < count, ErrorCode::ParseError, "OBJ index out of range");
    return static_cast<int>(v);
  };
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head.empty() || head[0] == '#') continue;
    if (head == "v") {
      Vec v(3);
      require(static_cast<bool>(ls >> v[0] >> v[1] >> v[2]), ErrorCode::ParseError,
              "malformed OBJ vertex");
      x.add_vertex(v);
    } else if (head == "p" || head == "l" || head == "f") {
      std::vector<int> ix;
      std::string tok;
      while (ls >> tok) {
        // Strip texture/normal references ("i/j/k" -> "i").
        size_t slash = tok.find('/');
        if (slash != std::string::npos) tok.resize(slash);
        try {
          ix.push_back(resolve(std::stol(tok)));
        } catch (const std::invalid_argument&) {
          fail(ErrorCode::ParseError, "malformed OBJ index");
        } catch (const std::out_of_range&) {
          fail(ErrorCode::ParseError, "malformed OBJ index");
        }
      }
      require(!ix.empty(), ErrorCode::ParseError, "empty OBJ element");
      if (head == "p") {
        for (int i : ix) x.add_simplex({i}, {});
      } else if (head == "l") {
        require(ix.size() >= 2, ErrorCode::ParseError, "OBJ line needs two indices");
        for (size_t i = 0; i + 1 < ix.size(); ++i) x.add_simplex({ix[i], ix[i + 1]}, {});
      } else {
        require(ix.size() >= 3, ErrorCode::ParseError, "OBJ face needs three indices");
        for (size_t i = 1; i + 1 < ix.size(); ++i)  // fan triangulation
          x.add_simplex({ix[0], ix[i], ix[i + 1]}, {});
      }
    }
    // Other OBJ directives (vn, vt, usemtl, ...) are ignored.
  }
  x.validate();
  return x;
}

inline SimplicialSet read_obj(const std::string& path) {
  return read_obj_text(read_text_file(path));
}

// ── OFF (general small n) ───────────────────────────────────────────────────
// For n != 3 the nOFF variant is used and a comment notes that coordinates
// are written verbatim (no projection applied). Elements are written as
// index lists with a leading count, points and segments included.

inline std::string off_text(const SimplicialSet& x) {
  std::ostringstream out;
  if (x.n == 3) {
    out << "OFF\n";
  } else {
    out << "nOFF\n" << x.n << "\n";
    out << "# coordinates written verbatim in ambient dimension " << x.n
        << "; project externally for viewing\n";
  }
  out << x.vertices.size() << ' ' << x.simplices.size() << " 0\n";
  for (const auto& v : x.vertices) {
    for (int i = 0; i < v.size(); ++i) out << (i ? " " : "") << detail::format_coord(v[i]);
    out << '\n';
  }
  for (const auto& s : x.simplices) {
    out << s.size();
    for (int i : s) out << ' ' << i;
    out << '\n';
  }
  return out.str();
}

inline void write_off(const std::string& path, const SimplicialSet& x) {
  write_text_file(path, off_text(x));
}

// ── Ball and slice JSON ─────────────────────────────────────────────────────

inline Json ball_to_json(const Ball& b) {
  Json j;
  Json c = Json::array();
  for (int i = 0; i < b.center.size(); ++i) c.push_back(json_number(b.center[i]));
  j["center"] = std::move(c);
  j["radius"] = json_number(b.radius);
  return j;
}

inline Ball ball_from_json(const Json& j) {
  require(j.is_object() && j.contains("center") && j.contains("radius"), ErrorCode::ParseError,
          "ball needs 'center' and 'radius'");
  require(j["center"].is_array() && !j["center"].empty(), ErrorCode::ParseError,
          "ball center must be a nonempty array");
  Ball b;
  b.center.resize(static_cast<Eigen::Index>(j["center"].size()));
  for (size_t i = 0; i < j["center"].size(); ++i)
    b.center[static_cast<Eigen::Index>(i)] = number_from_json(j["center"][i]);
  b.radius = number_from_json(j["radius"]);
  require(b.radius > 0 && std::isfinite(b.radius), ErrorCode::ParseError,
          "ball radius must be positive and finite");
  return b;
}

inline Json slice_to_json(const Slice& w) {
  Json j;
  j["n"] = w.n;
  j["free"] = w.free;
  Json lo = Json::array(), hi = Json::array(), fixed = Json::array();
  for (double v : w.lo) lo.push_back(json_number(v));
  for (double v : w.hi) hi.push_back(json_number(v));
  for (double v : w.fixed) fixed.push_back(json_number(v));
  j["lo"] = std::move(lo);
  j["hi"] = std::move(hi);
  j["fixed"] = std::move(fixed);
  return j;
}

inline Slice slice_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::ParseError, "slice must be an object");
  for (const char* key : {"n", "free", "lo", "hi", "fixed"})
    require(j.contains(key), ErrorCode::ParseError,
            std::string("slice needs field '") + key + "'");
  Slice w;
  require(j["n"].is_number_integer(), ErrorCode::ParseError, "slice 'n' must be an integer");
  w.n = j["n"].get<int>();
  require(j["free"].is_array(), ErrorCode::ParseError, "slice 'free' must be an array");
  for (const auto& e : j["free"]) {
    require(e.is_number_integer(), ErrorCode::ParseError, "free axes must be integers");
    w.free.push_back(e.get<int>());
  }
  for (const auto& e : j["lo"]) w.lo.push_back(number_from_json(e));
  for (const auto& e : j["hi"]) w.hi.push_back(number_from_json(e));
  for (const auto& e : j["fixed"]) w.fixed.push_back(number_from_json(e));
  try {
    w.validate();
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, std::string("invalid slice: ") + e.what());
  }
  return w;
}

// ── Flow scenario files ─────────────────────────────────────────────────────
// { "kind": "collapse", "ball": ..., "slice": ..., "apex": [...],
//   "obstacle": <geometry, optional>, "content": <geometry>,
//   "delta": f, "eps": f, "cutoff_scale": f, "dt": f, "refine_per_edge": i }
// or
// { "kind": "composition", "ball": ..., "parent": <slice>,
//   "slabs": [<slice>...], "walls": [<geometry>...], "eps": f,
//   "refine_per_edge": i, "content": <geometry>,
//   "stages": [ { "slice": ..., "apex": ..., "obstacle": ...,
//                 "delta": f, "eps": f, "cutoff_scale": f, "dt": f,
//                 "time": f }, ... ] }
// Parsing performs schema checks only; geometric preconditions (including
// the transverse-disk construction) are validated by the caller.

struct FlowRun {
  std::string kind;  // "collapse" or "composition"
  SimplicialSet content{1};

  FlowScenario scenario;  // collapse runs

  CompositionPlan plan;              // composition runs
  std::vector<ComposeStage> stages;  // composition runs
};

namespace detail {

inline Vec vec_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::ParseError, "expected a coordinate array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number_from_json(j[i]);
  return v;
}

inline FlowScenario scenario_from_json(const Json& j, const Ball& ball) {
  for (const char* key : {"slice", "apex", "delta", "eps"})
    require(j.contains(key), ErrorCode::ParseError,
            std::string("scenario needs field '") + key + "'");
  FlowScenario sc;
  sc.b = ball;
  sc.q = slice_from_json(j["slice"]);
  sc.p = vec_from_json(j["apex"]);
  sc.a = j.contains("obstacle") && !j["obstacle"].is_null() ? geometry_from_json(j["obstacle"])
                                                            : SimplicialSet(sc.q.n);
  sc.delta = number_from_json(j["delta"]);
  sc.eps = number_from_json(j["eps"]);
  if (j.contains("cutoff_scale")) sc.cutoff_scale = number_from_json(j["cutoff_scale"]);
  if (j.contains("dt")) sc.dt = number_from_json(j["dt"]);
  if (j.contains("refine_per_edge")) {
    require(j["refine_per_edge"].is_number_integer(), ErrorCode::ParseError,
            "'refine_per_edge' must be an integer");
    sc.refine_per_edge = j["refine_per_edge"].get<int>();
  }
  return sc;
}

}  // namespace detail

inline FlowRun flow_run_from_json(const Json& j) {
  require(j.is_object() && j.contains("kind") && j["kind"].is_string(), ErrorCode::ParseError,
          "scenario needs a 'kind' string");
  FlowRun run;
  run.kind = j["kind"].get<std::string>();
  require(j.contains("ball"), ErrorCode::ParseError, "scenario needs a 'ball'");
  Ball ball = ball_from_json(j["ball"]);
  require(j.contains("content"), ErrorCode::ParseError, "scenario needs 'content'");
  run.content = geometry_from_json(j["content"]);
  require(run.content.n == ball.n(), ErrorCode::ParseError,
          "content and ball dimensions disagree");

  if (run.kind == "collapse") {
    run.scenario = detail::scenario_from_json(j, ball);
    return run;
  }
  if (run.kind == "composition") {
    for (const char* key : {"parent", "slabs", "walls", "eps", "stages"})
      require(j.contains(key), ErrorCode::ParseError,
              std::string("composition needs field '") + key + "'");
    run.plan.b = ball;
    run.plan.w = slice_from_json(j["parent"]);
    require(j["slabs"].is_array() && j["walls"].is_array() && j["stages"].is_array(),
            ErrorCode::ParseError, "'slabs', 'walls', 'stages' must be arrays");
    for (const auto& s : j["slabs"]) run.plan.slabs.push_back(slice_from_json(s));
    for (const auto& g : j["walls"]) run.plan.walls.push_back(geometry_from_json(g));
    run.plan.eps = number_from_json(j["eps"]);
    if (j.contains("refine_per_edge")) {
      require(j["refine_per_edge"].is_number_integer(), ErrorCode::ParseError,
              "'refine_per_edge' must be an integer");
      run.plan.refine_per_edge = j["refine_per_edge"].get<int>();
    }
    for (const auto& st : j["stages"]) {
      require(st.is_object() && st.contains("time"), ErrorCode::ParseError,
              "each stage needs a 'time'");
      ComposeStage stage;
      stage.scenario = detail::scenario_from_json(st, ball);
      stage.time = number_from_json(st["time"]);
      run.stages.push_back(std::move(stage));
    }
    return run;
  }
  fail(ErrorCode::ParseError, "scenario 'kind' must be 'collapse' or 'composition'");
}

// ── Report builders ─────────────────────────────────────────────────────────

inline Json check_to_json(const PropertyCheck& c) {
  Json j;
  j["name"] = c.name;
  j["verdict"] = c.verdict;
  j["lhs"] = json_number(c.lhs);
  j["rhs"] = json_number(c.rhs);
  j["note"] = c.note;
  return j;
}

inline Json measure_report_to_json(const MeasureReport& r) {
  Json j;
  j["value"] = json_number(r.value);
  j["top_simplex_count"] = r.top_simplex_count;
  j["degenerate_count"] = r.degenerate_count;
  j["infinite"] = r.infinite;
  return j;
}

inline Json slab_decomposition_to_json(const SlabDecomposition& d) {
  Json j;
  j["axis"] = d.axis;
  j["step"] = json_number(d.step);
  j["offset"] = json_number(d.offset);
  j["section_dim"] = d.section_dim;
  j["wall_measure"] = json_number(d.wall_measure);
  j["exceptional_wall_measure"] = json_number(d.exceptional_wall_measure);
  j["averaging_bound"] = json_number(d.averaging_bound);
  Json planes = Json::array();
  for (double p : d.planes) planes.push_back(json_number(p));
  j["planes"] = std::move(planes);
  j["slab_count"] = d.slabs.size();
  return j;
}

inline Json span_node_to_json(const SpanNode& node) {
  Json j;
  j["path"] = node.path;
  j["case"] = node.case_name;
  j["m"] = node.m;
  j["k_input"] = node.k_input;
  j["k_effective"] = node.k_effective;
  j["ambient_free"] = node.N;
  j["L"] = json_number(node.L);
  j["zeta"] = json_number(node.zeta);
  j["constant"] = json_number(node.k_value);
  if (node.case_name == "split")
    j["child_length_bound"] = json_number(node.child_length_bound);
  j["measure_in"] = json_number(node.measure_in);
  j["measure_out"] = json_number(node.measure_out);
  j["exceptional_measure"] = json_number(node.exceptional_measure);
  if (node.family) j["family"] = slab_decomposition_to_json(*node.family);
  Json checks = Json::array();
  for (const auto& c : node.checks) checks.push_back(check_to_json(c));
  j["checks"] = std::move(checks);
  Json children = Json::array();
  for (const auto& ch : node.children) children.push_back(span_node_to_json(ch));
  j["children"] = std::move(children);
  return j;
}

inline Json span_result_to_json(const SpanResult& r) {
  Json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["L"] = json_number(r.L);
  j["input_measure"] = json_number(r.input_measure);
  j["output_measure"] = json_number(r.output_measure);
  j["final_constant"] = json_number(r.final_k);
  j["spanning_inequality"] = check_to_json(r.spanning_inequality);
  j["convention_note"] = r.convention_note;
  j["all_checks_pass"] = r.root.all_checks_pass();
  j["tree"] = span_node_to_json(r.root);
  return j;
}

inline Json collapse_report_to_json(const CollapseReport& r) {
  Json j;
  Json times = Json::array(), dists = Json::array();
  for (double t : r.times) times.push_back(json_number(t));
  for (double d : r.collapse_distances) dists.push_back(json_number(d));
  j["times"] = std::move(times);
  j["collapse_distances"] = std::move(dists);
  j["collapse_final"] = json_number(r.collapse_final);
  j["collapse_monotone"] = r.collapse_monotone;
  j["outside_movement"] = json_number(r.outside_movement);
  j["outside_vertices"] = r.outside_vertices;
  j["boundary_distance"] = json_number(r.boundary_distance);
  j["max_ray_drift"] = json_number(r.max_ray_drift);
  j["hypothesis_gap"] = json_number(r.hypothesis_gap);
  return j;
}

inline Json composition_report_to_json(const CompositionReport& r) {
  Json j;
  j["boundary_transfer"] = json_number(r.boundary_transfer);
  j["trace_transfer"] = json_number(r.trace_transfer);
  j["max_ray_drift"] = json_number(r.max_ray_drift);
  j["evolved_vertices"] = r.evolved.vertices.size();
  return j;
}

inline Json constants_table_to_json(const ConstantLedger::Table& t) {
  Json j;
  j["m"] = t.m;
  j["ambient_free"] = t.N;
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r;
    r["k"] = row.k;
    r["value"] = json_number(row.value);
    r["closed_form"] = row.closed_form;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["length_multiplier"] = json_number(t.length_multiplier);
  j["convention_note"] = t.convention_note;
  return j;
}

// Top-level document wrapper: schema version, the subcommand, and the seed
// (so reruns with identical inputs are byte-comparable).
inline Json report_document(const std::string& subcommand, std::uint64_t seed) {
  Json j;
  j["schema"] = 1;
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  return j;
}

}  // namespace reifenberg
