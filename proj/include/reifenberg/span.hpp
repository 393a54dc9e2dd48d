#pragma once

// Recursive spanning construction. Each node receives content A (with the
// exceptional part S marked by simplex tags), a ball B, a slice W, a length
// bound L, and indices (m, k, N). It produces a filled complex whose measure
// one dimension up is controlled by the constant ledger, together with an
// exceptional residue, and records per-node property checks:
//   (a) boundary trace: the output meets the sphere only inside the input;
//   (b) measure bound: H^m(out) <= K(m,k,N) * L * H^{m-1}(A ∩ W);
//   (c) rectifiability: not applicable to finite simplicial output;
//   (d) containment: non-exceptional vertices lie in the convex hull of the
//       non-exceptional input and in its K*L-neighborhood.
//
// Cases: m = 1 emits a single interior point (requires A ∩ W empty); a node
// whose (k+1)-width is within L promotes k (delegation); k = N cones A ∩ W
// from a deterministic apex; otherwise the slice is split into width-L slabs
// whose shared walls get lower-dimensional subproblems.

#include "reifenberg/base.hpp"
#include "reifenberg/clipping.hpp"
#include "reifenberg/coning.hpp"
#include "reifenberg/constants.hpp"
#include "reifenberg/geometry.hpp"
#include "reifenberg/measure.hpp"
#include "reifenberg/simplicial.hpp"
#include "reifenberg/slicing.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace reifenberg {

struct PropertyCheck {
  std::string name;
  std::string verdict;  // "pass", "fail", or "not_applicable"
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;

  bool ok() const { return verdict != "fail"; }
};

struct SpanConfig {
  double tol = kGeomTol;
  double check_tol = 1e-9;  // slack on measure inequalities and boundary traces
  double hull_tol = 1e-6;   // slack on convex-hull membership
  int n_offsets = 1024;     // wall-offset search grid
};

struct SpanNode {
  std::string path;
  std::string case_name;  // "point", "cone", or "split"
  int m = 0, k_input = 0, k_effective = 0, N = 0;
  double L = 0.0;
  double zeta = 0.0;
  double k_value = 0.0;            // ledger constant at (m, k_effective, N)
  double child_length_bound = 0.0; // expanded bound handed to slab children (split only)

  Ball ball;
  Slice w;
  SimplicialSet a_w;      // input restricted to the slice (tags preserved)
  SimplicialSet a_tilde;  // output complex
  SimplicialSet s_tilde;  // exceptional part of the output

  double measure_in = 0.0;           // H^{m-1}(A ∩ W)
  double measure_out = 0.0;          // H^m(output)
  double exceptional_measure = 0.0;  // H^{m-1}(exceptional part)

  std::optional<SlabDecomposition> family;  // split nodes only
  std::vector<PropertyCheck> checks;
  std::vector<SpanNode> children;

  bool all_checks_pass() const {
    for (const auto& c : checks)
      if (!c.ok()) return false;
    for (const auto& ch : children)
      if (!ch.all_checks_pass()) return false;
    return true;
  }
};

struct SpanResult {
  SpanNode root;
  int m = 0, n = 0;
  double L = 0.0;
  double input_measure = 0.0;   // H^{m-1}(A)
  double output_measure = 0.0;  // H^m(root output)
  double final_k = 0.0;
  PropertyCheck spanning_inequality;  // H^m(out)^{m-1} <= final_k * H^{m-1}(in)^m
  std::string convention_note;
};

namespace detail {

inline SimplicialSet nonexceptional_part(const SimplicialSet& x) {
  return x.filter([&](int s) { return !x.has_tag(s, kTagExceptional); });
}

inline SimplicialSet exceptional_part(const SimplicialSet& x) {
  return x.filter([&](int s) { return x.has_tag(s, kTagExceptional); });
}

inline void tag_all(SimplicialSet& x, const std::string& tag) {
  for (size_t s = 0; s < x.simplices.size(); ++s) x.add_tag(static_cast<int>(s), tag);
}

// Vertices referenced by at least one non-exceptional simplex.
inline std::vector<Vec> nonexceptional_vertices(const SimplicialSet& x) {
  std::vector<char> seen(x.vertices.size(), 0);
  for (size_t s = 0; s < x.simplices.size(); ++s) {
    if (x.has_tag(static_cast<int>(s), kTagExceptional)) continue;
    for (int i : x.simplices[s]) seen[static_cast<size_t>(i)] = 1;
  }
  std::vector<Vec> out;
  for (size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(x.vertices[i]);
  return out;
}

}  // namespace detail

class SpanEngine {
 public:
  explicit SpanEngine(SpanConfig cfg = {}) : cfg_(cfg) {}

  ConstantLedger& ledger() { return ledger_; }

  struct NodeInput {
    SimplicialSet a;  // exceptional part marked by tags
    Ball b;
    Slice w;
    double L = 0.0;
    double zeta = 0.0;
    int m = 0, k = 0, N = 0;
  };

  SpanNode run_node(const NodeInput& in, const std::string& path) {
    SpanNode node;
    node.path = path;
    node.m = in.m;
    node.k_input = in.k;
    node.k_effective = in.k;
    node.N = in.N;
    node.L = in.L;
    node.zeta = in.zeta;
    node.ball = in.b;
    node.w = in.w;

    require(in.w.d() == in.N, ErrorCode::PreconditionHit,
            "slice dimension disagrees with node index at " + path);
    require(in.m >= 1 && in.k >= 0 && in.k <= in.N, ErrorCode::PreconditionHit,
            "node indices out of range at " + path);
    require(in.L > 0, ErrorCode::PreconditionHit, "length bound must be positive at " + path);
    require(in.w.k_width(std::min(in.k, in.w.d())) <= in.L + cfg_.tol, ErrorCode::PreconditionHit,
            "length bound below the slice k-width at " + path);

    node.a_w = clip_to_slice(in.a, in.w, cfg_.tol).deduped();
    node.measure_in = node.a_w.empty() ? 0.0 : hausdorff_measure(node.a_w, in.m - 1, cfg_.tol);

    if (in.m >= 2) {
      double need = 4.0 * std::pow(node.measure_in, 1.0 / static_cast<double>(in.m - 1));
      require(in.L >= need - cfg_.tol, ErrorCode::PreconditionHit,
              "length bound below the content bound at " + path);
      // Clips may drop dimension (a slab can meet a curve in isolated points,
      // and wall outputs are points); only content above m-1 is malformed.
      require(node.a_w.empty() || node.a_w.dim() <= in.m - 1, ErrorCode::DimensionMismatch,
              "content dimension exceeds the node index at " + path);
    }

    if (in.m == 1) {
      point_case(in, node);
    } else {
      // Delegation: promote k while the (k+1)-width already fits the bound.
      int kl = in.k;
      while (kl < in.N && in.w.k_width(kl + 1) <= in.L + cfg_.tol) ++kl;
      node.k_effective = kl;
      if (kl == in.N)
        cone_case(in, node);
      else
        split_case(in, node, kl);
    }

    node.k_value = in.m == 1 ? kOneDimensionalSeed : ledger_.value(in.m, node.k_effective, in.N);
    node.s_tilde = detail::exceptional_part(node.a_tilde);
    node.measure_out = node.a_tilde.empty() ? 0.0 : hausdorff_measure(node.a_tilde, in.m, cfg_.tol);
    node.exceptional_measure =
        node.s_tilde.empty() ? 0.0 : hausdorff_measure(node.s_tilde, in.m - 1, cfg_.tol);

    standard_checks(node);
    return node;
  }

  // Re-evaluate the geometric checks of a node (and its subtree) from the
  // stored complexes; used after the fact, e.g. under fault injection.
  // Split-specific ledger checks are only produced during construction.
  void recheck(SpanNode& node) {
    node.s_tilde = detail::exceptional_part(node.a_tilde);
    node.measure_in = node.a_w.empty() ? 0.0 : hausdorff_measure(node.a_w, node.m - 1, cfg_.tol);
    node.measure_out =
        node.a_tilde.empty() ? 0.0 : hausdorff_measure(node.a_tilde, node.m, cfg_.tol);
    node.exceptional_measure =
        node.s_tilde.empty() ? 0.0 : hausdorff_measure(node.s_tilde, node.m - 1, cfg_.tol);
    node.checks.clear();
    standard_checks(node);
    for (auto& ch : node.children) recheck(ch);
  }

 private:
  void point_case(const NodeInput& in, SpanNode& node) {
    node.case_name = "point";
    require(node.a_w.empty(), ErrorCode::PreconditionHit,
            "point case requires the content to miss the slice at " + node.path);
    SimplicialSet none(in.b.n());
    Vec p = pick_cone_point(none, none, in.w, in.b, cfg_.tol);
    node.a_tilde = point_set(p, {kTagExceptional});
  }

  void cone_case(const NodeInput& in, SpanNode& node) {
    node.case_name = "cone";
    SimplicialSet s_w = detail::exceptional_part(node.a_w);
    Vec p = pick_cone_point(node.a_w, s_w, in.w, in.b, cfg_.tol);
    node.a_tilde = cone(node.a_w, p, cfg_.tol);
    // When no non-exceptional content exists the whole output (the apex
    // included) is exceptional residue; this keeps the containment property
    // meaningful at the parent, whose hull knows nothing about the apex.
    if (detail::nonexceptional_part(node.a_w).empty())
      detail::tag_all(node.a_tilde, kTagExceptional);
  }

  void split_case(const NodeInput& in, SpanNode& node, int kl) {
    node.case_name = "split";

    // Widest direction, smallest index on ties; its width exceeds L because
    // the (kl+1)-width does.
    int axis = -1;
    double best = -kInf;
    for (int slot = 0; slot < in.w.d(); ++slot) {
      double wd = in.w.hi[static_cast<size_t>(slot)] - in.w.lo[static_cast<size_t>(slot)];
      if (wd > best + cfg_.tol) {
        best = wd;
        axis = in.w.free[static_cast<size_t>(slot)];
      }
    }
    require(best > in.L, ErrorCode::PreconditionHit,
            "split with no direction wider than the bound at " + node.path);

    SimplicialSet s_w = detail::exceptional_part(node.a_w);
    SlabDecomposition family = choose_hyperplane_family(node.a_w, s_w, in.w, axis, in.L,
                                                        cfg_.n_offsets, cfg_.tol);
    family = consecutive_planes(in.w, in.b, family, cfg_.tol);
    family = slab_decompose(in.w, family);
    node.family = family;

    // Wall subproblems on the interior planes. Their outputs join the
    // content handed to every slab; their exceptional parts stay tagged.
    SimplicialSet enriched = node.a_w;
    std::vector<double> wall_out_measures;
    std::vector<double> wall_section_measures;
    for (size_t j = 1; j + 1 < family.planes.size(); ++j) {
      NodeInput wall;
      wall.b = in.b;
      wall.w = in.w.with_fixed(axis, family.planes[j]);
      wall.a = node.a_w;
      wall.L = in.L;
      wall.zeta = std::min(in.L / 4.0, in.zeta / 2.0);
      wall.m = in.m - 1;
      wall.k = 0;
      wall.N = in.N - 1;
      SpanNode child =
          run_node(wall, node.path + "/wall" + std::to_string(static_cast<int>(j)));
      wall_out_measures.push_back(child.measure_out);
      wall_section_measures.push_back(
          wall_section_measure(node.a_w, axis, family.planes[j], in.m - 2, cfg_.tol).measure);
      SimplicialSet tagged = child.a_tilde;
      detail::tag_all(tagged, kTagExceptional);
      enriched.append(tagged);
      node.children.push_back(std::move(child));
    }

    // Slab subproblems with the expanded length bound.
    double expanded = ledger_.expanded_length_bound(in.m, in.L, in.N);
    node.child_length_bound = expanded;
    double zeta_wall = std::min(in.L / 4.0, in.zeta / 2.0);
    double worst_slab_need = 0.0;
    node.a_tilde = SimplicialSet(in.b.n());
    for (size_t j = 0; j < family.slabs.size(); ++j) {
      NodeInput slab;
      slab.b = in.b;
      slab.w = family.slabs[j];
      slab.a = enriched;
      slab.L = expanded;
      slab.zeta = zeta_wall / 2.0;
      slab.m = in.m;
      slab.k = kl + 1;
      slab.N = in.N;
      SimplicialSet probe = clip_to_slice(enriched, slab.w, cfg_.tol);
      double ms = probe.empty() ? 0.0 : hausdorff_measure(probe, in.m - 1, cfg_.tol);
      worst_slab_need = std::max(
          worst_slab_need, 4.0 * std::pow(ms, 1.0 / static_cast<double>(in.m - 1)));
      SpanNode child = run_node(slab, node.path + "/slab" + std::to_string(static_cast<int>(j)));
      node.a_tilde.append(child.a_tilde);
      node.children.push_back(std::move(child));
    }

    // Split-specific ledger checks.
    double k0 = ledger_.value(in.m - 1, 0, in.N - 1);
    double sum_wall_out = 0.0, sum_sections = 0.0;
    for (double v : wall_out_measures) sum_wall_out += v;
    for (double v : wall_section_measures) sum_sections += v;
    push_check(node, "wall_chain_ledger", sum_wall_out, k0 * in.L * sum_sections + cfg_.check_tol,
               "sum of wall outputs vs ledger times wall sections");
    push_check(node, "wall_chain_input", k0 * in.L * sum_sections,
               2.0 * k0 * node.measure_in + cfg_.check_tol,
               "wall sections vs averaging bound on the input");
    push_check(node, "slab_length_bound", worst_slab_need, expanded + cfg_.check_tol,
               "expanded bound covers every slab subproblem");
  }

  void standard_checks(SpanNode& node) {
    // (a) boundary trace.
    double worst_boundary = 0.0;
    for (const auto& v : node.a_tilde.vertices) {
      if (std::abs(node.ball.sphere_offset(v)) > cfg_.check_tol) continue;
      double d = node.a_w.empty() ? kInf : set_distance(node.a_w, v);
      worst_boundary = std::max(worst_boundary, d);
    }
    push_check(node, "boundary_trace", worst_boundary, cfg_.check_tol,
               "output sphere vertices sit on the input");

    // (b) measure bound.
    push_check(node, "measure_bound", node.measure_out,
               node.k_value * node.L * node.measure_in + cfg_.check_tol,
               "output measure vs ledger bound");

    // (c) rectifiability: finite simplicial complexes are rectifiable as built.
    PropertyCheck c;
    c.name = "rectifiability";
    c.verdict = "not_applicable";
    c.note = "finite simplicial output";
    node.checks.push_back(std::move(c));

    // (d) containment of non-exceptional output vertices.
    SimplicialSet hull_base = detail::nonexceptional_part(node.a_w);
    std::vector<Vec> hull_pts;
    for (int ix : hull_base.referenced_vertices())
      hull_pts.push_back(hull_base.vertices[static_cast<size_t>(ix)]);
    std::vector<Vec> outside = detail::nonexceptional_vertices(node.a_tilde);
    double worst_hull = 0.0, worst_nbhd = 0.0;
    bool orphaned = false;
    for (const auto& v : outside) {
      if (hull_pts.empty()) {
        orphaned = true;
        break;
      }
      HullProjection pr = project_to_hull(hull_pts, v);
      worst_hull = std::max(worst_hull, pr.dist);
      worst_nbhd = std::max(worst_nbhd, set_distance(hull_base, v));
    }
    if (orphaned) {
      PropertyCheck d;
      d.name = "hull_containment";
      d.verdict = "fail";
      d.note = "non-exceptional output with empty non-exceptional input";
      node.checks.push_back(std::move(d));
    } else {
      push_check(node, "hull_containment", worst_hull, cfg_.hull_tol,
                 "non-exceptional vertices vs input convex hull");
      push_check(node, "neighborhood_containment", worst_nbhd,
                 node.k_value * node.L + cfg_.check_tol,
                 "non-exceptional vertices vs input neighborhood");
    }

    // Exceptional output is geometrically inside the output complex.
    double worst_sub = 0.0;
    for (const auto& v : node.s_tilde.vertices)
      worst_sub = std::max(worst_sub,
                           node.a_tilde.empty() ? kInf : set_distance(node.a_tilde, v));
    push_check(node, "exceptional_subset", worst_sub, cfg_.check_tol,
               "exceptional part stays inside the output");

    // Split nodes: the output measure is exactly the sum over children.
    if (node.case_name == "split") {
      double child_sum = 0.0;
      for (const auto& ch : node.children)
        if (ch.m == node.m) child_sum += ch.measure_out;
      push_check(node, "assembly_additivity", std::abs(node.measure_out - child_sum),
                 cfg_.check_tol, "output measure equals the slab sum");
    }
  }

  void push_check(SpanNode& node, const std::string& name, double lhs, double rhs,
                  const std::string& note) {
    PropertyCheck c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.note = note;
    c.verdict = lhs <= rhs ? "pass" : "fail";
    node.checks.push_back(std::move(c));
  }

  SpanConfig cfg_;
  ConstantLedger ledger_;
};

// Root entry. The slice is the full ambient slice clipped to the ball's
// bounding box; `L <= 0` requests the automatic bound 4 * H^{m-1}(A)^{1/(m-1)}
// (positive input measure required in that case).
inline SpanResult span(const SimplicialSet& a, const Ball& b, int m, double L = 0.0,
                       SpanConfig cfg = {}) {
  int n = b.n();
  require(m >= 1 && (a.empty() || a.n == n), ErrorCode::BadInput, "bad span arguments");
  require(a.empty() || a.dim() == m - 1, ErrorCode::DimensionMismatch,
          "input content must be one dimension below the target");
  for (const auto& v : a.vertices)
    require(b.contains(v, cfg.tol), ErrorCode::BadInput, "input content leaves the ball");

  SpanResult result;
  result.m = m;
  result.n = n;
  result.input_measure = a.empty() ? 0.0 : hausdorff_measure(a, m - 1, cfg.tol);

  double auto_L = m >= 2 ? 4.0 * std::pow(result.input_measure,
                                          1.0 / static_cast<double>(m - 1))
                         : 0.0;
  double use_L = L > 0 ? L : auto_L;
  require(use_L > 0, ErrorCode::BadInput,
          "content of zero measure needs an explicit length bound");
  result.L = use_L;

  SpanEngine engine(cfg);
  SpanEngine::NodeInput root;
  root.a = a.vertices.empty() ? SimplicialSet(n) : a;
  root.b = b;
  root.w = Slice::full(n).clipped_to_bbox(b);
  root.L = use_L;
  root.zeta = use_L / 4.0;
  root.m = m;
  root.k = 0;
  root.N = n;
  result.root = engine.run_node(root, "root");
  result.output_measure = result.root.measure_out;

  result.final_k = m >= 2 ? engine.ledger().final_constant(m, n) : kOneDimensionalSeed;
  PropertyCheck thm;
  thm.name = "spanning_inequality";
  thm.note = "H^m(out)^{m-1} vs final constant times H^{m-1}(in)^m";
  if (m >= 2) {
    thm.lhs = std::pow(result.output_measure, m - 1);
    thm.rhs = result.final_k * std::pow(result.input_measure, m) + cfg.check_tol;
    thm.verdict = thm.lhs <= thm.rhs ? "pass" : "fail";
  } else {
    thm.verdict = "not_applicable";  // the inequality is stated one dimension up
  }
  result.spanning_inequality = std::move(thm);
  result.convention_note =
      "one-dimensional ledger seed fixed at 1; all downstream constants depend on it";
  return result;
}

// Flattened view of failing checks with their node paths.
inline void collect_failures(const SpanNode& node,
                             std::vector<std::pair<std::string, PropertyCheck>>& out) {
  for (const auto& c : node.checks)
    if (!c.ok()) out.emplace_back(node.path, c);
  for (const auto& ch : node.children) collect_failures(ch, out);
}

}  // namespace reifenberg
