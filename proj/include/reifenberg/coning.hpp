#pragma once

// Inward cone over a complex, deterministic apex selection, and the measure
// bound H^m(cone) <= 2^{2m-1} * r * H^{m-1}(base) for bases inside N(p, r).

#include "reifenberg/base.hpp"
#include "reifenberg/geometry.hpp"
#include "reifenberg/measure.hpp"
#include "reifenberg/simplicial.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace reifenberg {

// C(X, p): X itself, the apex, and the join of every simplex with the apex.
// Joins whose apex lies in the base simplex's affine span are kept but tagged
// degenerate (they carry no measure). Empty X gives the apex alone.
inline SimplicialSet cone(const SimplicialSet& x, const Vec& p, double tol = kGeomTol) {
  SimplicialSet out = x.empty() ? SimplicialSet(static_cast<int>(p.size())) : x;
  int apex = out.add_vertex(p);
  out.add_simplex({apex}, {});
  size_t base_count = x.simplices.size();
  for (size_t s = 0; s < base_count; ++s) {
    std::vector<int> join = out.simplices[s];
    join.push_back(apex);
    std::vector<std::string> tags = out.tags[s];
    auto pts = out.simplex_points_of(join);
    if (simplex_volume(pts) <= tol * std::pow(std::max(1.0, diameter(pts)),
                                              static_cast<double>(join.size() - 1)) &&
        std::find(tags.begin(), tags.end(), kTagDegenerate) == tags.end())
      tags.push_back(kTagDegenerate);
    out.add_simplex(join, tags);
  }
  return out;
}

// Apex choice: lexicographically smallest vertex of the base complex lying
// (tolerantly) outside the exceptional part; if no such vertex exists, the
// lexicographically smallest simplex midpoint outside it; otherwise the
// deepest interior point of
// slice ∩ ball, found by a ternary search along the segment from the box
// midpoint to the ball center's box projection (the margin is concave there).
inline Vec pick_cone_point(const SimplicialSet& a_w, const SimplicialSet& s,
                           const Slice& w, const Ball& b, double tol = kGeomTol) {
  auto lex_less = [](const Vec& a, const Vec& c) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < c[i]) return true;
      if (a[i] > c[i]) return false;
    }
    return false;
  };
  std::optional<Vec> best;
  auto consider = [&](const Vec& v) {
    if (set_distance(s, v) <= tol) return;
    if (!best.has_value() || lex_less(v, *best)) best = v;
  };
  for (int ix : a_w.referenced_vertices()) consider(a_w.vertices[static_cast<size_t>(ix)]);
  if (best.has_value()) return *best;
  for (size_t sx = 0; sx < a_w.simplices.size(); ++sx) {
    auto pts = a_w.simplex_points(static_cast<int>(sx));
    Vec mid = Vec::Zero(a_w.n);
    for (const auto& q : pts) mid += q;
    mid /= static_cast<double>(pts.size());
    consider(mid);
  }
  if (best.has_value()) return *best;

  // Deepest point of W ∩ int(B). Work in the slice's affine subspace: pinned
  // coordinates are fixed, the margin is min(face margins, sphere margin).
  require(w.meets_interior(b, tol), ErrorCode::BadInput,
          "slice does not meet the ball interior");
  Slice box = w.clipped_to_bbox(b);
  Vec mid = Vec::Zero(w.n);
  Vec proj = Vec::Zero(w.n);
  for (int i = 0; i < w.n; ++i) {
    int slot = box.free_slot(i);
    if (slot < 0) {
      mid[i] = box.fixed[static_cast<size_t>(i)];
      proj[i] = mid[i];
    } else {
      mid[i] = 0.5 * (box.lo[static_cast<size_t>(slot)] + box.hi[static_cast<size_t>(slot)]);
      proj[i] = std::clamp(b.center[i], box.lo[static_cast<size_t>(slot)],
                           box.hi[static_cast<size_t>(slot)]);
    }
  }
  auto margin = [&](const Vec& x) {
    double m = b.radius - (x - b.center).norm();
    for (size_t slot = 0; slot < box.free.size(); ++slot) {
      int axis = box.free[slot];
      m = std::min(m, x[axis] - box.lo[slot]);
      m = std::min(m, box.hi[slot] - x[axis]);
    }
    return m;
  };
  double ta = 0.0, tb = 1.0;
  for (int it = 0; it < 200; ++it) {
    double t1 = ta + (tb - ta) / 3.0;
    double t2 = tb - (tb - ta) / 3.0;
    Vec x1 = mid + t1 * (proj - mid);
    Vec x2 = mid + t2 * (proj - mid);
    if (margin(x1) < margin(x2))
      ta = t1;
    else
      tb = t2;
  }
  Vec deep = mid + 0.5 * (ta + tb) * (proj - mid);
  require(margin(deep) > tol, ErrorCode::BadInput, "no interior point with positive margin");
  return deep;
}

struct ConeBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool skipped = false;  // base of dimension 0: bound only stated one dimension up
  bool pass() const { return skipped || lhs <= rhs + 1e-9; }
};

// H^m(C(X,p)) <= 2^{2m-1} * r * H^{m-1}(X) for X ⊂ N(p, r), m = dim X + 1.
inline ConeBoundReport cone_bound_check(const SimplicialSet& x, const Vec& p, double r,
                                        double tol = kGeomTol) {
  require(r >= 0, ErrorCode::BadInput, "radius must be nonnegative");
  for (int ix : x.referenced_vertices())
    require((x.vertices[static_cast<size_t>(ix)] - p).norm() <= r + tol, ErrorCode::BadInput,
            "base complex leaves the radius-r neighborhood of the apex");
  ConeBoundReport rep;
  int m = x.dim() + 1;
  if (m < 2) {
    rep.skipped = true;
    return rep;
  }
  rep.lhs = hausdorff_measure(cone(x, p), m);
  rep.rhs = std::pow(2.0, 2 * m - 1) * r * hausdorff_measure(x, m - 1);
  return rep;
}

}  // namespace reifenberg
