#pragma once

// Deformation flows. A scenario pins a slice Q inside a ball, an apex p, an
// obstacle complex A, and a flat transverse disk D centered at p spanning the
// pinned directions. The field V(x) = theta(x) * Vhat(x) pushes the free-space
// component of x - p toward the disk fiber; theta is a squared-distance cutoff
// vanishing exactly on D, A, and the frozen region F (the complement of the
// open fattened-slice interior). Trajectories are straight rays by
// construction, which the integrator reports as a drift diagnostic rather
// than exploiting.

#include "reifenberg/base.hpp"
#include "reifenberg/clipping.hpp"
#include "reifenberg/coning.hpp"
#include "reifenberg/geometry.hpp"
#include "reifenberg/measure.hpp"
#include "reifenberg/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace reifenberg {

struct FlowScenario {
  Ball b;
  Slice q;          // the active slice
  Vec p;            // apex in q ∩ ball
  SimplicialSet a;  // obstacle content (the cutoff vanishes on it)
  double delta = 0.0;
  double eps = 0.0;          // fattening used by the frozen region's slice tests
  double cutoff_scale = 1.0; // distance scale of the cutoff profile
  double dt = 1e-3;
  int refine_per_edge = 4;   // interior samples added per input segment

  double disk_radius = 0.0;  // set by build_disk
  bool disk_built = false;
};

namespace detail {

// Pinned-coordinate offset of x from the slice's fixed values, as a full
// vector supported on the pinned axes.
inline Vec pinned_offset(const Slice& q, const Vec& x) {
  Vec g = Vec::Zero(q.n);
  for (int i = 0; i < q.n; ++i)
    if (!q.is_free(i)) g[i] = x[i] - q.fixed[static_cast<size_t>(i)];
  return g;
}

// Free-coordinate offset of x from p, supported on the free axes.
inline Vec free_offset(const Slice& q, const Vec& p, const Vec& x) {
  Vec e = Vec::Zero(q.n);
  for (int i = 0; i < q.n; ++i)
    if (q.is_free(i)) e[i] = x[i] - p[i];
  return e;
}

}  // namespace detail

// Exact distance to the flat disk p + (radius-r ball of the pinned subspace).
inline double disk_distance(const FlowScenario& sc, const Vec& x) {
  Vec v = x - sc.p;
  Vec g = detail::pinned_offset(sc.q, x);  // equals pinned part of v since p lies in q
  Vec e = v - g;
  double gn = g.norm();
  if (gn <= sc.disk_radius) return e.norm();
  return std::sqrt(e.squaredNorm() + sqr(gn - sc.disk_radius));
}

// Exact distance to the frozen region: the complement of
// int((delta/2-fattening of Q in the pinned directions) ∩ ball). Inside the
// open region this is the smallest of the constraint margins; outside it is 0.
inline double frozen_distance(const FlowScenario& sc, const Vec& x) {
  double m = sc.b.radius - (x - sc.b.center).norm();
  for (size_t slot = 0; slot < sc.q.free.size(); ++slot) {
    int axis = sc.q.free[slot];
    m = std::min(m, x[axis] - sc.q.lo[slot]);
    m = std::min(m, sc.q.hi[slot] - x[axis]);
  }
  if (sc.q.d() < sc.q.n)
    m = std::min(m, sc.delta / 2.0 - detail::pinned_offset(sc.q, x).norm());
  return std::max(0.0, m);
}

inline double cutoff_theta(const FlowScenario& sc, const Vec& x) {
  double d = std::min(disk_distance(sc, x), frozen_distance(sc, x));
  if (!sc.a.empty()) d = std::min(d, set_distance(sc.a, x));
  return sqr(std::min(1.0, d / sc.cutoff_scale));
}

// V(x) = theta(x) * Vhat(x); Vhat collapses the free-space offset from the
// disk fiber. Outside the disk-fiber cylinder the field is identically zero.
inline Vec vector_field(const FlowScenario& sc, const Vec& x) {
  Vec g = detail::pinned_offset(sc.q, x);
  if (g.norm() > sc.disk_radius + kGeomTol) return Vec::Zero(sc.q.n);
  Vec e = detail::free_offset(sc.q, sc.p, x);
  double th = cutoff_theta(sc, x);
  if (th == 0.0) return Vec::Zero(sc.q.n);
  return -th * e;
}

// Validate the scenario and install the flat disk of radius 7*delta/8 in the
// pinned subspace. With no pinned directions the disk degenerates to the apex
// and the embedding conditions are vacuous. Conditions checked on samples:
// the punctured disk stays in the open fattened-slice region, the projection
// to the pinned subspace through p is injective (identity for a flat disk),
// and the projected image covers the 3*delta/4 ball.
inline void build_disk(FlowScenario& sc) {
  sc.q.validate();
  require(sc.p.size() == sc.q.n && sc.b.n() == sc.q.n, ErrorCode::BadInput,
          "scenario dimensions disagree");
  require(sc.q.contains(sc.p), ErrorCode::BadInput, "apex must lie in the slice");
  require(sc.b.contains(sc.p), ErrorCode::BadInput, "apex must lie in the ball");
  require(sc.delta > 0 && sc.eps > sc.delta, ErrorCode::BadInput,
          "need 0 < delta < eps");
  require(sc.cutoff_scale > 0 && sc.dt > 0, ErrorCode::BadInput, "bad flow controls");

  int n = sc.q.n;
  std::vector<int> pinned;
  for (int i = 0; i < n; ++i)
    if (!sc.q.is_free(i)) pinned.push_back(i);

  if (pinned.empty()) {
    sc.disk_radius = 0.0;
    sc.disk_built = true;
    return;
  }

  require(sc.b.strictly_inside(sc.p), ErrorCode::NeedCurvedDisk,
          "flat transverse disk needs an interior apex");
  double r = 7.0 * sc.delta / 8.0;

  // Farthest disk point from the ball center, in closed form.
  Vec v = sc.p - sc.b.center;
  double vg2 = 0.0;
  for (int i : pinned) vg2 += sqr(v[i]);
  double reach = std::sqrt(v.squaredNorm() - vg2 + sqr(std::sqrt(vg2) + r));
  require(reach < sc.b.radius - kGeomTol, ErrorCode::NeedCurvedDisk,
          "flat transverse disk leaves the ball near this apex");

  // Translates of the slice by pinned vectors of length delta must keep
  // meeting the ball's interior.
  for (int i : pinned) {
    for (double sgn : {-1.0, 1.0}) {
      Slice shifted = sc.q;
      shifted.fixed[static_cast<size_t>(i)] += sgn * sc.delta;
      require(shifted.meets_interior(sc.b), ErrorCode::BadInput,
              "slice translate leaves the ball interior");
    }
  }

  // Sampled embedding conditions on the punctured disk.
  double worst_clearance = kInf;
  for (int i : pinned) {
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
      for (double sgn : {-1.0, 1.0}) {
        Vec x = sc.p;
        x[i] += sgn * frac * r;
        double margin = std::min(sc.b.radius - (x - sc.b.center).norm(),
                                 sc.delta - std::abs(sgn * frac * r));
        worst_clearance = std::min(worst_clearance, margin);
      }
    }
  }
  require(worst_clearance > kGeomTol, ErrorCode::NeedCurvedDisk,
          "disk samples leave the open fattened-slice region");
  require(r >= 3.0 * sc.delta / 4.0, ErrorCode::BadInput,
          "disk projection fails to cover the required pinned ball");

  sc.disk_radius = r;
  sc.disk_built = true;
}

// Polyline refinement: every segment gains `per_edge` evenly spaced interior
// samples; other simplices are copied unchanged.
inline SimplicialSet refine_segments(const SimplicialSet& z, int per_edge) {
  if (per_edge <= 0) return z;
  SimplicialSet out(z.n);
  std::vector<int> vmap(z.vertices.size(), -1);
  auto mapped = [&](int i) {
    if (vmap[static_cast<size_t>(i)] < 0)
      vmap[static_cast<size_t>(i)] = out.add_vertex(z.vertices[static_cast<size_t>(i)]);
    return vmap[static_cast<size_t>(i)];
  };
  for (size_t s = 0; s < z.simplices.size(); ++s) {
    const auto& ix = z.simplices[s];
    if (ix.size() != 2) {
      std::vector<int> copy;
      for (int i : ix) copy.push_back(mapped(i));
      out.add_simplex(copy, z.tags[s]);
      continue;
    }
    const Vec& u = z.vertices[static_cast<size_t>(ix[0])];
    const Vec& w = z.vertices[static_cast<size_t>(ix[1])];
    int prev = mapped(ix[0]);
    for (int j = 1; j <= per_edge; ++j) {
      double t = static_cast<double>(j) / static_cast<double>(per_edge + 1);
      int mid = out.add_vertex(u + t * (w - u));
      out.add_simplex({prev, mid}, z.tags[s]);
      prev = mid;
    }
    out.add_simplex({prev, mapped(ix[1])}, z.tags[s]);
  }
  return out;
}

struct FlowOutput {
  SimplicialSet set;            // evolved complex (refined connectivity)
  std::vector<Vec> start;       // refined initial positions, parallel to vertices
  std::vector<double> movement; // per-vertex total displacement
  double max_ray_drift = 0.0;   // worst off-ray deviation of any trajectory
};

// Advect the complex to time t with a classical 4th-order fixed-step
// integrator. A refinement override < 0 uses the scenario's density; vertices
// escaping the ball beyond tolerance abort the run.
inline FlowOutput flow_evolve(const SimplicialSet& z, const FlowScenario& sc, double t,
                              int refine_override = -1) {
  require(sc.disk_built, ErrorCode::BadInput, "scenario disk not built");
  require(t >= 0, ErrorCode::BadInput, "flow time must be nonnegative");
  FlowOutput out;
  out.set = refine_segments(z, refine_override < 0 ? sc.refine_per_edge : refine_override);
  out.start = out.set.vertices;
  out.movement.assign(out.set.vertices.size(), 0.0);
  if (t == 0 || out.set.vertices.empty()) return out;

  long steps = std::max(1L, std::lround(t / sc.dt));
  double h = t / static_cast<double>(steps);
  std::vector<double> drift(out.set.vertices.size(), 0.0);
  std::vector<char> blown(out.set.vertices.size(), 0);

  parallel_for(static_cast<std::int64_t>(out.set.vertices.size()), [&](std::int64_t vi) {
    Vec x = out.start[static_cast<size_t>(vi)];
    for (long s = 0; s < steps; ++s) {
      Vec k1 = vector_field(sc, x);
      if (k1.isZero(0.0) && s == 0) {
        // Zero field at the start: check the full trajectory lazily; the
        // field is autonomous, so a zero stays zero and the vertex is fixed.
        break;
      }
      Vec k2 = vector_field(sc, x + 0.5 * h * k1);
      Vec k3 = vector_field(sc, x + 0.5 * h * k2);
      Vec k4 = vector_field(sc, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (sc.b.sphere_offset(x) > 1e-6) {
        blown[static_cast<size_t>(vi)] = 1;
        return;
      }
    }
    const Vec& x0 = out.start[static_cast<size_t>(vi)];
    out.set.vertices[static_cast<size_t>(vi)] = x;
    out.movement[static_cast<size_t>(vi)] = (x - x0).norm();

    // Off-ray deviation: pinned components must not move, and the free-space
    // offset must stay parallel to its initial direction.
    Vec g0 = detail::pinned_offset(sc.q, x0);
    Vec gT = detail::pinned_offset(sc.q, x);
    double dev = (gT - g0).norm();
    Vec e0 = detail::free_offset(sc.q, sc.p, x0);
    Vec eT = detail::free_offset(sc.q, sc.p, x);
    if (e0.norm() > kGeomTol) {
      Vec unit = e0 / e0.norm();
      dev = std::max(dev, (eT - eT.dot(unit) * unit).norm());
    }
    drift[static_cast<size_t>(vi)] = dev;
  });

  for (char f : blown)
    require(!f, ErrorCode::IntegrationBlowup, "trajectory left the ball");
  for (double d : drift) out.max_ray_drift = std::max(out.max_ray_drift, d);
  return out;
}

// Finite sampling of Z ∩ ∂(W ∩ ball): segment crossings with the sphere and
// with finite slice faces, original vertices lying on the boundary, and whole
// segments contained in it.
inline SimplicialSet boundary_part(const SimplicialSet& z, const Slice& w, const Ball& b,
                                   double tol = kGeomTol) {
  SimplicialSet out(z.n);
  auto emit_point = [&](const Vec& x) {
    if (!on_slice_boundary(w, b, x, tol)) return;
    for (const auto& v : out.vertices)
      if ((v - x).norm() <= tol) return;
    out.add_simplex({out.add_vertex(x)}, {});
  };
  for (const auto& v : z.vertices) emit_point(v);
  for (size_t s = 0; s < z.simplices.size(); ++s) {
    if (z.simplices[s].size() != 2) continue;
    auto pts = z.simplex_points(static_cast<int>(s));
    const Vec& u = pts[0];
    const Vec& v = pts[1];
    Vec mid = 0.5 * (u + v);
    if (on_slice_boundary(w, b, u, tol) && on_slice_boundary(w, b, v, tol) &&
        on_slice_boundary(w, b, mid, tol)) {
      int i0 = out.add_vertex(u);
      int i1 = out.add_vertex(v);
      out.add_simplex({i0, i1}, {kTagTangential});
      continue;
    }
    // Sphere crossings.
    Vec dvec = v - u;
    double aa = dvec.squaredNorm();
    if (aa > 0) {
      Vec cu = u - b.center;
      double bb = 2.0 * cu.dot(dvec);
      double cc = cu.squaredNorm() - sqr(b.radius);
      double disc = bb * bb - 4.0 * aa * cc;
      if (disc >= 0) {
        for (double sgn : {-1.0, 1.0}) {
          double t = (-bb + sgn * std::sqrt(disc)) / (2.0 * aa);
          if (t >= -tol && t <= 1.0 + tol) emit_point(u + std::clamp(t, 0.0, 1.0) * dvec);
        }
      }
    }
    // Finite face crossings.
    for (size_t slot = 0; slot < w.free.size(); ++slot) {
      int axis = w.free[slot];
      for (double plane : {w.lo[slot], w.hi[slot]}) {
        if (!std::isfinite(plane)) continue;
        double du = u[axis] - plane, dv = v[axis] - plane;
        if ((du > tol && dv > tol) || (du < -tol && dv < -tol)) continue;
        if (std::abs(du - dv) < tol) continue;
        double t = du / (du - dv);
        if (t >= -tol && t <= 1.0 + tol) emit_point(u + std::clamp(t, 0.0, 1.0) * (v - u));
      }
    }
  }
  return out;
}

struct CollapseReport {
  std::vector<double> times;
  std::vector<double> collapse_distances;  // item (1) across times
  double collapse_final = kInf;
  bool collapse_monotone = true;
  double outside_movement = 0.0;  // item (2): must be exactly zero
  int outside_vertices = 0;
  double boundary_distance = 0.0;  // item (3)
  double max_ray_drift = 0.0;
  double hypothesis_gap = 0.0;  // distance of ∂(Z, Q) from the obstacle

  bool pass(double tol) const {
    return collapse_final <= tol && outside_movement == 0.0 && boundary_distance <= tol;
  }
};

// Verify the collapse behavior of one scenario on content Z across the given
// times (strictly increasing; the last one is the verdict time).
//   (1) evolved points inside the slice approach {p} ∪ cone(A ∩ Q, p) ∪
//       (Z ∩ ∂(Q ∩ ball));
//   (2) vertices outside the open support region never move;
//   (3) the evolved relative boundary against the eps-fattened slice stays
//       near the cone target joined with the initial relative boundary.
inline CollapseReport check_collapse(const FlowScenario& sc, const SimplicialSet& z,
                                     const std::vector<double>& times,
                                     double hypothesis_tol = 1e-6) {
  require(sc.disk_built, ErrorCode::BadInput, "scenario disk not built");
  require(!times.empty(), ErrorCode::BadInput, "need at least one time");
  CollapseReport rep;
  rep.times = times;

  // Hypothesis: the relative boundary of Z against Q lies in the obstacle.
  SimplicialSet rb0 = relative_boundary(z, sc.q, sc.b, sc.eps);
  for (const auto& v : rb0.vertices) {
    double d = sc.a.empty() ? kInf : set_distance(sc.a, v);
    rep.hypothesis_gap = std::max(rep.hypothesis_gap, d);
  }
  require(rep.hypothesis_gap <= hypothesis_tol, ErrorCode::BadInput,
          "relative boundary of the content must lie in the obstacle");

  // Collapse target.
  SimplicialSet a_q = clip_to_slice(sc.a, sc.q);
  SimplicialSet target = cone(a_q, sc.p);
  target.append(boundary_part(z, sc.q, sc.b));

  Slice fat = sc.q.d() < sc.q.n ? sc.q.fattened(sc.eps) : sc.q;
  SimplicialSet target3 = cone(a_q, sc.p);
  target3.append(relative_boundary(z, fat, sc.b, sc.eps / 2.0));

  double prev = kInf;
  for (double t : times) {
    FlowOutput ev = flow_evolve(z, sc, t);
    rep.max_ray_drift = std::max(rep.max_ray_drift, ev.max_ray_drift);
    double worst = 0.0;
    for (const auto& v : ev.set.vertices) {
      if (!sc.q.contains(v) || !sc.b.contains(v)) continue;
      worst = std::max(worst, set_distance(target, v));
    }
    rep.collapse_distances.push_back(worst);
    if (worst > prev + 1e-9) rep.collapse_monotone = false;
    prev = worst;

    if (t == times.back()) {
      rep.collapse_final = worst;

      // Item (2): the support region is {p} ∪ (Q ∩ int ball) ∪ int(Q(eps) ∩ ball).
      for (size_t vi = 0; vi < ev.start.size(); ++vi) {
        const Vec& x0 = ev.start[vi];
        bool inside = (x0 - sc.p).norm() <= kGeomTol;
        inside = inside || (sc.q.contains(x0) && sc.b.strictly_inside(x0));
        if (!inside && sc.q.d() < sc.q.n) {
          double m = sc.b.radius - (x0 - sc.b.center).norm();
          for (size_t slot = 0; slot < fat.free.size(); ++slot) {
            int axis = fat.free[slot];
            m = std::min(m, std::min(x0[axis] - fat.lo[slot], fat.hi[slot] - x0[axis]));
          }
          inside = inside || m > 0;
        }
        if (inside) continue;
        rep.outside_vertices++;
        rep.outside_movement = std::max(rep.outside_movement, ev.movement[vi]);
      }

      // Item (3).
      SimplicialSet rbT = relative_boundary(ev.set, fat, sc.b, sc.eps / 2.0);
      for (const auto& v : rbT.vertices)
        rep.boundary_distance = std::max(rep.boundary_distance, set_distance(target3, v));
    }
  }
  return rep;
}

// ── Composition across a slab decomposition ─────────────────────────────────

struct ComposeStage {
  FlowScenario scenario;
  double time = 0.0;
};

struct CompositionPlan {
  Ball b;
  Slice w;                              // parent slice
  std::vector<Slice> slabs;             // W_0 .. W_M
  std::vector<SimplicialSet> walls;     // X_0 .. X_{M+1} (ends empty)
  double eps = 0.0;
  int refine_per_edge = 16;
};

struct CompositionReport {
  SimplicialSet evolved;
  double boundary_transfer = 0.0;  // worst relative-boundary containment gap
  double trace_transfer = 0.0;     // worst slab-boundary trace containment gap
  double max_ray_drift = 0.0;

  bool pass(double tol) const {
    return boundary_transfer <= tol && trace_transfer <= tol;
  }
};

// Run the stages in order on a single refinement of Z, then verify, for each
// slab W_j, that the evolved relative boundary against W_j lies in
// (relative boundary of Z against W, restricted to W_j) ∪ X_j ∪ X_{j+1}, and
// the same for the slab-boundary trace of the evolved set.
inline CompositionReport compose_flows(const CompositionPlan& plan,
                                       const std::vector<ComposeStage>& stages,
                                       const SimplicialSet& z) {
  require(!stages.empty(), ErrorCode::BadInput, "need at least one stage");
  require(plan.walls.size() == plan.slabs.size() + 1, ErrorCode::BadInput,
          "wall list must bracket the slabs");
  for (const auto& st : stages) {
    require(st.scenario.disk_built, ErrorCode::BadInput, "stage disk not built");
    require(st.scenario.q.n == plan.w.n, ErrorCode::BadInput, "stage dimension mismatch");
    require(st.time >= 0, ErrorCode::BadInput, "stage time must be nonnegative");
  }

  CompositionReport rep;
  SimplicialSet current = refine_segments(z, plan.refine_per_edge);
  for (const auto& st : stages) {
    FlowOutput ev = flow_evolve(current, st.scenario, st.time, 0);
    rep.max_ray_drift = std::max(rep.max_ray_drift, ev.max_ray_drift);
    current = std::move(ev.set);
  }
  rep.evolved = current;

  SimplicialSet rb_parent = relative_boundary(z, plan.w, plan.b, plan.eps);
  SimplicialSet trace_parent = boundary_part(z, plan.w, plan.b);

  for (size_t j = 0; j < plan.slabs.size(); ++j) {
    const Slice& wj = plan.slabs[j];
    SimplicialSet allowed(plan.w.n);
    if (!rb_parent.empty()) allowed.append(clip_to_slice(rb_parent, wj));
    allowed.append(plan.walls[j]);
    allowed.append(plan.walls[j + 1]);

    SimplicialSet rbj = relative_boundary(current, wj, plan.b, plan.eps);
    for (const auto& v : rbj.vertices)
      rep.boundary_transfer = std::max(
          rep.boundary_transfer, allowed.empty() ? kInf : set_distance(allowed, v));

    SimplicialSet allowed_trace(plan.w.n);
    if (!trace_parent.empty()) allowed_trace.append(trace_parent);
    allowed_trace.append(plan.walls[j]);
    allowed_trace.append(plan.walls[j + 1]);
    SimplicialSet tracej = boundary_part(current, wj, plan.b);
    for (const auto& v : tracej.vertices)
      rep.trace_transfer = std::max(
          rep.trace_transfer, allowed_trace.empty() ? kInf : set_distance(allowed_trace, v));
  }
  return rep;
}

}  // namespace reifenberg
