#pragma once

// Exact intersection machinery for simplicial content of dimension <= 2:
// hyperplane sections, clipping to slices (box + pinned coordinates), and the
// relative boundary of content with respect to a slice inside a ball. Tags
// propagate through every cut so bookkeeping (e.g. "exceptional") survives
// the recursion.

#include "reifenberg/base.hpp"
#include "reifenberg/geometry.hpp"
#include "reifenberg/simplicial.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

namespace reifenberg {

enum class TangentialPolicy {
  KeepWhole,       // content lying inside the cutting plane stays intact
                   // (set intersection semantics)
  BoundaryFaces,   // replaced by its boundary faces and flagged "tangential"
                   // (transversal-section semantics for measure integrands)
};

namespace detail {

// Endpoint parameters return the endpoints bitwise: a + 1.0 * (b - a) can
// differ from b in the last ulp, which would break exact vertex sharing.
inline Vec lerp(const Vec& a, const Vec& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return a + t * (b - a);
}

// Convex polygon with tags, kept while a triangle is cut by several planes.
struct TaggedPoly {
  std::vector<Vec> pts;
  std::vector<std::string> tags;
};

inline void fan_triangulate_into(const TaggedPoly& poly, SimplicialSet& out) {
  if (poly.pts.size() < 3) return;
  std::vector<int> ix;
  ix.reserve(poly.pts.size());
  for (const auto& p : poly.pts) ix.push_back(out.add_vertex(p));
  for (size_t k = 1; k + 1 < ix.size(); ++k)
    out.add_simplex({ix[0], ix[k], ix[k + 1]}, poly.tags);
}

// Split a convex polygon by the zero level of an affine margin function.
// Returns the parts with margin >= 0 and <= 0 (shared edge duplicated).
template <class Margin>
inline std::pair<std::vector<Vec>, std::vector<Vec>> split_polygon(const std::vector<Vec>& poly,
                                                                   Margin&& margin, double tol) {
  std::vector<Vec> pos, neg;
  size_t m = poly.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec& a = poly[i];
    const Vec& b = poly[(i + 1) % m];
    double ma = margin(a);
    double mb = margin(b);
    bool a_pos = ma >= -tol;
    bool a_neg = ma <= tol;
    if (a_pos) pos.push_back(a);
    if (a_neg) neg.push_back(a);
    if ((ma > tol && mb < -tol) || (ma < -tol && mb > tol)) {
      double t = ma / (ma - mb);
      Vec cut = lerp(a, b, t);
      pos.push_back(cut);
      neg.push_back(cut);
    }
  }
  return {std::move(pos), std::move(neg)};
}

}  // namespace detail

// ── Hyperplane section ──────────────────────────────────────────────────────
// Intersection of content with {x_axis = value}. Dimension drops by one on
// transversal pieces; content lying inside the plane follows the policy.
// Supports content dimension <= 2.

inline SimplicialSet slice_restriction(const SimplicialSet& x, int axis, double value,
                                       TangentialPolicy policy = TangentialPolicy::BoundaryFaces,
                                       double tol = kGeomTol) {
  SimplicialSet out(x.n);
  auto classify = [&](const Vec& v) {
    double m = v[axis] - value;
    if (std::abs(m) <= tol) return 0;
    return m > 0 ? 1 : -1;
  };
  auto cut_point = [&](const Vec& a, const Vec& b) {
    double t = (value - a[axis]) / (b[axis] - a[axis]);
    Vec p = detail::lerp(a, b, t);
    p[axis] = value;  // pin exactly
    return p;
  };
  auto with_tangential = [](std::vector<std::string> tg) {
    if (std::find(tg.begin(), tg.end(), kTagTangential) == tg.end())
      tg.push_back(kTagTangential);
    return tg;
  };

  for (size_t s = 0; s < x.simplices.size(); ++s) {
    auto pts = x.simplex_points(static_cast<int>(s));
    const auto& tg = x.tags[s];
    int k = static_cast<int>(pts.size()) - 1;
    require(k <= 2, ErrorCode::BadInput, "hyperplane section supports content dimension <= 2");

    std::vector<int> side(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) side[i] = classify(pts[i]);

    if (k == 0) {
      if (side[0] == 0) {
        int v = out.add_vertex(pts[0]);
        out.add_simplex({v}, tg);
      }
      continue;
    }

    if (k == 1) {
      if (side[0] == 0 && side[1] == 0) {
        // Segment inside the plane.
        if (policy == TangentialPolicy::KeepWhole) {
          int a = out.add_vertex(pts[0]);
          int b = out.add_vertex(pts[1]);
          out.add_simplex({a, b}, tg);
        } else {
          int a = out.add_vertex(pts[0]);
          int b = out.add_vertex(pts[1]);
          auto t2 = with_tangential(tg);
          out.add_simplex({a}, t2);
          out.add_simplex({b}, t2);
        }
      } else if (side[0] == 0 || side[1] == 0) {
        int v = out.add_vertex(side[0] == 0 ? pts[0] : pts[1]);
        out.add_simplex({v}, tg);
      } else if (side[0] * side[1] < 0) {
        int v = out.add_vertex(cut_point(pts[0], pts[1]));
        out.add_simplex({v}, tg);
      }
      continue;
    }

    // Triangle.
    int zeros = 0, plus = 0, minus = 0;
    for (int v : side) (v == 0 ? zeros : (v > 0 ? plus : minus))++;
    if (zeros == 3) {
      if (policy == TangentialPolicy::KeepWhole) {
        int a = out.add_vertex(pts[0]);
        int b = out.add_vertex(pts[1]);
        int c = out.add_vertex(pts[2]);
        out.add_simplex({a, b, c}, tg);
      } else {
        auto t2 = with_tangential(tg);
        int a = out.add_vertex(pts[0]);
        int b = out.add_vertex(pts[1]);
        int c = out.add_vertex(pts[2]);
        out.add_simplex({a, b}, t2);
        out.add_simplex({b, c}, t2);
        out.add_simplex({c, a}, t2);
      }
      continue;
    }
    if (zeros == 2) {
      // One edge inside the plane: the section is that edge.
      std::vector<int> ix;
      for (size_t i = 0; i < 3; ++i)
        if (side[i] == 0) ix.push_back(out.add_vertex(pts[i]));
      out.add_simplex(ix, tg);
      continue;
    }
    if (zeros == 1) {
      int iv = 0;
      while (side[static_cast<size_t>(iv)] != 0) ++iv;
      int ia = (iv + 1) % 3, ib = (iv + 2) % 3;
      if (side[static_cast<size_t>(ia)] * side[static_cast<size_t>(ib)] < 0) {
        int v0 = out.add_vertex(pts[static_cast<size_t>(iv)]);
        int v1 = out.add_vertex(cut_point(pts[static_cast<size_t>(ia)], pts[static_cast<size_t>(ib)]));
        out.add_simplex({v0, v1}, tg);
      } else {
        int v0 = out.add_vertex(pts[static_cast<size_t>(iv)]);
        out.add_simplex({v0}, tg);
      }
      continue;
    }
    if (plus > 0 && minus > 0) {
      // Generic crossing: two edge cuts.
      std::vector<Vec> cuts;
      for (int e = 0; e < 3; ++e) {
        int a = e, b = (e + 1) % 3;
        if (side[static_cast<size_t>(a)] * side[static_cast<size_t>(b)] < 0)
          cuts.push_back(cut_point(pts[static_cast<size_t>(a)], pts[static_cast<size_t>(b)]));
      }
      if (cuts.size() == 2) {
        int v0 = out.add_vertex(cuts[0]);
        int v1 = out.add_vertex(cuts[1]);
        out.add_simplex({v0, v1}, tg);
      }
    }
  }
  return out;
}

// ── Clip to a slice ─────────────────────────────────────────────────────────
// Set intersection with a slice: pinned coordinates section the content
// (tangential pieces kept whole), then finite box faces clip it.

inline SimplicialSet clip_to_slice(const SimplicialSet& x, const Slice& w, double tol = kGeomTol) {
  require(x.n == w.n, ErrorCode::BadInput, "ambient dimensions differ");
  SimplicialSet cur = x;
  for (int axis = 0; axis < w.n; ++axis)
    if (!w.is_free(axis))
      cur = slice_restriction(cur, axis, w.fixed[static_cast<size_t>(axis)],
                              TangentialPolicy::KeepWhole, tol);

  // Clip by each finite box face. Segments use parameter intervals; triangles
  // are carried as convex polygons and re-triangulated at the end.
  SimplicialSet out(x.n);
  for (size_t s = 0; s < cur.simplices.size(); ++s) {
    auto pts = cur.simplex_points(static_cast<int>(s));
    const auto& tg = cur.tags[s];
    int k = static_cast<int>(pts.size()) - 1;
    require(k <= 2, ErrorCode::BadInput, "slice clipping supports content dimension <= 2");

    if (k == 0) {
      if (w.contains(pts[0], tol)) {
        int v = out.add_vertex(pts[0]);
        out.add_simplex({v}, tg);
      }
      continue;
    }

    if (k == 1) {
      double t0 = 0.0, t1 = 1.0;
      bool alive = true;
      for (size_t f = 0; f < w.free.size() && alive; ++f) {
        int axis = w.free[f];
        double a = pts[0][axis], b = pts[1][axis];
        for (int side = 0; side < 2 && alive; ++side) {
          double bound = side == 0 ? w.lo[f] : w.hi[f];
          if (!std::isfinite(bound)) continue;
          // margin(t) = s * ((a + t (b-a)) - bound) >= 0 required
          double sgn = side == 0 ? 1.0 : -1.0;
          double m0 = sgn * (a - bound);
          double m1 = sgn * (b - bound);
          if (m0 < -tol && m1 < -tol) {
            alive = false;
          } else if (m0 * m1 < 0 && std::abs(m1 - m0) > 0) {
            double tc = m0 / (m0 - m1);
            if (m0 < 0)
              t0 = std::max(t0, tc);
            else
              t1 = std::min(t1, tc);
          }
        }
      }
      if (alive && t1 - t0 > tol) {
        int v0 = out.add_vertex(detail::lerp(pts[0], pts[1], t0));
        int v1 = out.add_vertex(detail::lerp(pts[0], pts[1], t1));
        out.add_simplex({v0, v1}, tg);
      } else if (alive && t1 - t0 >= 0) {
        int v0 = out.add_vertex(detail::lerp(pts[0], pts[1], 0.5 * (t0 + t1)));
        out.add_simplex({v0}, tg);
      }
      continue;
    }

    detail::TaggedPoly poly{pts, tg};
    bool alive = true;
    for (size_t f = 0; f < w.free.size() && alive; ++f) {
      int axis = w.free[f];
      for (int side = 0; side < 2 && alive; ++side) {
        double bound = side == 0 ? w.lo[f] : w.hi[f];
        if (!std::isfinite(bound)) continue;
        double sgn = side == 0 ? 1.0 : -1.0;
        auto margin = [&](const Vec& p) { return sgn * (p[axis] - bound); };
        auto halves = detail::split_polygon(poly.pts, margin, tol);
        poly.pts = std::move(halves.first);
        if (poly.pts.size() < 3) alive = false;
      }
    }
    if (alive) detail::fan_triangulate_into(poly, out);
  }
  return out;
}

// ── Segment interval inside an open box/ball region ─────────────────────────

namespace detail {

// Closed parameter interval of {a + t(b-a), t in [0,1]} inside the slice box
// intersected with the ball; nullopt if empty. Strictness is handled by the
// caller via margins.
inline std::optional<std::pair<double, double>> segment_region_interval(const Vec& a, const Vec& b,
                                                                        const Slice& w,
                                                                        const Ball& ball) {
  double t0 = 0.0, t1 = 1.0;
  for (size_t f = 0; f < w.free.size(); ++f) {
    int axis = w.free[f];
    double pa = a[axis], pb = b[axis];
    for (int side = 0; side < 2; ++side) {
      double bound = side == 0 ? w.lo[f] : w.hi[f];
      if (!std::isfinite(bound)) continue;
      double sgn = side == 0 ? 1.0 : -1.0;
      double m0 = sgn * (pa - bound);
      double m1 = sgn * (pb - bound);
      if (m0 < 0 && m1 < 0) return std::nullopt;
      if ((m0 < 0) != (m1 < 0)) {
        double tc = m0 / (m0 - m1);
        if (m0 < 0)
          t0 = std::max(t0, tc);
        else
          t1 = std::min(t1, tc);
      }
    }
  }
  for (int axis = 0; axis < w.n; ++axis) {
    if (w.is_free(axis)) continue;
    double c = w.fixed[static_cast<size_t>(axis)];
    double m0 = a[axis] - c, m1 = b[axis] - c;
    // Pinned coordinate: the segment must lie inside the plane.
    if (std::abs(m0) > kGeomTol || std::abs(m1) > kGeomTol) return std::nullopt;
  }
  // Ball: quadratic in t.
  Vec u = b - a;
  Vec v0 = a - ball.center;
  double qa = u.squaredNorm();
  double qb = 2.0 * u.dot(v0);
  double qc = v0.squaredNorm() - sqr(ball.radius);
  if (qa <= 0) {
    if (qc > 0) return std::nullopt;
  } else {
    double disc = qb * qb - 4 * qa * qc;
    if (disc < 0) return std::nullopt;
    double rt = std::sqrt(disc);
    double r0 = (-qb - rt) / (2 * qa);
    double r1 = (-qb + rt) / (2 * qa);
    t0 = std::max(t0, r0);
    t1 = std::min(t1, r1);
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(t0, t1);
}

// Margin of a point inside (slice box ∩ ball): minimum of face margins and
// sphere margin; positive strictly inside. Pinned coordinates of `w` are
// treated as hard zero-margin (they make the region lower-dimensional).
inline double region_margin(const Vec& x, const Slice& w, const Ball& ball) {
  double m = ball.radius - (x - ball.center).norm();
  for (size_t f = 0; f < w.free.size(); ++f) {
    int axis = w.free[f];
    if (std::isfinite(w.lo[f])) m = std::min(m, x[axis] - w.lo[f]);
    if (std::isfinite(w.hi[f])) m = std::min(m, w.hi[f] - x[axis]);
  }
  for (int axis = 0; axis < w.n; ++axis)
    if (!w.is_free(axis)) m = std::min(m, -std::abs(x[axis] - w.fixed[static_cast<size_t>(axis)]));
  return m;
}

// Does the simplex meet the interior of (slice ∩ ball)? Exact for segments;
// triangles use a deterministic barycentric search of the concave margin.
inline bool simplex_meets_open_region(const std::vector<Vec>& pts, const Slice& w,
                                      const Ball& ball, double tol) {
  size_t k = pts.size();
  if (k == 1) return region_margin(pts[0], w, ball) > tol;
  if (k == 2) {
    auto iv = segment_region_interval(pts[0], pts[1], w, ball);
    if (!iv) return false;
    // Probe interior parameters of the clipped interval.
    double t0 = iv->first, t1 = iv->second;
    for (double s : {0.5, 0.25, 0.75, 0.1, 0.9}) {
      double t = t0 + s * (t1 - t0);
      if (region_margin(detail::lerp(pts[0], pts[1], t), w, ball) > tol) return true;
    }
    return false;
  }
  // Triangle (or higher): grid search over barycentric coordinates.
  const int grid = 24;
  double best = -kInf;
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid - i; ++j) {
      double u = static_cast<double>(i) / grid;
      double v = static_cast<double>(j) / grid;
      double wgt = 1.0 - u - v;
      Vec p = u * pts[0] + v * pts[1] + wgt * pts[2 % k];
      best = std::max(best, region_margin(p, w, ball));
      if (best > tol) return true;
    }
  return false;
}

}  // namespace detail

// ── Relative boundary ───────────────────────────────────────────────────────
// The part of Z on the topological boundary of (W ∩ B) that is approached
// from inside the fattened region W(eps) ∩ B. Computed by refining Z against
// the finite box faces of W (and the sphere, for curve content), then keeping
// the proper faces of refined pieces that (i) lie on the boundary and
// (ii) bound a piece meeting the open fattened region. For transversal
// content the result does not depend on eps.

inline SimplicialSet relative_boundary(const SimplicialSet& z, const Slice& w, const Ball& ball,
                                       double eps, double tol = kGeomTol) {
  require(eps > 0, ErrorCode::BadInput, "relative boundary needs eps > 0");
  Slice fat = w.d() < w.n ? w.fattened(eps) : w;

  // Refine: cut every simplex by each finite face plane; cut segments by the
  // sphere as well.
  SimplicialSet refined(z.n);
  for (size_t s = 0; s < z.simplices.size(); ++s) {
    auto pts = z.simplex_points(static_cast<int>(s));
    const auto& tg = z.tags[s];
    int k = static_cast<int>(pts.size()) - 1;
    require(k <= 2, ErrorCode::BadInput, "relative boundary supports content dimension <= 2");

    if (k == 0) {
      int v = refined.add_vertex(pts[0]);
      refined.add_simplex({v}, tg);
      continue;
    }

    if (k == 1) {
      std::vector<double> cuts{0.0, 1.0};
      auto add_cut = [&](double t) {
        if (t > tol && t < 1.0 - tol) cuts.push_back(t);
      };
      for (size_t f = 0; f < w.free.size(); ++f) {
        int axis = w.free[f];
        double a = pts[0][axis], b = pts[1][axis];
        if (std::abs(b - a) <= tol) continue;
        for (double bound : {w.lo[f], w.hi[f]})
          if (std::isfinite(bound)) add_cut((bound - a) / (b - a));
      }
      {
        Vec u = pts[1] - pts[0];
        Vec v0 = pts[0] - ball.center;
        double qa = u.squaredNorm();
        double qb = 2.0 * u.dot(v0);
        double qc = v0.squaredNorm() - sqr(ball.radius);
        double disc = qb * qb - 4 * qa * qc;
        if (qa > 0 && disc > 0) {
          double rt = std::sqrt(disc);
          add_cut((-qb - rt) / (2 * qa));
          add_cut((-qb + rt) / (2 * qa));
        }
      }
      std::sort(cuts.begin(), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= tol) continue;
        int v0 = refined.add_vertex(detail::lerp(pts[0], pts[1], cuts[i]));
        int v1 = refined.add_vertex(detail::lerp(pts[0], pts[1], cuts[i + 1]));
        refined.add_simplex({v0, v1}, tg);
      }
      continue;
    }

    // Triangle: cut by face planes only. Straddling the sphere is out of
    // scope for 2-cells (transversal test content avoids it).
    {
      double lo_off = kInf, hi_off = -kInf;
      for (const auto& p : pts) {
        double off = ball.sphere_offset(p);
        lo_off = std::min(lo_off, off);
        hi_off = std::max(hi_off, off);
      }
      require(!(lo_off < -tol && hi_off > tol), ErrorCode::BadInput,
              "sphere section of 2-cells is not supported; refine the input");
    }
    std::vector<detail::TaggedPoly> polys{{pts, tg}};
    for (size_t f = 0; f < w.free.size(); ++f) {
      int axis = w.free[f];
      for (double bound : {w.lo[f], w.hi[f]}) {
        if (!std::isfinite(bound)) continue;
        std::vector<detail::TaggedPoly> next;
        for (auto& poly : polys) {
          auto margin = [&](const Vec& p) { return p[axis] - bound; };
          auto halves = detail::split_polygon(poly.pts, margin, tol);
          if (halves.first.size() >= 3) next.push_back({halves.first, poly.tags});
          if (halves.second.size() >= 3) next.push_back({halves.second, poly.tags});
        }
        polys = std::move(next);
      }
    }
    for (const auto& poly : polys) detail::fan_triangulate_into(poly, refined);
  }

  // Candidate proper faces on the boundary, kept when an adjacent piece
  // reaches the open fattened region.
  auto face_on_boundary = [&](const std::vector<Vec>& fpts) {
    for (const auto& p : fpts)
      if (!on_slice_boundary(w, ball, p, tol)) return false;
    Vec centroid = Vec::Zero(z.n);
    for (const auto& p : fpts) centroid += p;
    centroid /= static_cast<double>(fpts.size());
    return on_slice_boundary(w, ball, centroid, tol);
  };

  std::vector<char> piece_open(refined.simplices.size(), 0);
  for (size_t s = 0; s < refined.simplices.size(); ++s)
    piece_open[s] = detail::simplex_meets_open_region(refined.simplex_points(static_cast<int>(s)),
                                                      fat, ball, tol)
                        ? 1
                        : 0;

  auto face_in_piece = [&](const std::vector<Vec>& fpts, size_t piece) {
    auto ppts = refined.simplex_points(static_cast<int>(piece));
    for (const auto& f : fpts) {
      bool matched = false;
      for (const auto& p : ppts)
        if ((f - p).norm() <= 10 * tol) {
          matched = true;
          break;
        }
      if (!matched) return false;
    }
    return true;
  };

  SimplicialSet out(z.n);
  std::vector<std::vector<Vec>> emitted;
  auto emit = [&](const std::vector<Vec>& fpts, const std::vector<std::string>& tg) {
    for (const auto& prev : emitted) {
      if (prev.size() != fpts.size()) continue;
      bool same = true;
      for (size_t i = 0; i < fpts.size() && same; ++i) {
        bool found = false;
        for (const auto& p : prev)
          if ((p - fpts[i]).norm() <= 10 * tol) {
            found = true;
            break;
          }
        same = found;
      }
      if (same) return;
    }
    emitted.push_back(fpts);
    std::vector<int> ix;
    ix.reserve(fpts.size());
    for (const auto& p : fpts) ix.push_back(out.add_vertex(p));
    out.add_simplex(ix, tg);
  };

  for (size_t s = 0; s < refined.simplices.size(); ++s) {
    auto pts = refined.simplex_points(static_cast<int>(s));
    int k = static_cast<int>(pts.size()) - 1;
    std::vector<std::vector<Vec>> faces;
    if (k == 1) {
      faces.push_back({pts[0]});
      faces.push_back({pts[1]});
    } else if (k == 2) {
      faces.push_back({pts[0], pts[1]});
      faces.push_back({pts[1], pts[2]});
      faces.push_back({pts[2], pts[0]});
      faces.push_back({pts[0]});
      faces.push_back({pts[1]});
      faces.push_back({pts[2]});
    } else {
      continue;  // isolated points have no proper faces
    }
    for (const auto& f : faces) {
      if (!face_on_boundary(f)) continue;
      bool witnessed = false;
      for (size_t t = 0; t < refined.simplices.size() && !witnessed; ++t)
        if (piece_open[t] && face_in_piece(f, t)) witnessed = true;
      if (witnessed) emit(f, refined.tags[s]);
    }
  }
  return out;
}

// Fold simplicial content onto the fundamental slab [gamma, gamma + L) along
// an axis: pieces are first cut at every fold plane they cross, then each
// piece is translated by its integer multiple of L. Exact for content of
// dimension <= 2.

inline SimplicialSet fold_to_slab(const SimplicialSet& x, int axis, double gamma, double length,
                                  double tol = kGeomTol) {
  require(length > 0 && std::isfinite(length), ErrorCode::BadInput, "fold needs finite L > 0");
  SimplicialSet out(x.n);

  // Rigidly translate one piece by the multiple of L determined by its
  // midpoint offset, so shared cut vertices land consistently per piece.
  auto emit_piece = [&](std::vector<Vec> pts, const std::vector<std::string>& tg) {
    double mid = 0.0;
    for (const auto& p : pts) mid += p[axis];
    mid /= static_cast<double>(pts.size());
    double shift = -length * std::floor((mid - gamma) / length);
    std::vector<int> ix;
    ix.reserve(pts.size());
    for (auto& p : pts) {
      p[axis] += shift;
      ix.push_back(out.add_vertex(p));
    }
    out.add_simplex(std::move(ix), tg);
  };

  for (size_t s = 0; s < x.simplices.size(); ++s) {
    auto pts = x.simplex_points(static_cast<int>(s));
    const auto& tg = x.tags[s];
    int k = static_cast<int>(pts.size()) - 1;
    require(k <= 2, ErrorCode::BadInput, "fold supports content dimension <= 2");

    double a = kInf, b = -kInf;
    for (const auto& p : pts) {
      a = std::min(a, p[axis]);
      b = std::max(b, p[axis]);
    }
    std::vector<double> planes;
    long k0 = static_cast<long>(std::floor((a - gamma) / length)) + 1;
    long k1 = static_cast<long>(std::ceil((b - gamma) / length)) - 1;
    for (long j = k0; j <= k1; ++j) {
      double plane = gamma + static_cast<double>(j) * length;
      if (plane > a + tol && plane < b - tol) planes.push_back(plane);
    }

    if (k == 0 || planes.empty()) {
      emit_piece(pts, tg);
      continue;
    }

    if (k == 1) {
      std::vector<double> cuts{0.0, 1.0};
      double pa = pts[0][axis], pb = pts[1][axis];
      for (double plane : planes) cuts.push_back((plane - pa) / (pb - pa));
      std::sort(cuts.begin(), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] - cuts[i] > tol)
          emit_piece({detail::lerp(pts[0], pts[1], cuts[i]), detail::lerp(pts[0], pts[1], cuts[i + 1])},
                     tg);
      continue;
    }

    std::vector<detail::TaggedPoly> polys{{pts, tg}};
    for (double plane : planes) {
      std::vector<detail::TaggedPoly> next;
      for (auto& poly : polys) {
        auto margin = [&](const Vec& p) { return p[axis] - plane; };
        auto halves = detail::split_polygon(poly.pts, margin, tol);
        if (halves.first.size() >= 3) next.push_back({halves.first, poly.tags});
        if (halves.second.size() >= 3) next.push_back({halves.second, poly.tags});
      }
      polys = std::move(next);
    }
    for (const auto& poly : polys)
      for (size_t v = 1; v + 1 < poly.pts.size(); ++v)
        emit_piece({poly.pts[0], poly.pts[v], poly.pts[v + 1]}, poly.tags);
  }
  return out;
}

}  // namespace reifenberg
