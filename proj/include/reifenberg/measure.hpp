#pragma once

// Normalized Hausdorff measure of simplicial content. The normalization uses
// raw half-diameters, i.e. H^d = (d-dimensional Lebesgue content) / alpha_d
// on rectifiable sets, where alpha_d is the unit d-ball volume. Consequences
// used throughout: a unit segment has H^1 = 1/2, a unit disk has H^2 = 1,
// H^0 is counting measure.

#include "reifenberg/base.hpp"
#include "reifenberg/clipping.hpp"
#include "reifenberg/simplicial.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace reifenberg {

// Volume of the unit d-ball, alpha_d = pi^{d/2} / Gamma(d/2 + 1). Closed
// forms keep the small dimensions exact (tgamma(1.5) is off by an ulp, which
// would contaminate every normalized length).
inline double unit_ball_volume(int d) {
  require(d >= 0, ErrorCode::BadInput, "unit_ball_volume needs d >= 0");
  switch (d) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    default: return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  }
}

// Euclidean d-volume of a d-simplex in R^n (Gram determinant / d!).
inline double simplex_volume(const std::vector<Vec>& pts) {
  int d = static_cast<int>(pts.size()) - 1;
  require(d >= 0, ErrorCode::BadInput, "empty simplex");
  if (d == 0) return 1.0;
  Mat edges(pts[0].size(), d);
  for (int i = 0; i < d; ++i) edges.col(i) = pts[static_cast<size_t>(i + 1)] - pts[0];
  Mat gram = edges.transpose() * edges;
  double det = gram.determinant();
  if (det <= 0) return 0.0;
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  return std::sqrt(det) / fact;
}

namespace detail {
inline constexpr double kDegenerateVolume = 1e-14;
}

// Normalized d-dimensional Hausdorff measure of the content. Queries above
// the content dimension return 0 (lower-dimensional sets are d-null); a
// nondegenerate simplex of dimension above d makes the value infinite.
// H^0 counts distinct 0-simplex vertices.
inline double hausdorff_measure(const SimplicialSet& x, int d, double tol = kGeomTol) {
  require(d >= 0, ErrorCode::BadInput, "measure needs d >= 0");
  double sum = 0.0;
  std::vector<Vec> zero_cells;
  for (size_t s = 0; s < x.simplices.size(); ++s) {
    int k = static_cast<int>(x.simplices[s].size()) - 1;
    if (k > d) {
      if (simplex_volume(x.simplex_points(static_cast<int>(s))) > detail::kDegenerateVolume)
        return kInf;
      continue;
    }
    if (k < d) continue;
    if (d == 0)
      zero_cells.push_back(x.vertices[static_cast<size_t>(x.simplices[s][0])]);
    else
      sum += simplex_volume(x.simplex_points(static_cast<int>(s)));
  }
  if (d == 0) return static_cast<double>(dedupe_points(zero_cells, tol).size());
  return sum / unit_ball_volume(d);
}

struct MeasureReport {
  double value = 0.0;
  int top_simplex_count = 0;
  int degenerate_count = 0;
  bool infinite = false;
};

// Strict reporting surface: the requested dimension must match the content
// dimension (empty content measures 0 at any d).
inline MeasureReport measure_simplicial(const SimplicialSet& x, int d) {
  require(d >= 0, ErrorCode::BadInput, "measure needs d >= 0");
  require(x.empty() || x.dim() == d, ErrorCode::DimensionMismatch,
          "content dimension does not match the requested measure dimension");
  MeasureReport rep;
  double v = hausdorff_measure(x, d);
  rep.infinite = !std::isfinite(v);
  rep.value = v;
  for (size_t s = 0; s < x.simplices.size(); ++s) {
    if (static_cast<int>(x.simplices[s].size()) - 1 != d) continue;
    rep.top_simplex_count++;
    if (d > 0 &&
        simplex_volume(x.simplex_points(static_cast<int>(s))) <= detail::kDegenerateVolume)
      rep.degenerate_count++;
  }
  return rep;
}

// ── Grid covering estimator ─────────────────────────────────────────────────
// Independent upper estimator used to cross-validate the simplicial value:
// content is covered by the axis-aligned grid of cells with side grid_r, and
// each (simplex ∩ cell) piece is accounted by its own content measure
// (chord length / alpha_1 for curve pieces, in-plane polygon area / alpha_2
// for surface pieces). Subadditivity makes the total an upper bound; it
// converges to the simplicial value as grid_r -> 0.

namespace detail {

// Visit grid-aligned boxes intersecting the convex hull of `pts`, splitting
// recursively so pruning keeps the visit near-linear in occupied cells.
template <class Fn>
void visit_cells(const std::vector<Vec>& pts, double h, Fn&& leaf) {
  int n = static_cast<int>(pts[0].size());
  std::vector<long> lo(static_cast<size_t>(n)), hi(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double a = kInf, b = -kInf;
    for (const auto& p : pts) {
      a = std::min(a, p[i]);
      b = std::max(b, p[i]);
    }
    lo[static_cast<size_t>(i)] = static_cast<long>(std::floor(a / h));
    hi[static_cast<size_t>(i)] = static_cast<long>(std::floor(b / h));
  }

  struct Range {
    std::vector<long> lo, hi;
  };
  std::vector<Range> stack{{lo, hi}};
  while (!stack.empty()) {
    Range r = std::move(stack.back());
    stack.pop_back();
    long cells = 1;
    int split_axis = -1;
    long split_len = 1;
    for (int i = 0; i < n; ++i) {
      long len = r.hi[static_cast<size_t>(i)] - r.lo[static_cast<size_t>(i)] + 1;
      cells *= len;
      if (len > split_len) {
        split_len = len;
        split_axis = i;
      }
    }
    if (cells == 1) {
      leaf(r.lo);
      continue;
    }
    // Box-vs-simplex overlap test to prune empty halves.
    auto overlaps = [&](const Range& rng) {
      // Clip hull points' bbox is already within range; use a separating-axis
      // style cheap test: project simplex onto each axis (done) and test the
      // box against the simplex via sampled clipping for d <= 2.
      // For robustness simply test with polygon/segment clipping.
      std::vector<Vec> poly = pts;
      for (int i = 0; i < n; ++i) {
        double a = static_cast<double>(rng.lo[static_cast<size_t>(i)]) * h;
        double b = static_cast<double>(rng.hi[static_cast<size_t>(i)] + 1) * h;
        if (poly.size() == 2) {
          // segment clip
          double m0 = poly[0][i], m1 = poly[1][i];
          double t0 = 0, t1 = 1;
          if (std::abs(m1 - m0) < 1e-300) {
            if (m0 < a || m0 > b) return false;
          } else {
            double ta = (a - m0) / (m1 - m0);
            double tb = (b - m0) / (m1 - m0);
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return false;
          }
        } else if (poly.size() >= 3) {
          auto lohalf = split_polygon(poly, [&](const Vec& p) { return p[i] - a; }, 0.0);
          poly = lohalf.first;
          if (poly.size() < 3) return false;
          auto hihalf = split_polygon(poly, [&](const Vec& p) { return b - p[i]; }, 0.0);
          poly = hihalf.first;
          if (poly.size() < 3) return false;
        } else {
          if (poly[0][i] < a || poly[0][i] > b) return false;
        }
      }
      return true;
    };
    Range left = r, right = r;
    // Floored midpoint: plain (lo + hi) / 2 truncates toward zero, which
    // leaves a range like [-1, 0] unsplit and loops forever.
    long ax_lo = r.lo[static_cast<size_t>(split_axis)];
    long ax_hi = r.hi[static_cast<size_t>(split_axis)];
    long mid = ax_lo + (ax_hi - ax_lo) / 2;
    left.hi[static_cast<size_t>(split_axis)] = mid;
    right.lo[static_cast<size_t>(split_axis)] = mid + 1;
    if (overlaps(left)) stack.push_back(std::move(left));
    if (overlaps(right)) stack.push_back(std::move(right));
  }
}

}  // namespace detail

inline double measure_covering(const SimplicialSet& x, int d, double grid_r) {
  require(grid_r > 0, ErrorCode::BadInput, "covering needs grid_r > 0");
  require(d >= 0 && d <= 2, ErrorCode::BadInput, "covering estimator supports d <= 2");

  if (d == 0) {
    // Occupied-cell count over 0-simplex vertices.
    std::vector<std::vector<long>> cells;
    for (size_t s = 0; s < x.simplices.size(); ++s) {
      if (x.simplices[s].size() != 1) continue;
      const Vec& v = x.vertices[static_cast<size_t>(x.simplices[s][0])];
      std::vector<long> c(static_cast<size_t>(x.n));
      for (int i = 0; i < x.n; ++i) c[static_cast<size_t>(i)] = static_cast<long>(std::floor(v[i] / grid_r));
      if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
    }
    return static_cast<double>(cells.size());
  }

  double total = 0.0;
  for (size_t s = 0; s < x.simplices.size(); ++s) {
    int k = static_cast<int>(x.simplices[s].size()) - 1;
    if (k != d) continue;
    auto pts = x.simplex_points(static_cast<int>(s));

    if (d == 1) {
      detail::visit_cells(pts, grid_r, [&](const std::vector<long>& cell) {
        double t0 = 0, t1 = 1;
        for (int i = 0; i < x.n; ++i) {
          double a = static_cast<double>(cell[static_cast<size_t>(i)]) * grid_r;
          double b = a + grid_r;
          double m0 = pts[0][i], m1 = pts[1][i];
          if (std::abs(m1 - m0) < 1e-300) {
            if (m0 < a || m0 > b) return;
          } else {
            double ta = (a - m0) / (m1 - m0);
            double tb = (b - m0) / (m1 - m0);
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return;
          }
        }
        total += (t1 - t0) * (pts[1] - pts[0]).norm() / 2.0;  // chord / alpha_1
      });
    } else {
      // In-plane frame of the triangle for exact piece areas.
      Vec e1 = pts[1] - pts[0];
      Vec e2 = pts[2] - pts[0];
      double n1 = e1.norm();
      if (n1 <= detail::kDegenerateVolume) continue;
      Vec u = e1 / n1;
      Vec w = e2 - e2.dot(u) * u;
      double n2 = w.norm();
      if (n2 <= detail::kDegenerateVolume) continue;
      Vec v = w / n2;
      detail::visit_cells(pts, grid_r, [&](const std::vector<long>& cell) {
        std::vector<Vec> poly = pts;
        for (int i = 0; i < x.n && poly.size() >= 3; ++i) {
          double a = static_cast<double>(cell[static_cast<size_t>(i)]) * grid_r;
          double b = a + grid_r;
          poly = detail::split_polygon(poly, [&](const Vec& p) { return p[i] - a; }, 0.0).first;
          if (poly.size() < 3) return;
          poly = detail::split_polygon(poly, [&](const Vec& p) { return b - p[i]; }, 0.0).first;
        }
        if (poly.size() < 3) return;
        // Shoelace in the triangle's own frame.
        double area2 = 0.0;
        std::vector<std::pair<double, double>> uv;
        uv.reserve(poly.size());
        for (const auto& p : poly)
          uv.emplace_back(u.dot(p - pts[0]), v.dot(p - pts[0]));
        for (size_t i = 0; i < uv.size(); ++i) {
          auto [ua, va] = uv[i];
          auto [ub, vb] = uv[(i + 1) % uv.size()];
          area2 += ua * vb - ub * va;
        }
        total += std::abs(area2) / 2.0 / M_PI;  // area / alpha_2
      });
    }
  }
  return total;
}

// ── Slice integral (Eilenberg-type inequality) ──────────────────────────────
// For content X of dimension m and the hyperplane {x_axis = c}, midpoint
// quadrature of the distance-level slices: the set at distance h is the union
// of the sections at c - h and c + h. Under the half-diameter normalization
// the line measure satisfies dH^1(h) = dh / 2, so
//   lhs = (1/2) * sum_j H^{m-1}(X_{h_j}) * dh  <=  H^m(X) = rhs.

struct EilenbergReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double h_max = 0.0;
  int samples = 0;
  bool tangential_content = false;
  bool ok() const { return lhs <= rhs || std::abs(lhs - rhs) <= 1e-12; }
};

inline EilenbergReport eilenberg_check(const SimplicialSet& x, int axis, double c,
                                       int n_samples = 512) {
  require(n_samples >= 1, ErrorCode::BadInput, "quadrature needs samples");
  EilenbergReport rep;
  int m = x.dim();
  require(m >= 1, ErrorCode::BadInput, "slice integral needs content dimension >= 1");
  rep.rhs = hausdorff_measure(x, m);
  rep.samples = n_samples;
  for (const auto& v : x.vertices) rep.h_max = std::max(rep.h_max, std::abs(v[axis] - c));
  if (rep.h_max <= 0 || x.empty()) return rep;

  double dh = rep.h_max / n_samples;
  double acc = 0.0;
  std::vector<double> slice_vals(static_cast<size_t>(n_samples), 0.0);
  std::vector<char> tang(static_cast<size_t>(n_samples), 0);
  parallel_for(n_samples, [&](std::int64_t j) {
    double h = (static_cast<double>(j) + 0.5) * dh;
    double val = 0.0;
    for (double side : {c - h, c + h}) {
      SimplicialSet sec = slice_restriction(x, axis, side, TangentialPolicy::BoundaryFaces);
      val += hausdorff_measure(sec, m - 1);
      for (size_t t = 0; t < sec.tags.size(); ++t)
        if (sec.has_tag(static_cast<int>(t), kTagTangential)) tang[static_cast<size_t>(j)] = 1;
    }
    slice_vals[static_cast<size_t>(j)] = val;
  });
  for (int j = 0; j < n_samples; ++j) {
    acc += slice_vals[static_cast<size_t>(j)] * dh;
    rep.tangential_content = rep.tangential_content || tang[static_cast<size_t>(j)];
  }
  rep.lhs = 0.5 * acc;
  return rep;
}

}  // namespace reifenberg
