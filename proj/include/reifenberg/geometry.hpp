#pragma once

// Ambient primitives: closed balls, axis-aligned slices (partially bounded
// boxes living in an axis-parallel affine subspace), widths, convex-hull
// projection, Hausdorff distance between finite samplings, and the diagonal
// limit-point extraction used to certify convergence of doubly indexed
// families at finite precision.

#include "reifenberg/base.hpp"
#include "reifenberg/simplicial.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace reifenberg {

// ── Closed ball ─────────────────────────────────────────────────────────────

struct Ball {
  Vec center;
  double radius = 1.0;

  int n() const { return static_cast<int>(center.size()); }
  bool contains(const Vec& x, double tol = kGeomTol) const {
    return (x - center).norm() <= radius + tol;
  }
  bool strictly_inside(const Vec& x, double tol = kGeomTol) const {
    return (x - center).norm() < radius - tol;
  }
  // Signed distance to the sphere (negative inside).
  double sphere_offset(const Vec& x) const { return (x - center).norm() - radius; }
};

// ── Axis-aligned d-slice ────────────────────────────────────────────────────
// Free directions i carry an interval [lo_i, hi_i] (either end may be
// infinite); every other coordinate is pinned to a fixed value. The slice is
// the corresponding partially bounded box inside its affine subspace.

struct Slice {
  int n = 0;
  std::vector<int> free;   // sorted ascending
  std::vector<double> lo;  // parallel to `free`
  std::vector<double> hi;
  std::vector<double> fixed;  // size n; entries at free positions ignored

  int d() const { return static_cast<int>(free.size()); }

  static Slice full(int n) {
    Slice w;
    w.n = n;
    w.free.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) w.free[static_cast<size_t>(i)] = i;
    w.lo.assign(static_cast<size_t>(n), -kInf);
    w.hi.assign(static_cast<size_t>(n), kInf);
    w.fixed.assign(static_cast<size_t>(n), 0.0);
    return w;
  }

  int free_slot(int axis) const {
    auto it = std::lower_bound(free.begin(), free.end(), axis);
    if (it == free.end() || *it != axis) return -1;
    return static_cast<int>(it - free.begin());
  }

  bool is_free(int axis) const { return free_slot(axis) >= 0; }

  void validate() const {
    require(n >= 1, ErrorCode::BadInput, "slice needs ambient dimension >= 1");
    require(free.size() == lo.size() && free.size() == hi.size() &&
                fixed.size() == static_cast<size_t>(n),
            ErrorCode::BadInput, "slice arrays out of sync");
    for (size_t s = 0; s < free.size(); ++s) {
      require(free[s] >= 0 && free[s] < n, ErrorCode::BadInput, "free axis out of range");
      if (s > 0) require(free[s - 1] < free[s], ErrorCode::BadInput, "free axes must be sorted");
      require(lo[s] < hi[s], ErrorCode::BadInput, "slice interval is empty");
    }
  }

  bool contains(const Vec& x, double tol = kGeomTol) const {
    for (int i = 0; i < n; ++i) {
      int s = free_slot(i);
      if (s < 0) {
        if (std::abs(x[i] - fixed[static_cast<size_t>(i)]) > tol) return false;
      } else {
        if (x[i] < lo[static_cast<size_t>(s)] - tol || x[i] > hi[static_cast<size_t>(s)] + tol)
          return false;
      }
    }
    return true;
  }

  double direction_width(int axis) const {
    int s = free_slot(axis);
    require(s >= 0, ErrorCode::NotFreeDirection, "direction is not free in this slice");
    return hi[static_cast<size_t>(s)] - lo[static_cast<size_t>(s)];
  }

  // Smallest over k-subsets of free directions of the largest width inside
  // the subset; equivalently the k-th smallest direction width. k = 0 gives 0.
  double k_width(int k) const {
    require(k >= 0 && k <= d(), ErrorCode::BadInput, "k out of range for k_width");
    if (k == 0) return 0.0;
    std::vector<double> w;
    w.reserve(free.size());
    for (size_t s = 0; s < free.size(); ++s) w.push_back(hi[s] - lo[s]);
    std::sort(w.begin(), w.end());
    return w[static_cast<size_t>(k - 1)];
  }

  // Squared distance from a point to the slice (box + pinned coordinates).
  double sq_distance(const Vec& x) const {
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      int s = free_slot(i);
      if (s < 0) {
        s2 += sqr(x[i] - fixed[static_cast<size_t>(i)]);
      } else {
        if (x[i] < lo[static_cast<size_t>(s)]) s2 += sqr(lo[static_cast<size_t>(s)] - x[i]);
        if (x[i] > hi[static_cast<size_t>(s)]) s2 += sqr(x[i] - hi[static_cast<size_t>(s)]);
      }
    }
    return s2;
  }

  bool meets_interior(const Ball& b, double tol = kGeomTol) const {
    return std::sqrt(sq_distance(b.center)) < b.radius - tol;
  }

  // Copy with every infinite end replaced by the ball's bounding-box end.
  Slice clipped_to_bbox(const Ball& b) const {
    Slice out = *this;
    for (size_t s = 0; s < out.free.size(); ++s) {
      int axis = out.free[s];
      out.lo[s] = std::max(out.lo[s], b.center[axis] - b.radius);
      out.hi[s] = std::min(out.hi[s], b.center[axis] + b.radius);
    }
    return out;
  }

  // Wall: pin a free axis to a value.
  Slice with_fixed(int axis, double value) const {
    int s = free_slot(axis);
    require(s >= 0, ErrorCode::NotFreeDirection, "cannot pin a non-free axis");
    Slice out = *this;
    out.free.erase(out.free.begin() + s);
    out.lo.erase(out.lo.begin() + s);
    out.hi.erase(out.hi.begin() + s);
    out.fixed[static_cast<size_t>(axis)] = value;
    return out;
  }

  // Slab: shrink one free interval.
  Slice with_bounds(int axis, double new_lo, double new_hi) const {
    int s = free_slot(axis);
    require(s >= 0, ErrorCode::NotFreeDirection, "cannot bound a non-free axis");
    Slice out = *this;
    out.lo[static_cast<size_t>(s)] = std::max(out.lo[static_cast<size_t>(s)], new_lo);
    out.hi[static_cast<size_t>(s)] = std::min(out.hi[static_cast<size_t>(s)], new_hi);
    require(out.lo[static_cast<size_t>(s)] < out.hi[static_cast<size_t>(s)], ErrorCode::BadInput,
            "slab interval is empty");
    return out;
  }

  // Fattening: every pinned coordinate becomes a free interval of half-width
  // eps. The result is an n-slice containing the original in its interior
  // (relative to pinned directions).
  Slice fattened(double eps) const {
    require(eps > 0, ErrorCode::BadInput, "fattening needs eps > 0");
    Slice out;
    out.n = n;
    out.fixed.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      int s = free_slot(i);
      out.free.push_back(i);
      if (s >= 0) {
        out.lo.push_back(lo[static_cast<size_t>(s)]);
        out.hi.push_back(hi[static_cast<size_t>(s)]);
      } else {
        out.lo.push_back(fixed[static_cast<size_t>(i)] - eps);
        out.hi.push_back(fixed[static_cast<size_t>(i)] + eps);
      }
    }
    return out;
  }

  // Exact coordinate extent [a, b] of (slice ∩ ball) along a free axis.
  // Empty intersection yields no value. Uses the closed form: the squared
  // clamp distance D2 from the ball center to the box in all other
  // coordinates is independent of the queried axis, so the feasible axis
  // values satisfy (t - c)^2 <= R^2 - D2 intersected with [lo, hi].
  std::optional<std::pair<double, double>> extent_in_ball(int axis, const Ball& b) const {
    int slot = free_slot(axis);
    require(slot >= 0, ErrorCode::NotFreeDirection, "extent along a non-free axis");
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == axis) continue;
      int s = free_slot(i);
      if (s < 0) {
        d2 += sqr(b.center[i] - fixed[static_cast<size_t>(i)]);
      } else {
        if (b.center[i] < lo[static_cast<size_t>(s)]) s2_accumulate(d2, lo[static_cast<size_t>(s)] - b.center[i]);
        if (b.center[i] > hi[static_cast<size_t>(s)]) s2_accumulate(d2, b.center[i] - hi[static_cast<size_t>(s)]);
      }
    }
    double rem = sqr(b.radius) - d2;
    if (rem < 0) return std::nullopt;
    double half = std::sqrt(rem);
    double a = std::max(lo[static_cast<size_t>(slot)], b.center[axis] - half);
    double c = std::min(hi[static_cast<size_t>(slot)], b.center[axis] + half);
    if (a > c) return std::nullopt;
    return std::make_pair(a, c);
  }

 private:
  static void s2_accumulate(double& acc, double term) { acc += sqr(term); }
};

// Membership in the topological boundary of (slice ∩ ball) relative to the
// slice's affine subspace: the point lies in the closed intersection and
// either touches a finite box face or the sphere.
inline bool on_slice_boundary(const Slice& w, const Ball& b, const Vec& x, double tol = kGeomTol) {
  if (!w.contains(x, tol) || !b.contains(x, tol)) return false;
  if (std::abs(b.sphere_offset(x)) <= tol) return true;
  for (size_t s = 0; s < w.free.size(); ++s) {
    int axis = w.free[s];
    if (std::isfinite(w.lo[s]) && std::abs(x[axis] - w.lo[s]) <= tol) return true;
    if (std::isfinite(w.hi[s]) && std::abs(x[axis] - w.hi[s]) <= tol) return true;
  }
  return false;
}

// ── Convex-hull projection (min-norm point) ─────────────────────────────────
// Wolfe's algorithm on the translated generators. Returns the closest point
// of conv(pts) to q and the distance. Used for hull membership, point-simplex
// distance, and containment certificates.

struct HullProjection {
  Vec point;
  double dist = 0.0;
};

namespace detail {

// Min-norm point of the affine hull of the selected generators:
// bordered Gram system [G 1; 1^T 0] [lambda; nu] = [0; 1].
inline bool affine_min_norm(const std::vector<Vec>& z, const std::vector<int>& support,
                            Eigen::VectorXd& lambda) {
  int k = static_cast<int>(support.size());
  Mat m = Mat::Zero(k + 1, k + 1);
  for (int a = 0; a < k; ++a) {
    for (int c = a; c < k; ++c) {
      double g = z[static_cast<size_t>(support[static_cast<size_t>(a)])].dot(
          z[static_cast<size_t>(support[static_cast<size_t>(c)])]);
      m(a, c) = g;
      m(c, a) = g;
    }
    m(a, k) = 1.0;
    m(k, a) = 1.0;
  }
  Vec rhs = Vec::Zero(k + 1);
  rhs[k] = 1.0;
  Vec sol = m.fullPivLu().solve(rhs);
  if (!sol.allFinite()) return false;
  lambda = sol.head(k);
  return true;
}

}  // namespace detail

inline HullProjection project_to_hull(const std::vector<Vec>& pts, const Vec& q) {
  require(!pts.empty(), ErrorCode::BadInput, "hull projection needs generators");
  std::vector<Vec> z;
  z.reserve(pts.size());
  double scale2 = 1.0;
  for (const auto& p : pts) {
    z.push_back(p - q);
    scale2 = std::max(scale2, z.back().squaredNorm());
  }
  const double stop = 1e-18 * scale2;
  const double drop = 1e-14;

  int start = 0;
  for (size_t i = 1; i < z.size(); ++i)
    if (z[i].squaredNorm() < z[static_cast<size_t>(start)].squaredNorm())
      start = static_cast<int>(i);
  std::vector<int> support{start};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Vec x = z[static_cast<size_t>(start)];

  int guard = 16 * static_cast<int>(z.size()) + 256;
  for (int iter = 0; iter < guard; ++iter) {
    // Linear minimization over all generators.
    int jmin = 0;
    double best = z[0].dot(x);
    for (size_t i = 1; i < z.size(); ++i) {
      double v = z[i].dot(x);
      if (v < best - 0.0) {
        best = v;
        jmin = static_cast<int>(i);
      }
    }
    if (x.squaredNorm() - best <= stop) break;
    if (std::find(support.begin(), support.end(), jmin) != support.end()) break;  // stall
    support.push_back(jmin);
    Eigen::VectorXd ext(lambda.size() + 1);
    ext.head(lambda.size()) = lambda;
    ext[lambda.size()] = 0.0;
    lambda = ext;

    // Minor cycles: pull x to the affine min-norm point, pruning the support
    // whenever the segment exits the simplex.
    for (int minor = 0; minor < guard; ++minor) {
      Eigen::VectorXd y;
      if (!detail::affine_min_norm(z, support, y)) {
        support.pop_back();
        lambda.conservativeResize(lambda.size() - 1);
        break;
      }
      if (y.minCoeff() >= -drop) {
        lambda = y.cwiseMax(0.0);
        double total = lambda.sum();
        if (total > 0) lambda /= total;
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < y.size(); ++i)
        if (y[i] < drop && lambda[i] > y[i]) theta = std::min(theta, lambda[i] / (lambda[i] - y[i]));
      lambda = lambda + theta * (y - lambda);
      for (int i = static_cast<int>(lambda.size()) - 1; i >= 0; --i)
        if (lambda[i] <= drop) {
          support.erase(support.begin() + i);
          Eigen::VectorXd nl(lambda.size() - 1);
          nl.head(i) = lambda.head(i);
          nl.tail(lambda.size() - 1 - i) = lambda.tail(lambda.size() - 1 - i);
          lambda = nl;
        }
      if (lambda.size() > 0) lambda /= lambda.sum();
    }
    x = Vec::Zero(q.size());
    for (int i = 0; i < lambda.size(); ++i)
      x += lambda[i] * z[static_cast<size_t>(support[static_cast<size_t>(i)])];
  }

  HullProjection out;
  out.point = x + q;
  out.dist = x.norm();
  return out;
}

inline bool convex_hull_contains(const std::vector<Vec>& pts, const Vec& q, double tol = kGeomTol) {
  if (pts.empty()) return false;
  return project_to_hull(pts, q).dist <= tol;
}

// Distance from a point to one simplex (hull of its vertex tuple).
inline double simplex_distance(const std::vector<Vec>& simplex_pts, const Vec& q) {
  return project_to_hull(simplex_pts, q).dist;
}

// Distance from a point to simplicial content (infinity for empty content).
inline double set_distance(const SimplicialSet& x, const Vec& q) {
  double best = kInf;
  for (size_t s = 0; s < x.simplices.size(); ++s)
    best = std::min(best, simplex_distance(x.simplex_points(static_cast<int>(s)), q));
  return best;
}

inline bool neighborhood_contains(const SimplicialSet& x, const Vec& q, double r,
                                  double tol = kGeomTol) {
  return set_distance(x, q) <= r + tol;
}

// ── Hausdorff distance between finite point samplings ───────────────────────

inline double hausdorff_distance(const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
  if (xs.empty() && ys.empty()) return 0.0;
  if (xs.empty() || ys.empty()) return kInf;
  auto directed = [](const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double worst = 0.0;
    for (const auto& p : a) {
      double best = kInf;
      for (const auto& q : b) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(xs, ys), directed(ys, xs));
}

// ── Diagonal limit extraction ───────────────────────────────────────────────
// For a doubly indexed family of finite point sets that converges along rows
// and then along columns, the diagonal settles on the joint limit. At finite
// precision: take the last diagonal entry as the candidate and demand that
// the trailing diagonal entries already sit within `tol` of it.

struct DiagonalLimit {
  std::vector<Vec> points;                 // candidate limit set
  std::vector<std::pair<int, int>> path;   // diagonal indices, 0-based
  std::vector<double> tail_distances;      // distances of path entries to the candidate
};

inline DiagonalLimit diagonal_limit_point(const std::vector<std::vector<std::vector<Vec>>>& grid,
                                          double tol) {
  require(!grid.empty() && !grid[0].empty(), ErrorCode::BadInput, "empty grid");
  size_t rows = grid.size();
  size_t cols = grid[0].size();
  for (const auto& row : grid)
    require(row.size() == cols, ErrorCode::BadInput, "ragged grid");
  size_t steps = std::min(rows, cols);

  DiagonalLimit out;
  out.points = grid[rows - 1][cols - 1];
  for (size_t s = 0; s < steps; ++s) {
    size_t i = rows - steps + s;
    size_t j = cols - steps + s;
    out.path.emplace_back(static_cast<int>(i), static_cast<int>(j));
    out.tail_distances.push_back(hausdorff_distance(grid[i][j], out.points));
  }
  size_t window = std::min<size_t>(3, out.tail_distances.size());
  for (size_t s = out.tail_distances.size() - window; s < out.tail_distances.size(); ++s)
    require(out.tail_distances[s] <= tol, ErrorCode::NoLimitFound,
            "diagonal entries do not settle below tolerance");
  return out;
}

// ── Fold onto a fundamental slab ────────────────────────────────────────────
// Points are translated by an integer multiple of L along the chosen axis so
// the signed offset from gamma lands in [0, L). Folding is idempotent.

inline Vec fold_to_slab(const Vec& y, int axis, double gamma, double length) {
  require(length > 0 && std::isfinite(length), ErrorCode::BadInput, "fold needs finite L > 0");
  Vec out = y;
  double s = y[axis] - gamma;
  out[axis] = y[axis] - length * std::floor(s / length);
  return out;
}

}  // namespace reifenberg
