#pragma once

// Hyperplane-family machinery: fold a point into the fundamental slab, search
// the family offset that minimizes total wall measure (with the averaging
// bound asserted), trim to consecutive planes bracketing slice ∩ ball, and
// split the slice into width-L slabs.

#include "reifenberg/base.hpp"
#include "reifenberg/clipping.hpp"
#include "reifenberg/geometry.hpp"
#include "reifenberg/measure.hpp"
#include "reifenberg/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace reifenberg {

struct SlabDecomposition {
  int axis = 0;
  double step = 0.0;    // plane spacing L
  double offset = 0.0;  // family is { offset + alpha * step : alpha integer }
  int section_dim = 0;  // content dimension of a wall section

  // Filled by choose_hyperplane_family.
  double wall_measure = 0.0;
  double exceptional_wall_measure = 0.0;
  double averaging_bound = kInf;  // 2 * H^{m-1}(A ∩ W) / L

  // Filled by consecutive_planes / slab_decompose.
  std::vector<double> planes;  // increasing, gaps exactly `step`; ends bracket W ∩ B
  std::vector<Slice> slabs;    // planes.size() - 1 entries
};

// Measure of one wall section, plus a flag for content lying inside the wall.
// A tangential hit means the true section has content one dimension up, so
// offset selection treats it as infinitely expensive.
struct WallSection {
  double measure = 0.0;
  bool tangential = false;
};

inline WallSection wall_section_measure(const SimplicialSet& x, int axis, double position,
                                        int section_dim, double tol = kGeomTol) {
  WallSection out;
  if (x.empty()) return out;
  SimplicialSet sec = slice_restriction(x, axis, position, TangentialPolicy::BoundaryFaces, tol);
  for (size_t s = 0; s < sec.tags.size(); ++s)
    if (sec.has_tag(static_cast<int>(s), kTagTangential)) out.tangential = true;
  out.measure = sec.empty() ? 0.0 : hausdorff_measure(sec, section_dim, tol);
  return out;
}

namespace detail {

// Sum of wall-section measures over every plane of the family that can meet
// the content's coordinate extent.
inline WallSection family_measure(const SimplicialSet& x, int axis, double offset, double step,
                                  int section_dim, double tol) {
  WallSection total;
  if (x.empty()) return total;
  double xmin = kInf, xmax = -kInf;
  for (const auto& v : x.vertices) {
    xmin = std::min(xmin, v[axis]);
    xmax = std::max(xmax, v[axis]);
  }
  long a0 = static_cast<long>(std::ceil((xmin - tol - offset) / step));
  long a1 = static_cast<long>(std::floor((xmax + tol - offset) / step));
  for (long a = a0; a <= a1; ++a) {
    WallSection one = wall_section_measure(x, axis, offset + static_cast<double>(a) * step,
                                           section_dim, tol);
    total.measure += one.measure;
    total.tangential = total.tangential || one.tangential;
  }
  return total;
}

}  // namespace detail

// Offset selection. Candidates are the regular grid {0, L/n_offsets, ...}
// plus the midpoints between consecutive section-count breakpoints (simplex
// coordinate extremes folded mod L) — the latter make the search exact for
// counting-type wall measures, where the measure is piecewise constant in
// the offset. The winner minimizes (wall measure, exceptional wall measure,
// offset) lexicographically and must satisfy the averaging bound
//   wall_measure <= 2 * H^{m-1}(A ∩ W) / L,
// which the mean-value argument guarantees for some offset; a violation
// signals a resolution problem and raises AveragingFailed.
inline SlabDecomposition choose_hyperplane_family(const SimplicialSet& a_w,
                                                  const SimplicialSet& s_w, const Slice& w,
                                                  int axis, double L, int n_offsets = 1024,
                                                  double tol = kGeomTol) {
  require(L > 0, ErrorCode::BadInput, "plane spacing must be positive");
  require(n_offsets >= 1, ErrorCode::BadInput, "offset search needs candidates");
  require(w.direction_width(axis) > L,
          ErrorCode::BadInput, "slicing direction must be wider than the spacing");

  SlabDecomposition family;
  family.axis = axis;
  family.step = L;
  int m_minus_1 = a_w.empty() ? -1 : a_w.dim();
  family.section_dim = std::max(0, m_minus_1 - 1);

  if (a_w.empty()) {
    family.offset = 0.0;
    family.averaging_bound = 0.0;
    return family;
  }

  double content = hausdorff_measure(a_w, m_minus_1, tol);
  family.averaging_bound = 2.0 * content / L;

  // Candidate offsets: regular grid plus breakpoint-interval midpoints.
  std::vector<double> cands;
  cands.reserve(static_cast<size_t>(n_offsets) + 4 * a_w.simplices.size());
  for (int i = 0; i < n_offsets; ++i)
    cands.push_back(L * static_cast<double>(i) / static_cast<double>(n_offsets));
  std::vector<double> events;
  auto fold = [&](double v) {
    double r = std::fmod(v, L);
    return r < 0 ? r + L : r;
  };
  for (const auto& set : {&a_w, &s_w}) {
    for (size_t s = 0; s < set->simplices.size(); ++s)
      for (int ix : set->simplices[s]) events.push_back(fold(set->vertices[static_cast<size_t>(ix)][axis]));
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  for (size_t i = 0; i < events.size(); ++i) {
    double next = i + 1 < events.size() ? events[i + 1] : events[0] + L;
    cands.push_back(fold(0.5 * (events[i] + next)));
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  struct Scored {
    double wall = kInf;
    double exceptional = kInf;
  };
  std::vector<Scored> scored(cands.size());
  parallel_for(static_cast<std::int64_t>(cands.size()), [&](std::int64_t i) {
    double t = cands[static_cast<size_t>(i)];
    WallSection wall = detail::family_measure(a_w, axis, t, L, family.section_dim, tol);
    WallSection exc = detail::family_measure(s_w, axis, t, L, family.section_dim, tol);
    scored[static_cast<size_t>(i)].wall = wall.tangential ? kInf : wall.measure;
    scored[static_cast<size_t>(i)].exceptional = exc.tangential ? kInf : exc.measure;
  });

  size_t best = 0;
  for (size_t i = 1; i < cands.size(); ++i) {
    const Scored& a = scored[i];
    const Scored& b = scored[best];
    if (a.wall < b.wall || (a.wall == b.wall && a.exceptional < b.exceptional))
      best = i;  // equal on both measures keeps the smaller offset (scan order)
  }
  family.offset = cands[best];
  family.wall_measure = scored[best].wall;
  family.exceptional_wall_measure = scored[best].exceptional;
  require(family.wall_measure <= family.averaging_bound + 1e-9 * (1.0 + family.averaging_bound),
          ErrorCode::AveragingFailed,
          "no sampled offset satisfies the averaging bound");
  return family;
}

// Trim the family to the consecutive planes around W ∩ B: the interior planes
// are exactly those strictly separating the intersection's coordinate extent
// (a plane touching only the boundary does not disconnect and is excluded);
// one extra plane on each side brackets the region.
inline SlabDecomposition consecutive_planes(const Slice& w, const Ball& b,
                                            SlabDecomposition family, double tol = kGeomTol) {
  auto extent = w.extent_in_ball(family.axis, b);
  require(extent.has_value(), ErrorCode::BadInput, "slice does not meet the ball");
  auto [xlo, xhi] = *extent;
  double L = family.step;
  double t = family.offset;

  // Interior planes: t + alpha L in the open interval (xlo, xhi).
  long a0 = static_cast<long>(std::ceil((xlo + tol - t) / L));
  long a1 = static_cast<long>(std::floor((xhi - tol - t) / L));
  family.planes.clear();
  for (long a = a0 - 1; a <= a1 + 1; ++a)
    family.planes.push_back(t + static_cast<double>(a) * L);
  // Ends bracket the extent by construction: plane a0 - 1 lies <= xlo + tol - L + L
  // = xlo + tol... verify defensively.
  require(family.planes.front() <= xlo + tol && family.planes.back() >= xhi - tol,
          ErrorCode::BadInput, "plane family fails to bracket the slice");
  return family;
}

// Slabs between consecutive planes, intersected with W's own interval so each
// slab stays inside W. The slicing direction's width is at most the spacing.
inline SlabDecomposition slab_decompose(const Slice& w, SlabDecomposition family) {
  require(family.planes.size() >= 2, ErrorCode::BadInput, "need consecutive planes first");
  family.slabs.clear();
  int slot = w.free_slot(family.axis);
  require(slot >= 0, ErrorCode::NotFreeDirection, "slab axis is not free");
  double wlo = w.lo[static_cast<size_t>(slot)];
  double whi = w.hi[static_cast<size_t>(slot)];
  for (size_t j = 0; j + 1 < family.planes.size(); ++j) {
    double a = std::max(family.planes[j], wlo);
    double c = std::min(family.planes[j + 1], whi);
    // The bracketing construction guarantees a nonempty interval; slabs must
    // stay aligned with walls (slab j sits between planes j and j+1).
    require(a < c, ErrorCode::BadInput, "slab interval collapsed");
    family.slabs.push_back(w.with_bounds(family.axis, a, c));
  }
  return family;
}

}  // namespace reifenberg
