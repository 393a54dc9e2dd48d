#pragma once

// Finite simplicial content in R^n: a vertex pool plus index tuples. Tuples
// of size k+1 are k-simplices; mixed dimensions are allowed in one set (a
// spanning film typically carries 2-cells, seam 1-cells, and pivot 0-cells).
// Per-simplex string tags carry bookkeeping such as "exceptional" (content
// whose containment guarantees are waived), "degenerate", or "tangential".

#include "reifenberg/base.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace reifenberg {

inline const std::string kTagExceptional = "exceptional";
inline const std::string kTagDegenerate = "degenerate";
inline const std::string kTagTangential = "tangential";

struct SimplicialSet {
  int n = 0;  // ambient dimension
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> simplices;
  std::vector<std::vector<std::string>> tags;  // parallel to `simplices`

  SimplicialSet() = default;
  explicit SimplicialSet(int ambient) : n(ambient) {}

  bool empty() const { return simplices.empty(); }

  // Largest simplex dimension present; -1 for empty content.
  int dim() const {
    int d = -1;
    for (const auto& s : simplices) d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
  }

  int add_vertex(const Vec& v) {
    require(v.size() == n, ErrorCode::BadInput, "vertex has wrong ambient dimension");
    vertices.push_back(v);
    return static_cast<int>(vertices.size()) - 1;
  }

  int add_simplex(std::vector<int> ix, std::vector<std::string> tg = {}) {
    for (int i : ix)
      require(i >= 0 && i < static_cast<int>(vertices.size()), ErrorCode::BadInput,
              "simplex references a missing vertex");
    simplices.push_back(std::move(ix));
    tags.push_back(std::move(tg));
    return static_cast<int>(simplices.size()) - 1;
  }

  bool has_tag(int s, const std::string& t) const {
    const auto& tg = tags[static_cast<size_t>(s)];
    return std::find(tg.begin(), tg.end(), t) != tg.end();
  }

  void add_tag(int s, const std::string& t) {
    if (!has_tag(s, t)) tags[static_cast<size_t>(s)].push_back(t);
  }

  std::vector<Vec> simplex_points(int s) const {
    return simplex_points_of(simplices[static_cast<size_t>(s)]);
  }

  std::vector<Vec> simplex_points_of(const std::vector<int>& ix) const {
    std::vector<Vec> pts;
    pts.reserve(ix.size());
    for (int i : ix) pts.push_back(vertices[static_cast<size_t>(i)]);
    return pts;
  }

  // Indices of vertices referenced by at least one simplex.
  std::vector<int> referenced_vertices() const {
    std::vector<char> seen(vertices.size(), 0);
    for (const auto& s : simplices)
      for (int i : s) seen[static_cast<size_t>(i)] = 1;
    std::vector<int> out;
    for (size_t i = 0; i < seen.size(); ++i)
      if (seen[i]) out.push_back(static_cast<int>(i));
    return out;
  }

  // Concatenate `other` into this set (disjoint union of content).
  void append(const SimplicialSet& other) {
    if (other.simplices.empty() && other.vertices.empty()) return;
    require(n == other.n, ErrorCode::BadInput, "ambient dimensions differ");
    int off = static_cast<int>(vertices.size());
    vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
    for (size_t s = 0; s < other.simplices.size(); ++s) {
      std::vector<int> ix = other.simplices[s];
      for (int& i : ix) i += off;
      simplices.push_back(std::move(ix));
      tags.push_back(other.tags[s]);
    }
  }

  // Sub-complex of simplices accepted by `keep(simplex index)`.
  template <class Pred>
  SimplicialSet filter(Pred&& keep) const {
    SimplicialSet out(n);
    out.vertices = vertices;
    for (size_t s = 0; s < simplices.size(); ++s)
      if (keep(static_cast<int>(s))) {
        out.simplices.push_back(simplices[s]);
        out.tags.push_back(tags[s]);
      }
    return out.compacted();
  }

  // Copy with unreferenced vertices dropped and indices remapped.
  SimplicialSet compacted() const {
    SimplicialSet out(n);
    std::vector<int> remap(vertices.size(), -1);
    for (const auto& s : simplices)
      for (int i : s)
        if (remap[static_cast<size_t>(i)] < 0) {
          remap[static_cast<size_t>(i)] = static_cast<int>(out.vertices.size());
          out.vertices.push_back(vertices[static_cast<size_t>(i)]);
        }
    for (size_t s = 0; s < simplices.size(); ++s) {
      std::vector<int> ix = simplices[s];
      for (int& i : ix) i = remap[static_cast<size_t>(i)];
      out.simplices.push_back(std::move(ix));
      out.tags.push_back(tags[s]);
    }
    return out;
  }

  // Copy with bitwise-identical vertices merged (first occurrence wins) and
  // unreferenced copies dropped. Clipping emits per-simplex vertex copies;
  // merging restores sharing without moving any point. A simplex whose
  // corners would collapse onto one merged vertex keeps its own copies, so
  // tuples stay pairwise distinct.
  SimplicialSet deduped() const {
    std::map<std::vector<double>, int> first;
    std::vector<int> target(vertices.size());
    for (size_t i = 0; i < vertices.size(); ++i) {
      std::vector<double> key(vertices[i].data(), vertices[i].data() + vertices[i].size());
      auto [it, fresh] = first.emplace(std::move(key), static_cast<int>(i));
      (void)fresh;
      target[i] = it->second;
    }
    SimplicialSet out(n);
    out.vertices = vertices;
    for (size_t s = 0; s < simplices.size(); ++s) {
      std::vector<int> ix = simplices[s];
      std::vector<int> mapped = ix;
      for (int& i : mapped) i = target[static_cast<size_t>(i)];
      bool distinct = true;
      for (size_t a = 0; a < mapped.size() && distinct; ++a)
        for (size_t b = a + 1; b < mapped.size(); ++b)
          if (mapped[a] == mapped[b]) {
            distinct = false;
            break;
          }
      out.simplices.push_back(distinct ? std::move(mapped) : std::move(ix));
      out.tags.push_back(tags[s]);
    }
    return out.compacted();
  }

  // Simplices must reference existing, pairwise-distinct vertices.
  void validate() const {
    for (size_t s = 0; s < simplices.size(); ++s) {
      const auto& ix = simplices[s];
      require(!ix.empty(), ErrorCode::BadInput, "empty simplex tuple");
      for (size_t a = 0; a < ix.size(); ++a) {
        require(ix[a] >= 0 && ix[a] < static_cast<int>(vertices.size()), ErrorCode::BadInput,
                "simplex references a missing vertex");
        for (size_t b = a + 1; b < ix.size(); ++b)
          require(ix[a] != ix[b], ErrorCode::BadInput, "repeated vertex in a simplex");
      }
    }
    require(tags.size() == simplices.size(), ErrorCode::BadInput, "tag table out of sync");
  }
};

// Single point as 0-dimensional content.
inline double diameter(const std::vector<Vec>& pts) {
  double d = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

inline SimplicialSet point_set(const Vec& p, std::vector<std::string> tg = {}) {
  SimplicialSet s(static_cast<int>(p.size()));
  s.add_vertex(p);
  s.add_simplex({0}, std::move(tg));
  return s;
}

// Polyline through `pts` (closed if `closed`), as 1-simplices.
inline SimplicialSet polyline_set(const std::vector<Vec>& pts, bool closed) {
  require(!pts.empty(), ErrorCode::BadInput, "polyline needs vertices");
  SimplicialSet s(static_cast<int>(pts[0].size()));
  for (const auto& p : pts) s.add_vertex(p);
  int m = static_cast<int>(pts.size());
  for (int i = 0; i + 1 < m; ++i) s.add_simplex({i, i + 1});
  if (closed && m > 2) s.add_simplex({m - 1, 0});
  return s;
}

// Distinct points among the given ones, under an absolute tolerance. Keeps
// first occurrences, in input order (deterministic).
inline std::vector<Vec> dedupe_points(const std::vector<Vec>& pts, double tol = kGeomTol) {
  std::vector<Vec> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out)
      if ((p - q).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

}  // namespace reifenberg
