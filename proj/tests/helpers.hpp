#pragma once

// Shared test utilities: a splittable deterministic RNG (the standard engine
// with explicit bit-to-double conversion, so streams are reproducible across
// standard libraries) and generators for the random geometry the property
// suites use.

#include "reifenberg/io.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace rft {

using namespace reifenberg;

using Rng = std::mt19937_64;

// Uniform double in [a, b) built from the top 53 bits of the engine output;
// distribution classes are implementation-defined, this is not.
inline double uniform(Rng& g, double a, double b) {
  return a + (b - a) * std::ldexp(static_cast<double>(g() >> 11), -53);
}

inline int uniform_int(Rng& g, int lo, int hi) {  // inclusive ends
  return lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Vec random_unit(Rng& g, int n) {
  // Rejection-free via normalized Gaussian-ish sum is overkill; rejection
  // from the cube is fine and deterministic.
  for (;;) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(g, -1.0, 1.0);
    double r = v.norm();
    if (r > 1e-3 && r <= 1.0) return v / r;
  }
}

inline Vec random_in_ball(Rng& g, const Ball& b) {
  for (;;) {
    Vec v(b.n());
    for (int i = 0; i < b.n(); ++i) v[i] = uniform(g, -b.radius, b.radius);
    if (v.norm() <= b.radius) return b.center + v;
  }
}

// Closed polyline with vertices in the ball.
inline SimplicialSet random_loop(Rng& g, const Ball& b, int segments) {
  std::vector<Vec> pts;
  for (int i = 0; i < segments; ++i) pts.push_back(random_in_ball(g, b));
  return polyline_set(pts, /*closed=*/true);
}

// Open polyline with vertices in the ball.
inline SimplicialSet random_path(Rng& g, const Ball& b, int segments) {
  std::vector<Vec> pts;
  for (int i = 0; i <= segments; ++i) pts.push_back(random_in_ball(g, b));
  return polyline_set(pts, /*closed=*/false);
}

// Triangle soup in the cube [-1, 1]^3 with non-degenerate faces.
inline SimplicialSet random_surface(Rng& g, int triangles) {
  SimplicialSet x(3);
  for (int t = 0; t < triangles; ++t) {
    int base = static_cast<int>(x.vertices.size());
    for (;;) {
      std::vector<Vec> pts;
      for (int i = 0; i < 3; ++i) {
        Vec v(3);
        for (int k = 0; k < 3; ++k) v[k] = uniform(g, -1.0, 1.0);
        pts.push_back(v);
      }
      if (simplex_volume(pts) > 1e-3) {
        for (const auto& p : pts) x.add_vertex(p);
        break;
      }
    }
    x.add_simplex({base, base + 1, base + 2}, {});
  }
  return x;
}

// Regular polygon loop of the given radius in the plane spanned by the first
// two axes, at the given center, in ambient dimension n.
inline SimplicialSet regular_polygon(int sides, double radius, const Vec& center) {
  int n = static_cast<int>(center.size());
  std::vector<Vec> pts;
  for (int i = 0; i < sides; ++i) {
    double t = 2.0 * M_PI * i / sides;
    Vec v = center;
    v[0] += radius * std::cos(t);
    v[1] += radius * std::sin(t);
    pts.push_back(v);
  }
  return polyline_set(pts, /*closed=*/true);
}

// Triangle fan over the unit disk in the plane of the first two axes.
inline SimplicialSet disk_fan(int sides, int ambient = 2) {
  SimplicialSet mesh(ambient);
  Vec c = Vec::Zero(ambient);
  int center = mesh.add_vertex(c);
  std::vector<int> ring;
  for (int i = 0; i < sides; ++i) {
    double t = 2.0 * M_PI * i / sides;
    Vec v = Vec::Zero(ambient);
    v[0] = std::cos(t);
    v[1] = std::sin(t);
    ring.push_back(mesh.add_vertex(v));
  }
  for (int i = 0; i < sides; ++i)
    mesh.add_simplex({center, ring[static_cast<size_t>(i)],
                      ring[static_cast<size_t>((i + 1) % sides)]}, {});
  return mesh;
}

// Axis-aligned unit square boundary [0,1]^2 as four segments.
inline SimplicialSet unit_square_boundary() {
  std::vector<Vec> pts{make_vec({0.0, 0.0}), make_vec({1.0, 0.0}), make_vec({1.0, 1.0}),
                       make_vec({0.0, 1.0})};
  return polyline_set(pts, /*closed=*/true);
}

// Filled unit square [0,1]^2 as two triangles.
inline SimplicialSet unit_square_mesh() {
  SimplicialSet x(2);
  int a = x.add_vertex(make_vec({0.0, 0.0}));
  int b = x.add_vertex(make_vec({1.0, 0.0}));
  int c = x.add_vertex(make_vec({1.0, 1.0}));
  int d = x.add_vertex(make_vec({0.0, 1.0}));
  x.add_simplex({a, b, c}, {});
  x.add_simplex({a, c, d}, {});
  return x;
}

}  // namespace rft
