#pragma once

// Shared scalar conventions, error taxonomy, and small utilities used by
// every module. Coordinates are dense double vectors of ambient dimension n.

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace reifenberg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute comparison tolerance for geometric predicates (membership,
// incidence, degeneracy). Callers may scale it; ops take it as a parameter
// with this default.
inline constexpr double kGeomTol = 1e-9;

enum class ErrorCode {
  BadInput,          // malformed or inconsistent arguments
  DimensionMismatch, // content dimension does not match the requested one
  NotFreeDirection,  // direction index is not free in the slice
  NoLimitFound,      // diagonal extraction failed to settle below tolerance
  AveragingFailed,   // no hyperplane offset met the averaging bound
  PreconditionHit,   // a construction precondition is violated (e.g. the
                     // point-node requires empty trace content)
  NeedCurvedDisk,    // flat transverse disk does not fit inside the ball
  IntegrationBlowup, // an advected vertex left the ball
  ParseError,        // input file is malformed or violates the schema
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotFreeDirection: return "NotFreeDirection";
    case ErrorCode::NoLimitFound: return "NoLimitFound";
    case ErrorCode::AveragingFailed: return "AveragingFailed";
    case ErrorCode::PreconditionHit: return "PreconditionHit";
    case ErrorCode::NeedCurvedDisk: return "NeedCurvedDisk";
    case ErrorCode::IntegrationBlowup: return "IntegrationBlowup";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& what) { throw Error(c, what); }

inline void require(bool ok, ErrorCode c, const std::string& what) {
  if (!ok) fail(c, what);
}

inline double sqr(double x) { return x * x; }

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// ── Worker pool ─────────────────────────────────────────────────────────────
// REIFENBERG_THREADS caps the worker count (default: hardware concurrency).
// Work items are indexed and results must be written into per-index slots so
// reductions happen in a fixed order; parallelism never changes results.

inline int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("REIFENBERG_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v < static_cast<long>(hw)) return static_cast<int>(v);
    if (v >= static_cast<long>(hw)) return static_cast<int>(hw);
  }
  return static_cast<int>(hw);
}

template <class Fn>
void parallel_for(std::int64_t count, Fn&& body) {
  int workers = worker_count();
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  int spawn = static_cast<int>(std::min<std::int64_t>(workers, count));
  pool.reserve(static_cast<size_t>(spawn));
  for (int t = 1; t < spawn; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace reifenberg
