#pragma once

#include <cstdint>
#include <vector>

#include "lazymat/experiments.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

struct BenchPoint {
  Backend backend = Backend::hd;
  Index n = 0;
  Index T = 0;
  double median_ms = 0.0;
};

struct BenchOptions {
  int reps = 3;
  std::uint64_t seed = 1;
  Index dim_cap = 0;  // 0 keeps the dense oracle's default cap
};

/// Wall time of one workload run on a square n x n normal design with
/// entrywise standard deviation 1/sqrt(n): construct the operator, then
/// drive T probes alternating sides with the normalized probe result as
/// the next iterate. Construction is inside the clock on purpose; paying
/// it up front is the point of the materialized backend.
double time_workload_ms(Backend backend, Index n, Index T, std::uint64_t seed,
                        Index dim_cap = 0);

/// Median; averages the two middle values for even counts.
double median_of(std::vector<double> xs);

/// Median-of-reps timings across problem sizes at fixed T.
std::vector<BenchPoint> scaling_in_n(Backend backend,
                                     const std::vector<Index>& ns, Index T,
                                     const BenchOptions& opts = {});

/// Median-of-reps timings across probe counts at fixed n.
std::vector<BenchPoint> scaling_in_T(Backend backend, Index n,
                                     const std::vector<Index>& ts,
                                     const BenchOptions& opts = {});

/// Least-squares slope of log y against log x. All inputs must be
/// positive; sizes must match and hold at least two points.
double fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

double slope_in_n(const std::vector<BenchPoint>& pts);
double slope_in_T(const std::vector<BenchPoint>& pts);

}  // namespace lazymat
