#include "lazymat/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "lazymat/dynamics.hpp"
#include "lazymat/ensembles.hpp"
#include "lazymat/ginibre.hpp"
#include "lazymat/random.hpp"

namespace lazymat {

namespace {

void drive_probes(ProbeOperator<double>& op, Index n, Index T) {
  DynamicsSpec<double> spec;
  spec.iterations = T;
  spec.history_depth = 0;
  spec.initial = {VecX::Constant(n, 1.0 / std::sqrt(double(n)))};
  spec.side_of = [](Index t) {
    return (t % 2 == 1) ? Side::right : Side::left;
  };
  spec.update = [](Index, const VecX& y, const std::vector<VecX>&) {
    const double nrm = y.norm();
    return VecX((nrm > 0 ? 1.0 / nrm : 1.0) * y);
  };
  spec.keep_trajectory = false;
  run_dynamics(op, spec);
}

}  // namespace

double time_workload_ms(Backend backend, Index n, Index T, std::uint64_t seed,
                        Index dim_cap) {
  require(n >= 1 && T >= 1, "time_workload_ms: n and T must be positive");
  require(T <= n, "time_workload_ms: probe budget needs T <= n");
  const double sigma = 1.0 / std::sqrt(double(n));
  const Index cap = dim_cap > 0 ? dim_cap : oracle_dim_cap();

  const auto start = std::chrono::steady_clock::now();
  if (backend == Backend::hd) {
    GinibreOperator<double> op(n, n, sigma, RandomSource(seed));
    drive_probes(op, n, T);
  } else {
    RandomSource src(seed);
    DenseOperator<double> op(sample_dense_ginibre<double>(n, n, sigma, src, cap),
                             EnsembleKind::ginibre);
    drive_probes(op, n, T);
  }
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

double median_of(std::vector<double> xs) {
  require(!xs.empty(), "median_of: empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[k];
  return 0.5 * (xs[k - 1] + xs[k]);
}

namespace {

BenchPoint measure(Backend backend, Index n, Index T,
                   const BenchOptions& opts, std::uint64_t salt) {
  require(opts.reps >= 1, "bench: reps must be positive");
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(opts.reps));
  for (int r = 0; r < opts.reps; ++r) {
    const std::uint64_t seed =
        derive_seed(opts.seed, salt * 64 + static_cast<std::uint64_t>(r));
    times.push_back(time_workload_ms(backend, n, T, seed, opts.dim_cap));
  }
  return {backend, n, T, median_of(std::move(times))};
}

}  // namespace

std::vector<BenchPoint> scaling_in_n(Backend backend,
                                     const std::vector<Index>& ns, Index T,
                                     const BenchOptions& opts) {
  std::vector<BenchPoint> pts;
  pts.reserve(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    pts.push_back(measure(backend, ns[i], T, opts, i + 1));
  }
  return pts;
}

std::vector<BenchPoint> scaling_in_T(Backend backend, Index n,
                                     const std::vector<Index>& ts,
                                     const BenchOptions& opts) {
  std::vector<BenchPoint> pts;
  pts.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    pts.push_back(measure(backend, n, ts[i], opts, 1000 + i));
  }
  return pts;
}

double fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2,
          "fit_loglog: need matched samples with at least two points");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(x[i] > 0 && y[i] > 0, "fit_loglog: inputs must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  require(sxx > 0, "fit_loglog: abscissae must not be constant");
  return sxy / sxx;
}

namespace {

double slope_of(const std::vector<BenchPoint>& pts, bool in_n) {
  std::vector<double> x, y;
  x.reserve(pts.size());
  y.reserve(pts.size());
  for (const auto& p : pts) {
    x.push_back(double(in_n ? p.n : p.T));
    y.push_back(p.median_ms);
  }
  return fit_loglog(x, y);
}

}  // namespace

double slope_in_n(const std::vector<BenchPoint>& pts) {
  return slope_of(pts, true);
}

double slope_in_T(const std::vector<BenchPoint>& pts) {
  return slope_of(pts, false);
}

}  // namespace lazymat
