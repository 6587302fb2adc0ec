#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lazymat/bench.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using lazymat::Backend;
using lazymat::BenchOptions;
using lazymat::BenchPoint;
using lazymat::Index;
using lazymat::ResourceCapExceeded;

TEST_CASE("median of odd, even, and single samples") {
  CHECK(lazymat::median_of({3.0, 1.0, 2.0}) == 2.0);
  CHECK(lazymat::median_of({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(lazymat::median_of({7.5}) == 7.5);
  CHECK_THROWS_AS((void)lazymat::median_of({}), std::invalid_argument);
}

TEST_CASE("log-log fit recovers exact power laws") {
  const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  CHECK(std::abs(lazymat::fit_loglog(x, y) - 2.0) <= 1e-12);

  y.clear();
  for (double v : x) y.push_back(0.7 * std::sqrt(v));
  CHECK(std::abs(lazymat::fit_loglog(x, y) - 0.5) <= 1e-12);

  CHECK_THROWS_AS((void)lazymat::fit_loglog({1.0}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)lazymat::fit_loglog({1.0, 2.0}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)lazymat::fit_loglog({1.0, -2.0}, {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)lazymat::fit_loglog({2.0, 2.0}, {1.0, 3.0}),
                  std::invalid_argument);
}

TEST_CASE("slope helpers read the right axis") {
  std::vector<BenchPoint> pts;
  for (Index n : {16, 32, 64})
    pts.push_back({Backend::hd, n, 10, 0.001 * double(n) * double(n)});
  CHECK(std::abs(lazymat::slope_in_n(pts) - 2.0) <= 1e-12);

  pts.clear();
  for (Index t : {10, 20, 40})
    pts.push_back({Backend::hd, 64, t, 0.5 * double(t)});
  CHECK(std::abs(lazymat::slope_in_T(pts) - 1.0) <= 1e-12);
}

TEST_CASE("workload timings are positive and validated") {
  CHECK(lazymat::time_workload_ms(Backend::hd, 64, 8, 1) > 0.0);
  CHECK(lazymat::time_workload_ms(Backend::direct, 64, 8, 1) > 0.0);
  CHECK_THROWS_AS((void)lazymat::time_workload_ms(Backend::hd, 16, 17, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)lazymat::time_workload_ms(Backend::hd, 0, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("the dense backend respects the materialization cap") {
  // 4096 > 2048 (default cap): refused unless the caller raises the cap.
  CHECK_THROWS_AS(
      (void)lazymat::time_workload_ms(Backend::direct, 4096, 2, 1),
      ResourceCapExceeded);
  CHECK(lazymat::time_workload_ms(Backend::direct, 2049, 2, 1, 2100) > 0.0);
  // The lazy backend never materializes, so no cap applies.
  CHECK(lazymat::time_workload_ms(Backend::hd, 4096, 2, 1) > 0.0);
}

TEST_CASE("sweeps return one point per requested size") {
  BenchOptions opts;
  opts.reps = 1;
  const std::vector<Index> ns = {32, 64};
  const auto npts = lazymat::scaling_in_n(Backend::hd, ns, 4, opts);
  REQUIRE(npts.size() == 2);
  CHECK(npts[0].n == 32);
  CHECK(npts[1].n == 64);
  CHECK(npts[0].T == 4);
  CHECK(npts[0].median_ms > 0.0);

  const std::vector<Index> ts = {2, 4};
  const auto tpts = lazymat::scaling_in_T(Backend::hd, 64, ts, opts);
  REQUIRE(tpts.size() == 2);
  CHECK(tpts[0].T == 2);
  CHECK(tpts[1].T == 4);
  CHECK(tpts[1].n == 64);

  BenchOptions bad;
  bad.reps = 0;
  CHECK_THROWS_AS((void)lazymat::scaling_in_n(Backend::hd, ns, 4, bad),
                  std::invalid_argument);
}
