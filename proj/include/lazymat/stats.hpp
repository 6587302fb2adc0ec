#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace lazymat {

/// Result of one Kolmogorov-Smirnov comparison.
struct KsReport {
  std::string name;
  std::size_t n1 = 0;
  std::size_t n2 = 0;  // 0 for one-sample tests
  double statistic = 0.0;
  double p_value = 1.0;

  bool pass(double significance) const { return p_value >= significance; }
};

/// Asymptotic Kolmogorov survival function
/// Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
/// clamped to [0, 1].
double ks_survival(double lambda);

/// Two-sample KS test with the asymptotic p-value, using the effective
/// sample size n1*n2/(n1+n2) and the Stephens small-sample adjustment.
/// Tied values are handled by advancing both empirical CDFs through the
/// tie before measuring, which keeps the statistic exact (and the
/// asymptotic p-value conservative) for atoms.
KsReport two_sample_ks(std::vector<double> a, std::vector<double> b,
                       std::string name = "");

/// One-sample KS test of a sample against a continuous CDF.
KsReport one_sample_ks(std::vector<double> x,
                       const std::function<double(double)>& cdf,
                       std::string name = "");

/// Standard normal CDF.
double normal_cdf(double x);

double mean_of(const std::vector<double>& x);
/// Unbiased sample variance; zero for fewer than two points.
double variance_of(const std::vector<double>& x);
/// Standard error of the sample mean.
double stderr_of_mean(const std::vector<double>& x);

}  // namespace lazymat
