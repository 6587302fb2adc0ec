#include "lazymat/stats.hpp"

#include <algorithm>
#include <cmath>

namespace lazymat {

double ks_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  const double a = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(a * k * k);
    sum += term;
    if (std::abs(term) <= 1e-12 * std::abs(sum)) {
      return std::clamp(2.0 * sum, 0.0, 1.0);
    }
    sign = -sign;
  }
  return 1.0;  // lambda so small the series hardly moves; no evidence
}

namespace {

double stephens_lambda(double effective_n, double d) {
  const double rn = std::sqrt(effective_n);
  return (rn + 0.12 + 0.11 / rn) * d;
}

}  // namespace

KsReport two_sample_ks(std::vector<double> a, std::vector<double> b,
                       std::string name) {
  KsReport rep;
  rep.name = std::move(name);
  rep.n1 = a.size();
  rep.n2 = b.size();
  if (a.empty() || b.empty()) return rep;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                             static_cast<double>(j) / n2));
  }
  rep.statistic = d;
  rep.p_value = ks_survival(stephens_lambda(n1 * n2 / (n1 + n2), d));
  return rep;
}

KsReport one_sample_ks(std::vector<double> x,
                       const std::function<double(double)>& cdf,
                       std::string name) {
  KsReport rep;
  rep.name = std::move(name);
  rep.n1 = x.size();
  if (x.empty()) return rep;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(static_cast<double>(i) / n - f));
  }
  rep.statistic = d;
  rep.p_value = ks_survival(stephens_lambda(n, d));
  return rep;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double mean_of(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance_of(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double stderr_of_mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return std::sqrt(variance_of(x) / static_cast<double>(x.size()));
}

}  // namespace lazymat
