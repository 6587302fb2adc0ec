#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lazymat/operators.hpp"
#include "lazymat/random.hpp"
#include "lazymat/stats.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// Deliberate defects for the negative-control suites. `none` is the real
/// artifact; each of the others must make at least one suite fail, which
/// is how the suites themselves are tested.
enum class Mutation { none, skip_reflector, sign_convention, uncorrected_qr };

/// Fault flags the lazy operators should carry under a mutation.
FaultFlags faults_for(Mutation m);

/// Whether the dense orthogonal oracle keeps its QR phase correction
/// under a mutation.
bool oracle_sign_correction(Mutation m);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
  std::string summary() const;
};

/// Algebraic contract checks against any probe operator: repeat-probe
/// identity on both sides, linearity over the probed span, the adjoint
/// bilinear identity, and (for operators claiming it) norm preservation.
/// Consumes exactly 11 probes. Tolerances are relative to the magnitudes
/// involved; every check must hold for every seed, there is no averaging.
template <typename Scalar>
SuiteReport consistency_suite(ProbeOperator<Scalar>& op, RandomSource& src,
                              double rel_tol = 1e-10, bool isometric = false);

/// Lazy real operators over the standard ensembles, as exercised by the
/// contract suites. For usv and subsampled_haar, m and n give the ambient
/// dimensions (n <= m for subsampled); for the square kinds only n is
/// used.
std::unique_ptr<ProbeOperator<double>> make_lazy_operator(
    EnsembleKind kind, Index m, Index n, std::uint64_t seed,
    Mutation mutation = Mutation::none);

/// Runs consistency_suite over all five lazy ensembles at the given
/// dimensions for one seed.
SuiteReport all_operator_contracts(Index m, Index n, std::uint64_t seed,
                                   Mutation mutation = Mutation::none);

struct EquivalenceOptions {
  Index trials = 10000;
  double significance = 1e-3;  // Bonferroni-split across a suite's statistics
  std::uint64_t seed = 1;
  int threads = 1;
  Mutation mutation = Mutation::none;
};

/// Sparse-regression fixture (n = 64, m = 32, T = 15, reference scalar
/// parameters): lazy and materialized backends run with independent
/// randomness; the final-iterate MSE and two fixed coordinates of the
/// final iterate are compared by two-sample KS.
SuiteReport ista_equivalence_suite(const EquivalenceOptions& opts);

/// Orthogonal-ensemble fixture (n = 32, T = 6, deterministic start e_1,
/// alternating sides, smooth update): compares the first probe's leading
/// coordinate, the final iterate's leading coordinate, and the final
/// squared norm. The deterministic e_1 start makes the first statistic
/// exactly the matrix's top-left entry, whose symmetry the biased QR
/// oracle breaks.
SuiteReport haar_equivalence_suite(const EquivalenceOptions& opts);

/// Control that must fail: the orthogonal-ensemble fixture with the
/// materialized backend deliberately sampling the wrong ensemble.
SuiteReport mismatched_ensemble_control(const EquivalenceOptions& opts);

/// Statistical-suite retry policy: one automatic re-run with a fresh
/// derived seed before declaring failure. Algebraic suites never retry.
SuiteReport with_retry(const std::function<SuiteReport(std::uint64_t)>& run,
                       std::uint64_t seed);

// --- implementation of the templated suite ---

namespace detail {

inline double norm_scale(double a, double b) {
  const double s = a + b;
  return (s > 0) ? s : 1.0;
}

}  // namespace detail

template <typename Scalar>
SuiteReport consistency_suite(ProbeOperator<Scalar>& op, RandomSource& src,
                              double rel_tol, bool isometric) {
  SuiteReport rep;
  rep.suite = "consistency";
  require(op.remaining_probes() >= 11, "consistency_suite: needs 11 probes");

  const Index m = op.rows();
  const Index n = op.cols();
  auto draw = [&](Index len) { return src.template normals<Scalar>(len); };
  auto record = [&](const std::string& name, double err, double tol) {
    rep.checks.push_back({name, err <= tol,
                          "err " + std::to_string(err) + " tol " +
                              std::to_string(tol)});
  };

  {
    const Vec<Scalar> x = draw(n);
    const Vec<Scalar> y1 = op.probe(x, Side::right);
    const Vec<Scalar> y2 = op.probe(x, Side::right);
    const double scale = detail::norm_scale(y1.norm(), y2.norm());
    record("repeat-probe-right", (y1 - y2).norm() / scale, rel_tol);
    if (isometric) {
      record("isometry", std::abs(y1.norm() - x.norm()) / x.norm(), rel_tol);
    }
  }
  {
    const Vec<Scalar> z = draw(m);
    const Vec<Scalar> y1 = op.probe(z, Side::left);
    const Vec<Scalar> y2 = op.probe(z, Side::left);
    const double scale = detail::norm_scale(y1.norm(), y2.norm());
    record("repeat-probe-left", (y1 - y2).norm() / scale, rel_tol);
  }
  {
    const Vec<Scalar> x1 = draw(n);
    const Vec<Scalar> x2 = draw(n);
    const Scalar a = draw(1)(0);  // field-generic random coefficients
    const Scalar b = draw(1)(0);
    const Vec<Scalar> y1 = op.probe(x1, Side::right);
    const Vec<Scalar> y2 = op.probe(x2, Side::right);
    const Vec<Scalar> yc = op.probe((a * x1 + b * x2).eval(), Side::right);
    const Vec<Scalar> pred = a * y1 + b * y2;
    const double scale = detail::norm_scale(pred.norm(), yc.norm());
    record("span-linearity", (yc - pred).norm() / scale, rel_tol);
  }
  for (int round = 0; round < 2; ++round) {
    const Vec<Scalar> x = draw(n);
    const Vec<Scalar> z = draw(m);
    const Vec<Scalar> qx = op.probe(x, Side::right);
    const Vec<Scalar> qtz = op.probe(z, Side::left);
    const Scalar s1 = z.dot(qx);
    const Scalar s2 = qtz.dot(x);
    const double scale =
        detail::norm_scale(z.norm() * qx.norm(), qtz.norm() * x.norm());
    record("adjoint-bilinear-" + std::to_string(round + 1),
           std::abs(s1 - s2) / scale, rel_tol);
  }
  return rep;
}

}  // namespace lazymat
