#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lazymat/ensembles.hpp>
#include <lazymat/verify.hpp>

#include <complex>
#include <stdexcept>
#include <vector>

using lazymat::CheckResult;
using lazymat::DenseOperator;
using lazymat::EnsembleKind;
using lazymat::EquivalenceOptions;
using lazymat::FaultFlags;
using lazymat::Index;
using lazymat::MatX;
using lazymat::Mutation;
using lazymat::RandomSource;
using lazymat::SignRule;
using lazymat::SuiteReport;
using lazymat::consistency_suite;
using lazymat::derive_seed;

using Cx = std::complex<double>;

TEST_CASE("mutations map onto the intended fault flags") {
  const FaultFlags none = lazymat::faults_for(Mutation::none);
  CHECK_FALSE(none.skip_reflector);
  CHECK(none.sign_rule == SignRule::stable);

  const FaultFlags skip = lazymat::faults_for(Mutation::skip_reflector);
  CHECK(skip.skip_reflector);
  CHECK(skip.sign_rule == SignRule::stable);

  const FaultFlags sign = lazymat::faults_for(Mutation::sign_convention);
  CHECK_FALSE(sign.skip_reflector);
  CHECK(sign.sign_rule == SignRule::zero_when_negative);

  const FaultFlags qr = lazymat::faults_for(Mutation::uncorrected_qr);
  CHECK_FALSE(qr.skip_reflector);
  CHECK(qr.sign_rule == SignRule::stable);

  CHECK(lazymat::oracle_sign_correction(Mutation::none));
  CHECK(lazymat::oracle_sign_correction(Mutation::skip_reflector));
  CHECK(lazymat::oracle_sign_correction(Mutation::sign_convention));
  CHECK_FALSE(lazymat::oracle_sign_correction(Mutation::uncorrected_qr));
}

TEST_CASE("suite reports summarize pass counts and name the failures") {
  SuiteReport rep;
  rep.suite = "demo";
  rep.checks.push_back({"alpha", true, ""});
  rep.checks.push_back({"beta", false, "err 1 tol 0"});
  CHECK_FALSE(rep.passed());
  CHECK(rep.summary() == "demo: 1/2 checks passed\n  FAIL beta (err 1 tol 0)");

  SuiteReport empty;
  empty.suite = "empty";
  CHECK(empty.passed());
  CHECK(empty.summary() == "empty: 0/0 checks passed");
}

TEST_CASE("a dense operator satisfies the algebraic contracts") {
  RandomSource msrc(801);
  DenseOperator<double> op(
      lazymat::sample_dense_ginibre<double>(10, 8, 1.0, msrc),
      EnsembleKind::ginibre);
  RandomSource probes(802);
  const SuiteReport rep = consistency_suite(op, probes);
  CHECK(rep.passed());
  REQUIRE(rep.checks.size() == 5);
  CHECK(rep.checks[0].name == "repeat-probe-right");
  CHECK(rep.checks[1].name == "repeat-probe-left");
  CHECK(rep.checks[2].name == "span-linearity");
  CHECK(rep.checks[3].name == "adjoint-bilinear-1");
  CHECK(rep.checks[4].name == "adjoint-bilinear-2");
}

TEST_CASE("the isometry check passes for orthogonal and fails for scaled") {
  RandomSource msrc(803);
  DenseOperator<double> q(lazymat::sample_dense_haar<double>(12, msrc),
                          EnsembleKind::haar);
  RandomSource p1(804);
  const SuiteReport ok = consistency_suite(q, p1, 1e-10, true);
  CHECK(ok.passed());
  REQUIRE(ok.checks.size() == 6);
  CHECK(ok.checks[1].name == "isometry");

  DenseOperator<double> twice(2.0 * MatX::Identity(12, 12),
                              EnsembleKind::haar);
  RandomSource p2(805);
  const SuiteReport bad = consistency_suite(twice, p2, 1e-10, true);
  CHECK_FALSE(bad.passed());
  for (const CheckResult& c : bad.checks) {
    if (c.name == "isometry") CHECK_FALSE(c.passed);
    else CHECK(c.passed);
  }
}

TEST_CASE("complex operators run through the same contracts") {
  RandomSource msrc(806);
  DenseOperator<Cx> op(lazymat::sample_dense_ginibre<Cx>(9, 7, 1.0, msrc),
                       EnsembleKind::ginibre);
  RandomSource probes(807);
  CHECK(consistency_suite(op, probes).passed());
}

TEST_CASE("the contract suite refuses an exhausted operator") {
  auto op = lazymat::make_lazy_operator(EnsembleKind::ginibre, 8, 8, 1);
  RandomSource probes(808);
  CHECK_THROWS_WITH_AS((void)consistency_suite(*op, probes),
                       "consistency_suite: needs 11 probes",
                       std::invalid_argument);
}

TEST_CASE("the lazy-operator factory builds the requested shapes") {
  CHECK(lazymat::make_lazy_operator(EnsembleKind::ginibre, 10, 8, 1)->rows() ==
        10);
  CHECK(lazymat::make_lazy_operator(EnsembleKind::ginibre, 10, 8, 1)->cols() ==
        8);
  CHECK(lazymat::make_lazy_operator(EnsembleKind::haar, 9, 9, 1)->rows() == 9);
  CHECK(lazymat::make_lazy_operator(EnsembleKind::goe, 9, 9, 1)->cols() == 9);
  auto usv = lazymat::make_lazy_operator(EnsembleKind::usv, 10, 8, 1);
  CHECK(usv->rows() == 10);
  CHECK(usv->cols() == 8);
  auto sub = lazymat::make_lazy_operator(EnsembleKind::subsampled_haar, 8, 10, 1);
  CHECK(sub->rows() == 8);
  CHECK(sub->cols() == 10);

  CHECK_THROWS_AS(
      (void)lazymat::make_lazy_operator(EnsembleKind::haar, 9, 8, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)lazymat::make_lazy_operator(EnsembleKind::goe, 9, 8, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)lazymat::make_lazy_operator(EnsembleKind::subsampled_haar, 10, 8, 1),
      std::invalid_argument);
}

TEST_CASE("all five ensembles pass their contracts on healthy code") {
  const SuiteReport rep = lazymat::all_operator_contracts(32, 24, 7);
  CHECK(rep.passed());
  CHECK(rep.checks.size() == 26);  // 5 + 6 + 5 + 5 + 5
  CHECK(rep.checks[0].name == "ginibre/repeat-probe-right");
  bool has_haar_isometry = false;
  for (const auto& c : rep.checks)
    if (c.name == "haar/isometry") has_haar_isometry = true;
  CHECK(has_haar_isometry);

  CHECK_THROWS_AS((void)lazymat::all_operator_contracts(24, 32, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)lazymat::all_operator_contracts(21, 21, 7),
                  std::invalid_argument);
}

TEST_CASE("reflector-level mutations break the contracts, oracle ones do not") {
  CHECK_FALSE(
      lazymat::all_operator_contracts(32, 24, 7, Mutation::skip_reflector)
          .passed());
  CHECK_FALSE(
      lazymat::all_operator_contracts(32, 24, 7, Mutation::sign_convention)
          .passed());
  // The QR mutation lives in the dense oracle; lazy contracts cannot see it.
  CHECK(lazymat::all_operator_contracts(32, 24, 7, Mutation::uncorrected_qr)
            .passed());
}

TEST_CASE("regression fixture: backends agree under the null") {
  EquivalenceOptions opts;
  opts.trials = 600;
  const SuiteReport rep = lazymat::ista_equivalence_suite(opts);
  CHECK(rep.suite == "ista-equivalence");
  REQUIRE(rep.checks.size() == 3);
  CHECK(rep.checks[0].name == "final-mse");
  CHECK(rep.checks[1].name == "final-coord-0");
  CHECK(rep.checks[2].name == "final-coord-32");
  CHECK(rep.passed());

  EquivalenceOptions tiny;
  tiny.trials = 1;
  CHECK_THROWS_AS((void)lazymat::ista_equivalence_suite(tiny),
                  std::invalid_argument);
}

TEST_CASE("regression fixture: a skipped reflector is detected") {
  EquivalenceOptions opts;
  opts.trials = 2000;
  opts.mutation = Mutation::skip_reflector;
  const SuiteReport rep = lazymat::ista_equivalence_suite(opts);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("orthogonal fixture: backends agree under the null") {
  EquivalenceOptions opts;
  opts.trials = 500;
  const SuiteReport rep = lazymat::haar_equivalence_suite(opts);
  CHECK(rep.suite == "haar-equivalence");
  REQUIRE(rep.checks.size() == 3);
  CHECK(rep.checks[0].name == "first-probe-entry");
  CHECK(rep.passed());
}

TEST_CASE("orthogonal fixture: oracle and reflector mutations are caught") {
  EquivalenceOptions opts;
  opts.trials = 500;
  opts.mutation = Mutation::uncorrected_qr;
  CHECK_FALSE(lazymat::haar_equivalence_suite(opts).passed());

  opts.mutation = Mutation::sign_convention;
  CHECK_FALSE(lazymat::haar_equivalence_suite(opts).passed());
}

TEST_CASE("the mismatched-ensemble control fails as designed") {
  EquivalenceOptions opts;
  opts.trials = 300;
  const SuiteReport rep = lazymat::mismatched_ensemble_control(opts);
  CHECK(rep.suite == "mismatched-ensemble-control");
  CHECK(rep.checks.size() == 4);
  CHECK_FALSE(rep.passed());
  CHECK(rep.checks[3].name == "first-probe-sqnorm");
  CHECK_FALSE(rep.checks[3].passed);
}

TEST_CASE("the retry policy reruns a failing statistical suite once") {
  std::vector<std::uint64_t> seeds_seen;
  auto always_pass = [&](std::uint64_t s) {
    seeds_seen.push_back(s);
    SuiteReport rep;
    rep.suite = "stat";
    rep.checks.push_back({"check", true, ""});
    return rep;
  };
  SuiteReport rep = lazymat::with_retry(always_pass, 42);
  CHECK(rep.passed());
  CHECK(rep.suite == "stat");
  CHECK(seeds_seen == std::vector<std::uint64_t>{42});

  seeds_seen.clear();
  auto flaky = [&](std::uint64_t s) {
    seeds_seen.push_back(s);
    SuiteReport r;
    r.suite = "stat";
    r.checks.push_back({"check", seeds_seen.size() > 1, ""});
    return r;
  };
  rep = lazymat::with_retry(flaky, 42);
  CHECK(rep.passed());
  CHECK(rep.suite == "stat (after retry)");
  CHECK(seeds_seen ==
        std::vector<std::uint64_t>{42, derive_seed(42, 0x7e7a)});

  auto always_fail = [](std::uint64_t) {
    SuiteReport r;
    r.suite = "stat";
    r.checks.push_back({"check", false, "bad"});
    return r;
  };
  rep = lazymat::with_retry(always_fail, 42);
  CHECK_FALSE(rep.passed());
  CHECK(rep.suite == "stat (after retry)");

  auto throws = [](std::uint64_t) -> SuiteReport {
    throw std::runtime_error("boom");
  };
  rep = lazymat::with_retry(throws, 42);
  CHECK_FALSE(rep.passed());
  CHECK(rep.suite == "aborted (after retry)");
  REQUIRE(rep.checks.size() == 1);
  CHECK(rep.checks[0].name == "completed-without-error");
  CHECK(rep.checks[0].detail == "boom");
}
