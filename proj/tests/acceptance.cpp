// Acceptance gates. Each criterion prints exactly one line:
//   criterion N: PASS (<detail>; <elapsed> s, limit <limit> s)
// and the process exits 0 only if the requested criteria all pass. The
// wall-clock limit is part of the gate, not just the ctest timeout.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <lazymat/bench.hpp>
#include <lazymat/ensembles.hpp>
#include <lazymat/experiments.hpp>
#include <lazymat/haar.hpp>
#include <lazymat/random.hpp>
#include <lazymat/reflect.hpp>
#include <lazymat/stats.hpp>
#include <lazymat/verify.hpp>

using namespace lazymat;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

// --- criterion 1: reflector algebra on random cases ---

template <typename Scalar>
int reflector_cases(std::uint64_t seed, int cases) {
  RandomSource src(seed);
  int failures = 0;
  for (int c = 0; c < cases; ++c) {
    const Index n = 1 + Index(src.uniform() * 512);
    const Index off = Index(src.uniform() * double(n));
    const Vec<Scalar> p = src.normals<Scalar>(n);
    const auto h = make_reflector<Scalar>(p, off);

    bool ok = true;
    const Vec<Scalar> hp = h.apply(p);
    if (off + 1 < n && hp.tail(n - off - 1).norm() > 1e-10 * p.norm())
      ok = false;

    const Vec<Scalar> x = src.normals<Scalar>(n);
    const Vec<Scalar> hx = h.apply(x);
    if (std::abs(hx.norm() - x.norm()) > 1e-12 * x.norm()) ok = false;
    if ((h.apply_adjoint(hx) - x).norm() > 1e-12 * x.norm()) ok = false;

    failures += ok ? 0 : 1;
  }
  return failures;
}

Outcome criterion1() {
  const int cases = 1000;
  const int bad_real = reflector_cases<double>(1, cases);
  const int bad_cplx = reflector_cases<std::complex<double>>(2, cases);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d/%d real and %d/%d complex cases ok",
                cases - bad_real, cases, cases - bad_cplx, cases);
  return {bad_real == 0 && bad_cplx == 0, buf};
}

// --- criterion 2: operator contracts across ensembles and seeds ---

Outcome criterion2() {
  const int seeds = 100;
  int passed = 0;
  std::string first_failure;
  for (int s = 0; s < seeds; ++s) {
    const SuiteReport rep =
        all_operator_contracts(96, 64, derive_seed(1, std::uint64_t(s)));
    if (rep.passed()) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = " first failure seed " + std::to_string(s);
    }
  }
  return {passed == seeds,
          std::to_string(passed) + "/" + std::to_string(seeds) +
              " seeds passed" + first_failure};
}

// --- criterion 3: basis reconstruction of the orthogonal ensemble ---

Outcome criterion3() {
  const Index n = 64;
  const int seeds = 2000;
  double worst_gram = 0.0;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    HaarOperator<double> op(n, RandomSource(derive_seed(3, std::uint64_t(s))));
    const MatX q = reconstruct_by_basis_probes(op);
    const double gram_err =
        (q.transpose() * q - MatX::Identity(n, n)).cwiseAbs().maxCoeff();
    worst_gram = std::max(worst_gram, gram_err);
    sum += q.sum();
    sq += q.squaredNorm();
  }
  const double count = double(seeds) * double(n) * double(n);
  const double mean = sum / count;
  const double var = sq / count - mean * mean;
  const double target = 1.0 / double(n);

  const bool ok = worst_gram <= 1e-10 && std::abs(var - target) <= 0.05 * target;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "worst orthogonality %.2e, pooled variance %.6g vs %.6g",
                worst_gram, var, target);
  return {ok, buf};
}

// --- criterion 4: backend equivalence fixtures ---

Outcome criterion4() {
  EquivalenceOptions opts;
  opts.trials = 10000;
  opts.significance = 1e-3;
  opts.threads = 0;

  opts.seed = 1;
  const SuiteReport ista = with_retry(
      [&](std::uint64_t s) {
        EquivalenceOptions o = opts;
        o.seed = s;
        return ista_equivalence_suite(o);
      },
      opts.seed);
  const SuiteReport haar = with_retry(
      [&](std::uint64_t s) {
        EquivalenceOptions o = opts;
        o.seed = s;
        return haar_equivalence_suite(o);
      },
      opts.seed);

  if (!ista.passed()) std::fprintf(stderr, "%s\n", ista.summary().c_str());
  if (!haar.passed()) std::fprintf(stderr, "%s\n", haar.summary().c_str());
  return {ista.passed() && haar.passed(),
          ista.summary().substr(0, ista.summary().find('\n')) + "; " +
              haar.summary().substr(0, haar.summary().find('\n'))};
}

// --- criterion 5: mean MSE curves agree between backends ---

struct CurveGap {
  double worst = 0.0;  // in combined standard errors
  Index worst_t = 0;
  bool ok = true;
};

CurveGap compare_curves(const IstaCurves& a, const IstaCurves& b) {
  CurveGap gap;
  for (std::size_t t = 0; t < a.mse_mean.size(); ++t) {
    const double se =
        std::sqrt(a.mse_stderr[t] * a.mse_stderr[t] +
                  b.mse_stderr[t] * b.mse_stderr[t]);
    const double dev = std::abs(a.mse_mean[t] - b.mse_mean[t]) / se;
    if (dev > gap.worst) {
      gap.worst = dev;
      gap.worst_t = Index(t) + 1;
    }
  }
  gap.ok = gap.worst <= 3.0;
  return gap;
}

Outcome criterion5() {
  IstaConfig cfg;
  cfg.n = 256;
  cfg.iterations = 50;
  cfg.trials = 2000;
  cfg.threads = 0;
  cfg.seed = 1;

  CurveGap gap = compare_curves(ista_run(cfg, Backend::hd),
                                ista_run(cfg, Backend::direct));
  bool retried = false;
  if (!gap.ok) {  // statistical criterion: one fresh-seed retry
    retried = true;
    cfg.seed = derive_seed(cfg.seed, 0x7e7a);
    gap = compare_curves(ista_run(cfg, Backend::hd),
                         ista_run(cfg, Backend::direct));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max deviation %.2f combined stderrs at t=%lld over %lld points%s",
                gap.worst, static_cast<long long>(gap.worst_t),
                static_cast<long long>(cfg.iterations),
                retried ? " (after retry)" : "");
  return {gap.ok, buf};
}

// --- criterion 6: wall-clock scaling exponents ---

Outcome criterion6() {
  BenchOptions opts;
  opts.reps = 5;
  opts.seed = 1;

  const std::vector<Index> hd_ns = {4096, 8192, 16384, 32768, 65536, 131072};
  const double hd_slope = slope_in_n(scaling_in_n(Backend::hd, hd_ns, 50, opts));

  BenchOptions direct_opts = opts;
  direct_opts.dim_cap = 4096;
  const std::vector<Index> di_ns = {512, 1024, 2048, 4096};
  const double di_slope =
      slope_in_n(scaling_in_n(Backend::direct, di_ns, 50, direct_opts));

  const std::vector<Index> ts = {10, 20, 40, 80};
  const double t_slope = slope_in_T(scaling_in_T(Backend::hd, 16384, ts, opts));

  const bool ok = hd_slope >= 0.8 && hd_slope <= 1.4 && di_slope >= 1.7 &&
                  t_slope >= 1.6 && t_slope <= 2.4;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "lazy n-slope %.3f in [0.8,1.4], dense n-slope %.3f >= 1.7, "
                "lazy T-slope %.3f in [1.6,2.4]",
                hd_slope, di_slope, t_slope);
  return {ok, buf};
}

// --- criterion 7: implicit eigensolver against dense ground truth ---

Outcome criterion7() {
  SpectralConfig cfg;
  cfg.n = 256;
  cfg.alpha = 2.0;
  cfg.seed = 1;

  // (a) probe-driven solve vs dense diagonalization of the same matrix.
  SpectralConfig exact = cfg;
  exact.solver = SpectralConfig::Solver::krylov;
  exact.tol = 1e-12;
  bool dense_ok = true;
  double worst_rel = 0.0;
  for (std::uint64_t k = 0; k < 3; ++k) {
    const SpectralTrialResult got = spectral_trial(exact, Backend::direct, k);
    const SpectralDenseReference ref = spectral_dense_reference(exact, k);
    const double rel_l =
        std::abs(got.lambda_max - ref.lambda_max) / std::abs(ref.lambda_max);
    const double rel_r = std::abs(got.rho - ref.rho) / std::abs(ref.rho);
    worst_rel = std::max({worst_rel, rel_l, rel_r});
    if (!got.converged || rel_l > 1e-8 || rel_r > 1e-8) dense_ok = false;
  }

  // (b) the overlap distribution matches across backends.
  SpectralConfig mc = cfg;
  mc.solver = SpectralConfig::Solver::power;
  mc.tol = 1e-8;
  mc.trials = 500;
  mc.threads = 0;
  auto rho_ks = [&](std::uint64_t seed) {
    SpectralConfig c = mc;
    c.seed = seed;
    const SpectralSummary hd = spectral_run(c, Backend::hd);
    const SpectralSummary di = spectral_run(c, Backend::direct);
    std::vector<double> rh, rd;
    for (const auto& t : hd.trials) rh.push_back(t.rho);
    for (const auto& t : di.trials) rd.push_back(t.rho);
    return two_sample_ks(std::move(rh), std::move(rd), "rho");
  };
  KsReport ks = rho_ks(mc.seed);
  bool retried = false;
  if (!ks.pass(1e-3)) {
    retried = true;
    ks = rho_ks(derive_seed(mc.seed, 0x7e7a));
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "dense match worst rel err %.2e, overlap KS D=%.3f p=%.3g%s",
                worst_rel, ks.statistic, ks.p_value,
                retried ? " (after retry)" : "");
  return {dense_ok && ks.pass(1e-3), buf};
}

// --- criterion 8: every planted defect trips at least one suite ---

Outcome criterion8() {
  struct Catch {
    Mutation mutation;
    const char* name;
    std::string tripped_by;
  };
  std::vector<Catch> table = {
      {Mutation::skip_reflector, "skip-reflector", ""},
      {Mutation::sign_convention, "sign-convention", ""},
      {Mutation::uncorrected_qr, "uncorrected-qr", ""},
  };

  for (Catch& c : table) {
    bool contracts_fail = false;
    for (std::uint64_t s = 0; s < 2 && !contracts_fail; ++s) {
      contracts_fail =
          !all_operator_contracts(96, 64, derive_seed(9, s), c.mutation)
               .passed();
    }
    if (contracts_fail) {
      c.tripped_by = "operator-contracts";
      continue;
    }
    EquivalenceOptions opts;
    opts.trials = 2000;
    opts.threads = 0;
    opts.mutation = c.mutation;
    if (!haar_equivalence_suite(opts).passed()) {
      c.tripped_by = "haar-equivalence";
      continue;
    }
    if (!ista_equivalence_suite(opts).passed()) {
      c.tripped_by = "ista-equivalence";
    }
  }

  bool ok = true;
  std::string detail;
  for (const Catch& c : table) {
    if (!detail.empty()) detail += ", ";
    if (c.tripped_by.empty()) {
      ok = false;
      detail += std::string(c.name) + " UNDETECTED";
    } else {
      detail += std::string(c.name) + "->" + c.tripped_by;
    }
  }
  return {ok, detail};
}

// --- driver ---

struct Gate {
  int limit_s;
  std::function<Outcome()> run;
};

int run_criterion(int idx, const Gate& gate) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = gate.run();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const bool in_time = elapsed <= double(gate.limit_s);
  const bool pass = out.ok && in_time;
  std::printf("criterion %d: %s (%s; %.1f s, limit %d s%s)\n", idx,
              pass ? "PASS" : "FAIL", out.detail.c_str(), elapsed,
              gate.limit_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Gate> gates = {
      {10, criterion1},  {30, criterion2},  {60, criterion3},
      {300, criterion4}, {300, criterion5}, {600, criterion6},
      {300, criterion7}, {300, criterion8},
  };

  int which = 0;  // 0 = all
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (which < 0 || which > int(gates.size())) {
    std::fprintf(stderr, "criterion out of range: %d\n", which);
    return 2;
  }

  int failures = 0;
  if (which == 0) {
    for (std::size_t i = 0; i < gates.size(); ++i) {
      failures += run_criterion(int(i) + 1, gates[i]);
    }
  } else {
    failures = run_criterion(which, gates[std::size_t(which - 1)]);
  }
  return failures == 0 ? 0 : 1;
}
