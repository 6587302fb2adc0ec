#include "lazymat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include <Eigen/Eigenvalues>

#include "lazymat/dynamics.hpp"
#include "lazymat/ensembles.hpp"
#include "lazymat/ginibre.hpp"
#include "lazymat/haar.hpp"
#include "lazymat/parallel.hpp"
#include "lazymat/stats.hpp"

namespace lazymat {

VecX sample_bernoulli_gaussian(Index n, double rho, double sigma_s,
                               RandomSource& src) {
  require(n >= 1, "sample_bernoulli_gaussian: n must be positive");
  require(rho >= 0.0 && rho <= 1.0, "sample_bernoulli_gaussian: rho in [0,1]");
  require(sigma_s > 0.0, "sample_bernoulli_gaussian: sigma_s must be positive");
  VecX out(n);
  for (Index i = 0; i < n; ++i) {
    out[i] = (src.uniform() < rho) ? 0.0 : sigma_s * src.normal();
  }
  return out;
}

VecX soft_threshold(const VecX& x, double theta) {
  require(theta >= 0.0, "soft_threshold: threshold must be nonnegative");
  VecX out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x[i]) - theta;
    out[i] = (mag > 0.0) ? (x[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

Index ista_m(const IstaConfig& cfg) {
  return static_cast<Index>(std::floor(static_cast<double>(cfg.n) * cfg.m_ratio));
}

void validate(const IstaConfig& cfg) {
  require(cfg.n >= 2, "ista: n must be at least 2");
  require(ista_m(cfg) >= 1, "ista: m_ratio gives an empty design");
  require(cfg.iterations >= 1, "ista: need at least one iteration");
  require(cfg.lambda > 0.0 && cfg.tau > 0.0, "ista: lambda, tau must be positive");
  require(cfg.rho > 0.0 && cfg.rho < 1.0, "ista: rho must lie in (0,1)");
  require(cfg.sigma_s > 0.0 && cfg.sigma_w > 0.0,
          "ista: sigma_s, sigma_w must be positive");
  require(cfg.trials >= 1, "ista: trials must be positive");
}

namespace {

std::unique_ptr<ProbeOperator<double>> make_design(Index m, Index n,
                                                   double sigma,
                                                   Backend backend,
                                                   RandomSource src) {
  if (backend == Backend::hd) {
    return std::make_unique<GinibreOperator<double>>(m, n, sigma,
                                                     std::move(src));
  }
  Mat<double> a = sample_dense_ginibre<double>(m, n, sigma, src);
  return std::make_unique<DenseOperator<double>>(std::move(a),
                                                 EnsembleKind::ginibre);
}

}  // namespace

IstaTrialResult ista_trial_on(ProbeOperator<double>& op, const IstaConfig& cfg,
                              RandomSource& data_src) {
  validate(cfg);
  const Index m = ista_m(cfg);
  const Index n = cfg.n;
  require(op.rows() == m && op.cols() == n, "ista: operator shape mismatch");

  const VecX beta = sample_bernoulli_gaussian(n, cfg.rho, cfg.sigma_s, data_src);
  const VecX noise = data_src.normal_vector(m) * cfg.sigma_w;
  const VecX y_obs = op.probe(beta, Side::right) + noise;

  IstaTrialResult result;
  result.mse.resize(static_cast<std::size_t>(cfg.iterations));

  const double shrink = cfg.lambda * cfg.tau;
  DynamicsSpec<double> spec;
  spec.iterations = 2 * cfg.iterations;
  spec.history_depth = 1;
  spec.initial = {VecX::Zero(n), VecX::Zero(n)};
  spec.side_of = [](Index t) { return (t % 2 == 1) ? Side::right : Side::left; };
  spec.update = [&](Index t, const VecX& y,
                    const std::vector<VecX>& hist) -> VecX {
    if (t % 2 == 1) return y_obs - y;             // residual, length m
    return soft_threshold(hist[1] + cfg.tau * y, shrink);
  };
  spec.observer = [&](Index t, const VecX&, const VecX& next) {
    if (t % 2 == 0) {
      result.mse[static_cast<std::size_t>(t / 2 - 1)] =
          (next - beta).squaredNorm() / static_cast<double>(n);
    }
  };
  spec.keep_trajectory = false;

  Trajectory<double> traj = run_dynamics(op, spec);
  result.final_iterate = traj.final_iterate();
  return result;
}

IstaTrialResult ista_trial(const IstaConfig& cfg, Backend backend,
                           std::uint64_t trial_index) {
  validate(cfg);
  const Index m = ista_m(cfg);
  const Index n = cfg.n;
  const Index budget = std::min(m, n);
  if (backend == Backend::hd && 2 * cfg.iterations + 1 > budget) {
    throw BudgetExhausted(
        "ista: data generation plus 2T probes exceed the min(m, n) budget");
  }

  const std::uint64_t base = derive_seed(
      cfg.seed, 2 * trial_index + (backend == Backend::direct ? 1 : 0));
  RandomSource matrix_src(base, 0);
  RandomSource data_src(base, 1);

  const double sigma = 1.0 / std::sqrt(static_cast<double>(m));
  auto op = make_design(m, n, sigma, backend, std::move(matrix_src));
  return ista_trial_on(*op, cfg, data_src);
}

IstaCurves ista_run(const IstaConfig& cfg, Backend backend) {
  validate(cfg);
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t horizon = static_cast<std::size_t>(cfg.iterations);
  std::vector<std::vector<double>> mse(trials);
  parallel_for(trials, cfg.threads, [&](std::size_t i) {
    mse[i] = ista_trial(cfg, backend, i).mse;
  });

  IstaCurves curves;
  curves.mse_mean.resize(horizon);
  curves.mse_stderr.resize(horizon);
  std::vector<double> column(trials);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < trials; ++i) column[i] = mse[i][t];
    curves.mse_mean[t] = mean_of(column);
    curves.mse_stderr[t] = stderr_of_mean(column);
  }
  return curves;
}

Index spectral_m(const SpectralConfig& cfg) {
  return static_cast<Index>(std::floor(cfg.alpha * static_cast<double>(cfg.n)));
}

void validate(const SpectralConfig& cfg) {
  require(cfg.n >= 2, "spectral: n must be at least 2");
  require(cfg.alpha > 1.0, "spectral: alpha must exceed 1");
  require(cfg.tol > 0.0, "spectral: tol must be positive");
  require(cfg.max_matvecs >= 1, "spectral: need a positive matvec budget");
  require(cfg.krylov_basis >= 2, "spectral: krylov basis must be >= 2");
  require(cfg.trials >= 1, "spectral: trials must be positive");
}

namespace {

// Everything a spectral trial needs before the eigensolver runs. Both
// backends and the dense reference draw from this one place so they stay
// seed-for-seed comparable.
struct SpectralInstance {
  std::unique_ptr<ProbeOperator<double>> op;
  VecX xi;     // planted direction, norm sqrt(n)
  VecX y;      // measurements tanh(|A^T xi|), entrywise in (0,1)
  VecX start;  // unit-norm eigensolver start
  Index m = 0;
};

SpectralInstance spectral_instance(const SpectralConfig& cfg, Backend backend,
                                   std::uint64_t trial_index) {
  const Index n = cfg.n;
  const Index m = spectral_m(cfg);

  const std::uint64_t base = derive_seed(
      cfg.seed, 2 * trial_index + (backend == Backend::direct ? 1 : 0));
  RandomSource matrix_src(base, 0);
  RandomSource data_src(base, 1);

  SpectralInstance inst;
  inst.m = m;
  if (backend == Backend::hd) {
    inst.op = std::make_unique<SubsampledHaarOperator<double>>(
        std::make_unique<HaarOperator<double>>(m, std::move(matrix_src)), n);
  } else {
    const Mat<double> q = sample_dense_haar<double>(m, matrix_src);
    inst.op = std::make_unique<DenseOperator<double>>(
        q.topRows(n), EnsembleKind::subsampled_haar);
  }

  inst.xi = data_src.normal_vector(n);
  inst.xi *= std::sqrt(static_cast<double>(n)) / inst.xi.norm();

  const VecX projections = inst.op->probe(inst.xi, Side::left);
  inst.y.resize(m);
  for (Index i = 0; i < m; ++i) {
    inst.y[i] = std::tanh(std::abs(projections[i]));
    require(inst.y[i] > 0.0 && inst.y[i] < 1.0,
            "spectral: measurement left (0,1)");
  }

  inst.start = data_src.normal_vector(n);
  inst.start /= inst.start.norm();
  return inst;
}

// The lazy backend can serve at most m probes, one of which generates the
// measurements; each matvec of D costs two more. The same clamp applies
// to the materialized backend so the two solve identical problems.
Index effective_matvec_cap(const SpectralConfig& cfg, Index m) {
  const Index by_budget = (m - 1) / 2;
  const Index cap = std::min(cfg.max_matvecs, by_budget);
  require(cap >= 1, "spectral: m too small for even one matvec");
  return cap;
}

}  // namespace

SpectralTrialResult spectral_trial(const SpectralConfig& cfg, Backend backend,
                                   std::uint64_t trial_index) {
  validate(cfg);
  SpectralInstance inst = spectral_instance(cfg, backend, trial_index);

  const double inv_m = 1.0 / static_cast<double>(inst.m);
  MatVec apply = [&](const VecX& v) -> VecX {
    VecX t = inst.op->probe(v, Side::left);
    t.array() *= inst.y.array();
    return inst.op->probe(t, Side::right) * inv_m;
  };

  EigsOptions opts;
  opts.max_matvecs = effective_matvec_cap(cfg, inst.m);
  opts.tol = cfg.tol;
  opts.basis = cfg.krylov_basis;
  const EigsResult eig = leading_eigenpair(
      apply, inst.start, cfg.solver == SpectralConfig::Solver::krylov, opts);

  SpectralTrialResult out;
  out.lambda_max = eig.lambda;
  const double cosine =
      inst.xi.dot(eig.vector) / (inst.xi.norm() * eig.vector.norm());
  out.rho = cosine * cosine;
  out.matvecs = eig.matvecs;
  out.residual = eig.residual;
  out.converged = eig.converged;
  return out;
}

SpectralDenseReference spectral_dense_reference(const SpectralConfig& cfg,
                                                std::uint64_t trial_index) {
  validate(cfg);
  SpectralInstance inst = spectral_instance(cfg, Backend::direct, trial_index);
  const auto* dense = dynamic_cast<const DenseOperator<double>*>(inst.op.get());
  require(dense != nullptr, "spectral reference: expected a dense operator");

  const Mat<double>& a = dense->matrix();
  const Mat<double> d = (a * inst.y.asDiagonal() * a.transpose()) /
                        static_cast<double>(inst.m);
  Eigen::SelfAdjointEigenSolver<Mat<double>> eig(d);
  require(eig.info() == Eigen::Success, "spectral reference: eig failed");

  // d is positive semidefinite, so the top of the spectrum is the last
  // entry of Eigen's ascending eigenvalue order.
  const Index last = d.rows() - 1;
  SpectralDenseReference ref;
  ref.lambda_max = eig.eigenvalues()[last];
  const VecX v = eig.eigenvectors().col(last);
  const double cosine = inst.xi.dot(v) / (inst.xi.norm() * v.norm());
  ref.rho = cosine * cosine;
  return ref;
}

SpectralSummary spectral_run(const SpectralConfig& cfg, Backend backend) {
  validate(cfg);
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  SpectralSummary summary;
  summary.trials.resize(trials);
  parallel_for(trials, cfg.threads, [&](std::size_t i) {
    summary.trials[i] = spectral_trial(cfg, backend, i);
  });

  std::vector<double> rhos(trials), lambdas(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    rhos[i] = summary.trials[i].rho;
    lambdas[i] = summary.trials[i].lambda_max;
  }
  summary.rho_mean = mean_of(rhos);
  summary.rho_stderr = stderr_of_mean(rhos);
  summary.lambda_mean = mean_of(lambdas);
  return summary;
}

}  // namespace lazymat
