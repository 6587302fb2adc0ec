#pragma once

#include <cstdint>
#include <vector>

#include "lazymat/eigensolve.hpp"
#include "lazymat/random.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// Which route serves the matrix-vector products: the lazy reflector
/// construction or a matrix materialized in advance.
enum class Backend { hd, direct };

/// Spike-and-slab draw: each entry is 0 with probability rho, otherwise
/// N(0, sigma_s^2). One uniform is consumed per entry, plus one normal for
/// the slab entries.
VecX sample_bernoulli_gaussian(Index n, double rho, double sigma_s,
                               RandomSource& src);

/// Elementwise sign(x) * max(|x| - theta, 0).
VecX soft_threshold(const VecX& x, double theta);

/// Sparse regression via iterative soft thresholding on a random design
/// with N(0, 1/m) entries, m = floor(n * m_ratio). Scalar parameters
/// default to the reference experiment's values.
struct IstaConfig {
  Index n = 256;
  double m_ratio = 0.5;
  Index iterations = 50;  // T; one iteration costs two probes
  double lambda = 2.0;
  double tau = 0.3;
  double rho = 0.2;      // prior zero-probability
  double sigma_s = 2.0;  // slab standard deviation
  double sigma_w = 0.1;  // measurement noise standard deviation
  Index trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
};

Index ista_m(const IstaConfig& cfg);
void validate(const IstaConfig& cfg);

struct IstaTrialResult {
  VecX final_iterate;       // x_T
  std::vector<double> mse;  // (1/n)*||x_t - beta*||^2 for t = 1..T
};

// Forward declaration; full contract in operators.hpp.
template <typename Scalar>
class ProbeOperator;

/// Core of one trial against a caller-supplied design operator: draw the
/// signal and noise from data_src, generate y = Q beta* + w through one
/// right probe, then run T thresholding steps from x_0 = 0 as 2T driver
/// iterations alternating right and left probes.
IstaTrialResult ista_trial_on(ProbeOperator<double>& op, const IstaConfig& cfg,
                              RandomSource& data_src);

/// One self-contained trial: samples the design (lazily or densely) and
/// delegates to ista_trial_on. Trials are independent; `trial_index` and
/// the backend select disjoint seed material, so the two backends never
/// share randomness.
IstaTrialResult ista_trial(const IstaConfig& cfg, Backend backend,
                           std::uint64_t trial_index);

struct IstaCurves {
  std::vector<double> mse_mean;    // index t-1 holds iteration t
  std::vector<double> mse_stderr;
};

/// Trial-averaged MSE curve, parallel over trials.
IstaCurves ista_run(const IstaConfig& cfg, Backend backend);

/// Leading-eigenvector estimation of a planted direction from generalized
/// linear measurements y_i = tanh(|a_i . xi|) over a subsampled
/// orthogonal design with m = floor(alpha * n) rows of randomness. The
/// planted vector is drawn uniformly with norm sqrt(n) (a declared
/// default; the measurement scale depends on it).
struct SpectralConfig {
  Index n = 256;
  double alpha = 2.0;  // oversampling; must exceed 1
  enum class Solver { power, krylov };
  Solver solver = Solver::power;
  // One matvec of the spectral matrix costs two probes, and measurement
  // generation costs one, so the lazy route supports at most (m-1)/2
  // matvecs. The budget is clamped to that on both backends to keep them
  // solving identical problems.
  Index max_matvecs = 300;
  double tol = 1e-8;
  Index krylov_basis = 24;
  Index trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
};

Index spectral_m(const SpectralConfig& cfg);
void validate(const SpectralConfig& cfg);

struct SpectralTrialResult {
  double lambda_max = 0.0;
  double rho = 0.0;  // squared cosine similarity to the planted vector
  Index matvecs = 0;
  double residual = 0.0;
  bool converged = false;
};

SpectralTrialResult spectral_trial(const SpectralConfig& cfg, Backend backend,
                                   std::uint64_t trial_index);

struct SpectralDenseReference {
  double lambda_max = 0.0;
  double rho = 0.0;
};

/// Ground truth for the probe-driven solver: materializes exactly the
/// matrix a direct-backend trial of the same index uses and
/// diagonalizes it densely.
SpectralDenseReference spectral_dense_reference(const SpectralConfig& cfg,
                                                std::uint64_t trial_index);

struct SpectralSummary {
  double rho_mean = 0.0;
  double rho_stderr = 0.0;
  double lambda_mean = 0.0;
  std::vector<SpectralTrialResult> trials;
};

SpectralSummary spectral_run(const SpectralConfig& cfg, Backend backend);

}  // namespace lazymat
