#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "lazymat/types.hpp"

namespace lazymat {

using MatVec = std::function<VecX(const VecX&)>;

struct EigsOptions {
  Index max_matvecs = 300;
  double tol = 1e-8;  // relative residual ||A u - lambda u|| <= tol * |lambda|
  Index basis = 24;   // Krylov basis size between restarts
};

struct EigsResult {
  double lambda = 0.0;
  VecX vector;
  Index matvecs = 0;
  double residual = 0.0;  // final relative residual estimate
  bool converged = false;
};

/// Leading (largest-magnitude) eigenpair of a symmetric operator by plain
/// power iteration with a Rayleigh-quotient convergence test.
inline EigsResult power_iteration(const MatVec& apply, const VecX& start,
                                  const EigsOptions& opts = {}) {
  require(start.size() >= 1, "power_iteration: empty start vector");
  require(start.norm() > 0, "power_iteration: zero start vector");
  EigsResult res;
  VecX x = start / start.norm();
  while (res.matvecs < opts.max_matvecs) {
    const VecX z = apply(x);
    ++res.matvecs;
    const double lambda = x.dot(z);
    const double rnorm = (z - lambda * x).norm();
    res.lambda = lambda;
    res.vector = x;
    res.residual = (lambda == 0.0) ? rnorm : rnorm / std::abs(lambda);
    if (rnorm <= opts.tol * std::abs(lambda)) {
      res.converged = true;
      return res;
    }
    const double zn = z.norm();
    if (zn == 0.0) return res;  // start lies in the kernel
    x = z / zn;
  }
  return res;
}

/// Leading eigenpair of a symmetric operator by a restarted Krylov scheme:
/// grow an orthonormal basis with full reorthogonalization, Rayleigh-Ritz
/// on the projected matrix, restart from the best Ritz vector. The
/// residual comes from the Arnoldi relation, so convergence checks cost no
/// extra applications.
inline EigsResult restarted_krylov(const MatVec& apply, const VecX& start,
                                   const EigsOptions& opts = {}) {
  require(start.size() >= 1, "restarted_krylov: empty start vector");
  require(start.norm() > 0, "restarted_krylov: zero start vector");
  require(opts.basis >= 2, "restarted_krylov: basis must be >= 2");
  const Index n = start.size();
  const Index m = std::min(opts.basis, n);

  EigsResult res;
  VecX v0 = start / start.norm();

  while (res.matvecs < opts.max_matvecs) {
    MatX basis(n, m);
    MatX h = MatX::Zero(m, m);
    basis.col(0) = v0;
    Index grown = 0;    // columns whose image under the operator is in h
    double beta = 0.0;  // coupling of the last grown column to the next one
    bool breakdown = false;

    while (grown < m && res.matvecs < opts.max_matvecs) {
      const Index j = grown;
      VecX w = apply(basis.col(j));
      ++res.matvecs;
      for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i <= j; ++i) {
          const double c = basis.col(i).dot(w);
          if (pass == 0) h(i, j) += c;
          w -= c * basis.col(i);
        }
      }
      beta = w.norm();
      grown = j + 1;
      if (beta <= 1e-14) {
        breakdown = true;  // exact invariant subspace
        break;
      }
      if (grown < m) {
        h(j + 1, j) = beta;
        h(j, j + 1) = beta;
        basis.col(j + 1) = w / beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<MatX> eig(h.topLeftCorner(grown, grown));
    Index best = 0;
    eig.eigenvalues().cwiseAbs().maxCoeff(&best);
    const double theta = eig.eigenvalues()[best];
    const VecX s = eig.eigenvectors().col(best);
    VecX u = basis.leftCols(grown) * s;
    u /= u.norm();

    // ||A u - theta u|| = beta * |last coefficient| by the Arnoldi relation.
    const double rnorm = breakdown ? 0.0 : beta * std::abs(s[grown - 1]);
    res.lambda = theta;
    res.vector = u;
    res.residual = (theta == 0.0) ? rnorm : rnorm / std::abs(theta);
    if (breakdown || rnorm <= opts.tol * std::abs(theta)) {
      res.converged = true;
      return res;
    }
    v0 = u;
  }
  return res;
}

inline EigsResult leading_eigenpair(const MatVec& apply, const VecX& start,
                                    bool use_krylov,
                                    const EigsOptions& opts = {}) {
  return use_krylov ? restarted_krylov(apply, start, opts)
                    : power_iteration(apply, start, opts);
}

}  // namespace lazymat
