#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>

#include <Eigen/QR>

#include "lazymat/ginibre.hpp"
#include "lazymat/haar.hpp"
#include "lazymat/operators.hpp"
#include "lazymat/random.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// Largest dimension the dense oracle will materialize. Defaults to 2048;
/// override with the LAZYMAT_ORACLE_DIM_CAP environment variable.
inline Index oracle_dim_cap() {
  if (const char* s = std::getenv("LAZYMAT_ORACLE_DIM_CAP")) {
    const long v = std::atol(s);
    if (v >= 1) return static_cast<Index>(v);
  }
  return 2048;
}

inline void check_oracle_cap(Index rows, Index cols, Index cap) {
  if (std::max(rows, cols) > cap) {
    throw ResourceCapExceeded(
        "dense oracle: dimension " +
        std::to_string(static_cast<long long>(std::max(rows, cols))) +
        " exceeds cap " + std::to_string(static_cast<long long>(cap)) +
        " (set LAZYMAT_ORACLE_DIM_CAP to raise)");
  }
}

/// i.i.d. normal entries with standard deviation sigma.
template <typename Scalar>
Mat<Scalar> sample_dense_ginibre(Index m, Index n, real_t<Scalar> sigma,
                                 RandomSource& src,
                                 Index cap = oracle_dim_cap()) {
  require(m >= 1 && n >= 1, "sample_dense_ginibre: dims must be positive");
  require(sigma > 0, "sample_dense_ginibre: sigma must be positive");
  check_oracle_cap(m, n, cap);
  Mat<Scalar> a(m, n);
  for (Index j = 0; j < n; ++j) a.col(j) = src.normals<Scalar>(m);
  return a * Scalar(sigma);
}

/// Uniformly random orthogonal/unitary matrix: QR-factorize a square
/// normal sample and absorb the phases of the R diagonal into Q, which
/// makes the factorization unique and the result exactly group-invariant.
/// Skipping that correction (sign_correction = false) leaves the sampler
/// biased by the QR routine's pivot convention; the biased variant exists
/// only as a negative control.
template <typename Scalar>
Mat<Scalar> sample_dense_haar(Index n, RandomSource& src,
                              bool sign_correction = true,
                              Index cap = oracle_dim_cap()) {
  require(n >= 1, "sample_dense_haar: n must be positive");
  check_oracle_cap(n, n, cap);
  Mat<Scalar> g(n, n);
  for (Index j = 0; j < n; ++j) g.col(j) = src.normals<Scalar>(n);
  Eigen::HouseholderQR<Mat<Scalar>> qr(g);
  Mat<Scalar> q = qr.householderQ();
  if (sign_correction) {
    for (Index j = 0; j < n; ++j) {
      const Scalar d = qr.matrixQR()(j, j);  // R's diagonal, stored packed
      const auto mag = std::abs(d);
      q.col(j) *= (mag == 0) ? Scalar(1) : d / Scalar(mag);
    }
  }
  return q;
}

/// Symmetric Gaussian matrix: off-diagonal variance 1, diagonal variance 2
/// (the Hermitian analogue for complex scalars), built as (G + G^*)/sqrt(2)
/// from a square normal sample.
template <typename Scalar>
Mat<Scalar> sample_dense_goe(Index n, RandomSource& src,
                             Index cap = oracle_dim_cap()) {
  require(n >= 1, "sample_dense_goe: n must be positive");
  check_oracle_cap(n, n, cap);
  Mat<Scalar> g(n, n);
  for (Index j = 0; j < n; ++j) g.col(j) = src.normals<Scalar>(n);
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  return (g + g.adjoint()) * Scalar(inv_sqrt2);
}

/// Symmetric lazy Gaussian matrix over a square inner normal operator:
/// each matvec is (right probe + left probe)/sqrt(2), so one call consumes
/// two inner probes and the budget is floor(n/2) matvecs. The probe side
/// argument is immaterial by symmetry.
template <typename Scalar>
class GOEOperator final : public ProbeOperator<Scalar> {
 public:
  explicit GOEOperator(std::unique_ptr<ProbeOperator<Scalar>> inner)
      : inner_(std::move(inner)) {
    require(inner_ != nullptr, "GOEOperator: null inner operator");
    require(inner_->rows() == inner_->cols(),
            "GOEOperator: inner operator must be square");
  }

  GOEOperator(Index n, RandomSource src, FaultFlags faults = {})
      : GOEOperator(std::make_unique<GinibreOperator<Scalar>>(
            n, n, real_t<Scalar>(1), std::move(src), faults)) {}

  Index rows() const override { return inner_->rows(); }
  Index cols() const override { return inner_->cols(); }
  Index remaining_probes() const override {
    return inner_->remaining_probes() / 2;
  }

  Vec<Scalar> probe(const Vec<Scalar>& x, Side side) override {
    (void)side;
    this->check_probe_input(x, Side::right);
    if (remaining_probes() == 0) {
      throw BudgetExhausted("GOEOperator: budget floor(n/2) spent");
    }
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    Vec<Scalar> y = inner_->probe(x, Side::right);
    y += inner_->probe(x, Side::left);
    return y * Scalar(inv_sqrt2);
  }

 private:
  std::unique_ptr<ProbeOperator<Scalar>> inner_;
};

/// Product Q = U * S * V of two independent square operators and a fixed
/// rectangular diagonal: U is rows x rows, V is cols x cols, S holds
/// min(rows, cols) singular values. The intermediate vector is scaled
/// entrywise by S and zero-padded or truncated between the two ambient
/// dimensions. One probe of each factor per probe of the product.
template <typename Scalar>
class USVOperator final : public ProbeOperator<Scalar> {
 public:
  USVOperator(std::unique_ptr<ProbeOperator<Scalar>> u,
              std::unique_ptr<ProbeOperator<Scalar>> v, VecX singular_values)
      : u_(std::move(u)), v_(std::move(v)), sv_(std::move(singular_values)) {
    require(u_ != nullptr && v_ != nullptr, "USVOperator: null factor");
    require(u_->rows() == u_->cols() && v_->rows() == v_->cols(),
            "USVOperator: factors must be square");
    require(sv_.size() == std::min(u_->rows(), v_->cols()),
            "USVOperator: need min(rows, cols) singular values");
  }

  Index rows() const override { return u_->rows(); }
  Index cols() const override { return v_->cols(); }
  Index remaining_probes() const override {
    return std::min(u_->remaining_probes(), v_->remaining_probes());
  }
  const VecX& singular_values() const { return sv_; }

  Vec<Scalar> probe(const Vec<Scalar>& x, Side side) override {
    this->check_probe_input(x, side);
    if (remaining_probes() == 0) {
      throw BudgetExhausted("USVOperator: factor budget spent");
    }
    const Index k = sv_.size();
    if (side == Side::right) {
      const Vec<Scalar> t = v_->probe(x, Side::right);
      Vec<Scalar> s = Vec<Scalar>::Zero(rows());
      s.head(k) = sv_.head(k).template cast<Scalar>().cwiseProduct(t.head(k));
      return u_->probe(s, Side::right);
    }
    const Vec<Scalar> t = u_->probe(x, Side::left);
    Vec<Scalar> s = Vec<Scalar>::Zero(cols());
    s.head(k) = sv_.head(k).template cast<Scalar>().cwiseProduct(t.head(k));
    return v_->probe(s, Side::left);
  }

 private:
  std::unique_ptr<ProbeOperator<Scalar>> u_;
  std::unique_ptr<ProbeOperator<Scalar>> v_;
  VecX sv_;
};

/// First `rows` coordinates of a square orthogonal operator: A = [I 0] Q.
/// Right probes take the head of Q*x; left probes zero-pad into the inner
/// dimension and apply Q^*.
template <typename Scalar>
class SubsampledHaarOperator final : public ProbeOperator<Scalar> {
 public:
  SubsampledHaarOperator(std::unique_ptr<ProbeOperator<Scalar>> q, Index rows)
      : q_(std::move(q)), rows_(rows) {
    require(q_ != nullptr, "SubsampledHaarOperator: null inner operator");
    require(q_->rows() == q_->cols(),
            "SubsampledHaarOperator: inner operator must be square");
    require(rows >= 1 && rows <= q_->rows(),
            "SubsampledHaarOperator: need 1 <= rows <= inner dim");
  }

  Index rows() const override { return rows_; }
  Index cols() const override { return q_->cols(); }
  Index remaining_probes() const override { return q_->remaining_probes(); }

  Vec<Scalar> probe(const Vec<Scalar>& x, Side side) override {
    this->check_probe_input(x, side);
    if (side == Side::right) {
      const Vec<Scalar> full = q_->probe(x, Side::right);
      return full.head(rows_);
    }
    Vec<Scalar> padded = Vec<Scalar>::Zero(cols());
    padded.head(rows_) = x;
    return q_->probe(padded, Side::left);
  }

 private:
  std::unique_ptr<ProbeOperator<Scalar>> q_;
  Index rows_;
};

}  // namespace lazymat
