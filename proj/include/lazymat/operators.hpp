#pragma once

#include <limits>
#include <utility>

#include "lazymat/reflect.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// Matrix ensembles an operator or dense oracle sample can represent.
enum class EnsembleKind { ginibre, haar, goe, usv, subsampled_haar };

/// Deliberate defects, injectable into the lazy operators for the
/// negative-control suites. All off in normal use.
struct FaultFlags {
  /// Drop the construction-side reflector append on the operator's first
  /// probe. The operator then contradicts itself on the next probe.
  bool skip_reflector = false;
  /// Sign rule forwarded to every reflector construction.
  SignRule sign_rule = SignRule::stable;
};

/// A fixed random matrix revealed only through matrix-vector products.
/// Right probes compute Q*x, left probes Q^T*x (Q^* x for complex
/// scalars). Probing the same input twice must return the same output:
/// the matrix is fixed for the operator's lifetime even when most of it
/// has not been decided yet.
template <typename Scalar>
class ProbeOperator {
 public:
  virtual ~ProbeOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  /// Probes the operator may still serve before its construction runs out
  /// of deferred randomness. Effectively unbounded for dense operators.
  virtual Index remaining_probes() const = 0;

  virtual Vec<Scalar> probe(const Vec<Scalar>& x, Side side) = 0;

 protected:
  void check_probe_input(const Vec<Scalar>& x, Side side) const {
    const Index want = (side == Side::right) ? cols() : rows();
    require(x.size() == want, "probe: input dimension mismatch");
    require(x.allFinite(), "probe: non-finite input");
  }
};

/// Materialized matrix behind the probe interface; the direct-simulation
/// route the lazy operators are tested against.
template <typename Scalar>
class DenseOperator final : public ProbeOperator<Scalar> {
 public:
  DenseOperator(Mat<Scalar> matrix, EnsembleKind kind)
      : a_(std::move(matrix)), kind_(kind) {
    require(a_.rows() >= 1 && a_.cols() >= 1, "DenseOperator: empty matrix");
  }

  Index rows() const override { return a_.rows(); }
  Index cols() const override { return a_.cols(); }
  Index remaining_probes() const override {
    return std::numeric_limits<Index>::max();
  }
  EnsembleKind kind() const { return kind_; }
  const Mat<Scalar>& matrix() const { return a_; }

  Vec<Scalar> probe(const Vec<Scalar>& x, Side side) override {
    this->check_probe_input(x, side);
    if (side == Side::right) return a_ * x;
    return a_.adjoint() * x;
  }

 private:
  Mat<Scalar> a_;
  EnsembleKind kind_;
};

}  // namespace lazymat
