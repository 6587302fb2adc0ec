#pragma once

#include <utility>

#include "lazymat/operators.hpp"
#include "lazymat/random.hpp"
#include "lazymat/reflect.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// Lazy n x n orthogonal (unitary, for complex scalars) matrix distributed
/// by the translation-invariant measure on the group, revealed one probe
/// at a time.
///
/// Probe t adds one reflector with offset t to each of two chains: on the
/// probed side the reflector folds the input into the first t coordinates,
/// on the other side it encodes a fresh random direction. The
/// never-decided (n-t) x (n-t) corner stays implicit as unconsumed
/// randomness. At most n probes exist.
template <typename Scalar>
class HaarOperator final : public ProbeOperator<Scalar> {
 public:
  HaarOperator(Index n, RandomSource src, FaultFlags faults = {})
      : n_(n),
        src_(std::move(src)),
        chain_left_(n >= 1 ? n : 1),
        chain_right_(n >= 1 ? n : 1),
        faults_(faults) {
    require(n >= 1, "HaarOperator: n must be positive");
  }

  Index rows() const override { return n_; }
  Index cols() const override { return n_; }
  Index remaining_probes() const override { return n_ - t_; }
  Index probe_count() const { return t_; }
  Index right_chain_size() const { return chain_right_.size(); }
  Index left_chain_size() const { return chain_left_.size(); }

  Vec<Scalar> probe(const Vec<Scalar>& x, Side side) override {
    this->check_probe_input(x, side);
    if (t_ == n_) {
      throw BudgetExhausted("HaarOperator: probe budget n spent");
    }
    const bool first_probe = (t_ == 0);
    ++t_;
    const Index offset = t_ - 1;
    Vec<Scalar> g = src_.template normals<Scalar>(n_);

    ReflectorChain<Scalar>& fold_chain =
        (side == Side::right) ? chain_right_ : chain_left_;
    ReflectorChain<Scalar>& other_chain =
        (side == Side::right) ? chain_left_ : chain_right_;

    Vec<Scalar> p = fold_chain.apply(x, Order::forward, Mode::plain);
    auto fold = make_reflector<Scalar>(p, offset, 0, faults_.sign_rule);
    auto mix = make_reflector<Scalar>(g, offset, 0, faults_.sign_rule);

    Vec<Scalar> z = fold.apply(p);
    if (!(faults_.skip_reflector && first_probe)) {
      fold_chain.append(std::move(fold));
    }
    other_chain.append(std::move(mix));

    other_chain.apply_in_place(z, Order::reverse, Mode::adjoint);
    return z;
  }

 private:
  Index n_;
  RandomSource src_;
  ReflectorChain<Scalar> chain_left_;
  ReflectorChain<Scalar> chain_right_;
  Index t_ = 0;
  FaultFlags faults_;
};

/// Materialize the operator's matrix by right-probing the natural basis.
/// Consumes the whole probe budget; the operator must be fresh.
template <typename Scalar>
Mat<Scalar> reconstruct_by_basis_probes(HaarOperator<Scalar>& op) {
  require(op.probe_count() == 0, "reconstruct: operator already probed");
  const Index n = op.rows();
  Mat<Scalar> q(n, n);
  for (Index j = 0; j < n; ++j) {
    Vec<Scalar> e = Vec<Scalar>::Zero(n);
    e[j] = Scalar(1);
    q.col(j) = op.probe(e, Side::right);
  }
  return q;
}

}  // namespace lazymat
