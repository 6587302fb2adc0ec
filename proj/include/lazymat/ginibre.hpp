#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "lazymat/operators.hpp"
#include "lazymat/random.hpp"
#include "lazymat/reflect.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// Lazy m x n matrix with i.i.d. normal entries of standard deviation
/// sigma, revealed one probe at a time.
///
/// State after t probes (r from the right, l from the left, r + l = t):
/// basis pairs {(u_i, v_i)}_{i<=t} plus two reflector chains, representing
///
///   Q = sigma * ( sum_i u_i v_i^* + hidden-part ),
///
/// where the hidden part involves only randomness no probe has touched
/// yet. Each probe draws one fresh normal vector, appends one reflector to
/// the probed side's chain, and answers from the basis pairs alone. The
/// budget is min(m, n) probes; past that the construction is undefined.
template <typename Scalar>
class GinibreOperator final : public ProbeOperator<Scalar> {
 public:
  using Real = real_t<Scalar>;

  GinibreOperator(Index m, Index n, Real sigma, RandomSource src,
                  FaultFlags faults = {})
      : m_(m),
        n_(n),
        sigma_(sigma),
        src_(std::move(src)),
        chain_left_(m >= 1 ? m : 1),
        chain_right_(n >= 1 ? n : 1),
        faults_(faults) {
    require(m >= 1 && n >= 1, "GinibreOperator: dims must be positive");
    require(sigma > Real(0), "GinibreOperator: sigma must be positive");
  }

  Index rows() const override { return m_; }
  Index cols() const override { return n_; }
  Real sigma() const { return sigma_; }

  Index remaining_probes() const override {
    return std::min(m_, n_) - (r_ + l_);
  }

  /// (right count, left count); the sum is the number of probes served.
  std::pair<Index, Index> probe_counts() const { return {r_, l_}; }

  Index right_chain_size() const { return chain_right_.size(); }
  Index left_chain_size() const { return chain_left_.size(); }

  Vec<Scalar> probe(const Vec<Scalar>& x, Side side) override {
    this->check_probe_input(x, side);
    if (remaining_probes() == 0) {
      throw BudgetExhausted("GinibreOperator: probe budget min(m, n) spent");
    }
    const bool first_probe = (r_ + l_ == 0);
    Vec<Scalar> y;
    if (side == Side::right) {
      ++r_;
      Vec<Scalar> g = src_.template normals<Scalar>(m_);
      Vec<Scalar> p = chain_right_.apply(x, Order::forward, Mode::plain);
      auto refl = make_reflector<Scalar>(p, r_ - 1, 0, faults_.sign_rule);
      if (!(faults_.skip_reflector && first_probe)) {
        chain_right_.append(std::move(refl));
      }
      g.head(l_).setZero();
      chain_left_.apply_in_place(g, Order::reverse, Mode::adjoint);
      Vec<Scalar> v = Vec<Scalar>::Zero(n_);
      v[r_ - 1] = Scalar(1);
      chain_right_.apply_in_place(v, Order::reverse, Mode::adjoint);
      us_.push_back(std::move(g));
      vs_.push_back(std::move(v));
      y = Vec<Scalar>::Zero(m_);
      for (std::size_t i = 0; i < us_.size(); ++i) {
        y += vs_[i].dot(x) * us_[i];
      }
    } else {
      ++l_;
      Vec<Scalar> g = src_.template normals<Scalar>(n_);
      Vec<Scalar> q = chain_left_.apply(x, Order::forward, Mode::plain);
      auto refl = make_reflector<Scalar>(q, l_ - 1, 0, faults_.sign_rule);
      if (!(faults_.skip_reflector && first_probe)) {
        chain_left_.append(std::move(refl));
      }
      g.head(r_).setZero();
      chain_right_.apply_in_place(g, Order::reverse, Mode::adjoint);
      Vec<Scalar> u = Vec<Scalar>::Zero(m_);
      u[l_ - 1] = Scalar(1);
      chain_left_.apply_in_place(u, Order::reverse, Mode::adjoint);
      us_.push_back(std::move(u));
      vs_.push_back(std::move(g));
      y = Vec<Scalar>::Zero(n_);
      for (std::size_t i = 0; i < us_.size(); ++i) {
        y += us_[i].dot(x) * vs_[i];
      }
    }
    y *= Scalar(sigma_);
    return y;
  }

 private:
  Index m_, n_;
  Real sigma_;
  RandomSource src_;
  ReflectorChain<Scalar> chain_left_;
  ReflectorChain<Scalar> chain_right_;
  std::vector<Vec<Scalar>> us_;  // length-m basis vectors, one per probe
  std::vector<Vec<Scalar>> vs_;  // length-n companions
  Index r_ = 0, l_ = 0;
  FaultFlags faults_;
};

}  // namespace lazymat
