#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "lazymat/random.hpp"
#include "lazymat/types.hpp"

namespace lazymat {

/// Traversal order for a chain of reflectors. `forward` applies the member
/// appended first first; `reverse` starts with the most recent member.
enum class Order { forward, reverse };

/// `plain` applies H, `adjoint` applies H^* (the transpose in the real case,
/// where the two coincide).
enum class Mode { plain, adjoint };

/// Pivot sign rule for real reflector construction. `stable` takes
/// sign(v1) in {+1, -1} with sign(0) = +1, so u = v + sign(v1)*||v||*e1
/// never cancels. `negative_at_zero` resolves the tie the other way,
/// sign(0) = -1; both choices produce a valid reflector with the same
/// mapping guarantees, and they differ only on the measure-zero event of
/// an exactly zero pivot, so the choice is contract-neutral (a property
/// test pins this down). `zero_when_negative` evaluates the indicator
/// 1{v1 >= 0} instead of a sign; any negative pivot then zeroes the
/// leading factor and the reflector annihilates its block. That rule is a
/// deliberately broken variant kept for the negative-control suites. None
/// of this affects complex construction, which carries a phase, not a
/// sign.
enum class SignRule { stable, negative_at_zero, zero_when_negative };

/// One generalized Householder reflector H_k(p): orthogonal (real) or
/// unitary (complex) on all of R^n / C^n, acting as the identity on the
/// first `offset` coordinates and as a rank-one update on the rest.
///
/// Stored as a reflection vector w over the active tail, a real
/// coefficient c, and a unit-modulus leading factor s, so that
///
///   (H x)[offset:] = s * (x[offset:] - c * <w, x[offset:]> * w),
///
/// with <.,.> conjugate-linear in the first slot. The adjoint only swaps
/// s for its conjugate. A reflector built from a vector whose active tail
/// is zero carries the identity flag and applies as the identity map.
template <typename Scalar>
class Reflector {
 public:
  using Real = real_t<Scalar>;

  Reflector(Index dim, Index offset, Vec<Scalar> w, Real c, Scalar s,
            bool is_identity)
      : dim_(dim),
        offset_(offset),
        w_(std::move(w)),
        c_(c),
        s_(s),
        identity_(is_identity) {}

  static Reflector identity(Index dim, Index offset) {
    return Reflector(dim, offset, Vec<Scalar>(), Real(0), Scalar(1), true);
  }

  Index dim() const { return dim_; }
  Index offset() const { return offset_; }
  bool is_identity() const { return identity_; }
  const Vec<Scalar>& reflection_vector() const { return w_; }

  void apply_in_place(Vec<Scalar>& x, Mode mode = Mode::plain) const {
    require(x.size() == dim_, "Reflector::apply: dimension mismatch");
    if (identity_) return;
    auto tail = x.tail(dim_ - offset_);
    const Scalar proj = w_.dot(tail);  // conjugates w in the complex case
    tail -= (Scalar(c_) * proj) * w_;
    Scalar lead = s_;
    if constexpr (is_complex_v<Scalar>) {
      if (mode == Mode::adjoint) lead = std::conj(lead);
    } else {
      (void)mode;  // real reflectors are self-adjoint
    }
    tail *= lead;
  }

  Vec<Scalar> apply(const Vec<Scalar>& x) const {
    Vec<Scalar> y = x;
    apply_in_place(y, Mode::plain);
    return y;
  }

  Vec<Scalar> apply_adjoint(const Vec<Scalar>& x) const {
    Vec<Scalar> y = x;
    apply_in_place(y, Mode::adjoint);
    return y;
  }

 private:
  Index dim_;
  Index offset_;
  Vec<Scalar> w_;
  Real c_;
  Scalar s_;
  bool identity_;
};

/// Build H_k(p) from the full-length vector p. `offset` counts the leading
/// coordinates the reflector leaves untouched (the paper-style subscript k
/// equals offset + 1). The active tail p[offset:] determines the
/// reflection; a tail with ||p[offset:]|| <= zero_tol * ||p|| yields the
/// identity reflector, and zero_tol = 0 demands an exactly zero tail.
///
/// Real case: u = v + sign(v1)*||v||*e1, H = -sign(v1)*(I - 2*u*u^T/u^T*u),
/// so H p lands on +||p[offset:]|| * e_{offset+1}. The stored vector is
/// u/||v||, which leaves the map unchanged and the arithmetic
/// scale-invariant.
/// Complex case: with v1/||v|| = r*e^{i theta},
/// H = (-e^{-i theta}) * [I - a a^* / (1+r)], a = v/||v|| + e^{i theta} e1,
/// which reduces to the real formula on real input.
template <typename Scalar>
Reflector<Scalar> make_reflector(const Vec<Scalar>& p, Index offset,
                                 real_t<Scalar> zero_tol = 0,
                                 SignRule rule = SignRule::stable) {
  using Real = real_t<Scalar>;
  const Index n = p.size();
  require(n >= 1, "make_reflector: empty vector");
  require(offset >= 0 && offset < n, "make_reflector: offset out of range");
  require(p.allFinite(), "make_reflector: non-finite entries");

  const auto tail = p.tail(n - offset);
  // One vectorized reduction on the common path; stableNorm's rescaling
  // loop only earns its keep when the squared sum leaves the normal range.
  const Real nrm2 = tail.squaredNorm();
  const Real nrm = (nrm2 >= std::numeric_limits<Real>::min() &&
                    nrm2 <= std::numeric_limits<Real>::max())
                       ? std::sqrt(nrm2)
                       : tail.stableNorm();
  if (nrm == Real(0) ||
      (zero_tol > Real(0) && nrm <= zero_tol * p.stableNorm())) {
    return Reflector<Scalar>::identity(n, offset);
  }

  if constexpr (is_complex_v<Scalar>) {
    const Scalar v1 = tail[0];
    const Real r = std::abs(v1) / nrm;
    // e^{i theta} with v1 = r * e^{i theta} * ||v||; zero pivot means r = 0
    // and the phase is immaterial, fixed to 1.
    const Scalar phase =
        (std::abs(v1) == Real(0)) ? Scalar(1) : Scalar(v1 / std::abs(v1));
    Vec<Scalar> a = tail / Scalar(nrm);
    a[0] += phase;
    const Real c = Real(1) / (Real(1) + r);
    const Scalar s = -std::conj(phase);
    return Reflector<Scalar>(n, offset, std::move(a), c, s, false);
  } else {
    const Scalar v1 = tail[0];
    Scalar sign = Scalar(1);
    switch (rule) {
      case SignRule::stable:
        sign = (v1 >= Scalar(0)) ? Scalar(1) : Scalar(-1);
        break;
      case SignRule::negative_at_zero:
        sign = (v1 > Scalar(0)) ? Scalar(1) : Scalar(-1);
        break;
      case SignRule::zero_when_negative:
        sign = (v1 >= Scalar(0)) ? Scalar(1) : Scalar(0);
        break;
    }
    // Store u/||tail|| rather than u itself: ||a||^2 stays in [2, 4] no
    // matter how extreme the input scale, where u's squared norm could
    // overflow (and 2/inf = 0 would silently disable the reflection).
    Vec<Scalar> a = tail / Scalar(nrm);
    a[0] += sign;
    const Real c = Real(2) / a.squaredNorm();
    return Reflector<Scalar>(n, offset, std::move(a), c, -sign, false);
  }
}

/// True iff applying the reflector to the vector it was built from leaves
/// only the coordinates up to and including its pivot: entries past
/// offset + 1 must not exceed 1e-10 * ||p||.
template <typename Scalar>
bool zero_tail_check(const Reflector<Scalar>& refl, const Vec<Scalar>& p) {
  const Vec<Scalar> y = refl.apply(p);
  const Index first = refl.offset() + 1;
  if (first >= y.size()) return true;
  return y.tail(y.size() - first).norm() <= 1e-10 * p.norm();
}

/// Ordered product of reflectors over a fixed ambient dimension. The chain
/// grows by one member per probe, which is what the complexity accounting
/// of the lazy operators reads off.
template <typename Scalar>
class ReflectorChain {
 public:
  explicit ReflectorChain(Index dim) : dim_(dim) {
    require(dim >= 1, "ReflectorChain: dim must be >= 1");
  }

  Index dim() const { return dim_; }
  Index size() const { return static_cast<Index>(members_.size()); }
  bool empty() const { return members_.empty(); }
  const Reflector<Scalar>& operator[](Index i) const {
    return members_[static_cast<std::size_t>(i)];
  }

  void append(Reflector<Scalar> refl) {
    require(refl.dim() == dim_, "ReflectorChain::append: dimension mismatch");
    members_.push_back(std::move(refl));
  }

  void apply_in_place(Vec<Scalar>& x, Order order, Mode mode) const {
    require(x.size() == dim_, "ReflectorChain::apply: dimension mismatch");
    if (order == Order::forward) {
      for (const auto& refl : members_) refl.apply_in_place(x, mode);
    } else {
      for (auto it = members_.rbegin(); it != members_.rend(); ++it) {
        it->apply_in_place(x, mode);
      }
    }
  }

  Vec<Scalar> apply(const Vec<Scalar>& x, Order order, Mode mode) const {
    Vec<Scalar> y = x;
    apply_in_place(y, order, mode);
    return y;
  }

 private:
  Index dim_;
  std::vector<Reflector<Scalar>> members_;
};

}  // namespace lazymat
