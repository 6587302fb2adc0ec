#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lazymat {

using Index = Eigen::Index;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecX = Vec<double>;
using VecXc = Vec<std::complex<double>>;
using MatX = Mat<double>;
using MatXc = Mat<std::complex<double>>;

/// Which side of the implicit matrix a probe touches: right is y = Q x,
/// left is y = Q^T x (Q^* x in the complex case).
enum class Side { right, left };

enum class Field { real, complex };

/// Thrown when an operator has revealed as much randomness as its
/// construction allows and another probe is requested.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a request would materialize a matrix past the configured
/// dense-oracle memory cap.
class ResourceCapExceeded : public std::runtime_error {
 public:
  explicit ResourceCapExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

namespace detail {

template <typename Scalar>
struct scalar_traits {
  using real_type = Scalar;
  static constexpr bool is_complex = false;
};

template <typename Real>
struct scalar_traits<std::complex<Real>> {
  using real_type = Real;
  static constexpr bool is_complex = true;
};

}  // namespace detail

template <typename Scalar>
inline constexpr bool is_complex_v = detail::scalar_traits<Scalar>::is_complex;

template <typename Scalar>
using real_t = typename detail::scalar_traits<Scalar>::real_type;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace lazymat
