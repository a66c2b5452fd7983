#pragma once

// Discrete PT-symmetric square-well Hamiltonians with boundary-localized
// non-Hermiticity of depth K.
//
// The couplings p_1..p_K act on the first K bonds of the chain with the
// alternating convention s_d = (-1)^(d+1) p_d:
//
//   H(d, d+1) = -1 - s_d,   H(d+1, d) = -1 + s_d      (1-based, d <= K)
//
// so the top-left corner reads (1,2) = -1-lambda, (2,3) = -1+mu,
// (3,4) = -1-nu. The bottom rows are the mirror image, H(i,j) = H(n+1-i, n+1-j),
// the diagonal is constant 2 and all interior bonds are -1. Depths beyond
// three extrapolate the alternation; no displayed model exists for them.

#include <Eigen/Core>

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <utility>
#include <vector>

#include "ptlat/errors.hpp"
#include "ptlat/rational.hpp"

namespace ptlat {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Boundary couplings (lambda, mu, nu, ...). Depth K = number of couplings.
template <class T = double>
class CouplingVector {
 public:
  explicit CouplingVector(std::vector<T> params) : params_(std::move(params)) {
    if (params_.empty()) throw std::invalid_argument("coupling depth must be at least 1");
    for (const auto& p : params_)
      if (!is_finite_value(p)) throw NonFinite("coupling parameters must be finite");
  }

  std::size_t depth() const { return params_.size(); }
  const std::vector<T>& params() const { return params_; }

  /// p_d, 1-based.
  const T& param(std::size_t d) const { return params_.at(d - 1); }

  /// s_d = (-1)^(d+1) p_d, 1-based.
  T signed_coupling(std::size_t d) const { return d % 2 == 1 ? param(d) : T(-param(d)); }

 private:
  std::vector<T> params_;
};

/// Real tridiagonal matrix stored as three diagonals.
template <class T = double>
struct LatticeHamiltonian {
  std::vector<T> diag;  // H(i,i)
  std::vector<T> sup;   // H(i,i+1)
  std::vector<T> sub;   // H(i+1,i)

  std::size_t size() const { return diag.size(); }

  /// Dense element access, 0-based.
  T operator()(std::size_t i, std::size_t j) const {
    if (i == j) return diag[i];
    if (j == i + 1) return sup[i];
    if (i == j + 1) return sub[j];
    return T(0);
  }

  friend bool operator==(const LatticeHamiltonian&, const LatticeHamiltonian&) = default;
};

/// Order-reversal permutation on n sites.
struct ParityMatrix {
  std::size_t n = 0;

  std::size_t image(std::size_t i) const { return n - 1 - i; }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(image(i))) = 1.0;
    return p;
  }
};

inline ParityMatrix parity(std::size_t n) {
  if (n < 1) throw std::invalid_argument("parity needs n >= 1");
  return ParityMatrix{n};
}

template <class T>
LatticeHamiltonian<T> build_hamiltonian(std::size_t n, const CouplingVector<T>& c) {
  const std::size_t depth = c.depth();
  if (n < 2 || 2 * depth + 1 > n) throw DepthTooLarge(depth, n);

  LatticeHamiltonian<T> h;
  h.diag.assign(n, T(2));
  h.sup.assign(n - 1, T(-1));
  h.sub.assign(n - 1, T(-1));
  for (std::size_t d = 1; d <= depth; ++d) {
    const T s = c.signed_coupling(d);
    h.sup[d - 1] = T(-1) - s;
    h.sub[d - 1] = T(-1) + s;
    // Mirror: H(n-d, n+1-d) = H(d+1, d) and H(n+1-d, n-d) = H(d, d+1).
    h.sup[n - 1 - d] = h.sub[d - 1];
    h.sub[n - 1 - d] = h.sup[d - 1];
  }
  return h;
}

/// Transpose; the couplings are real so this is the adjoint.
template <class T>
LatticeHamiltonian<T> adjoint(const LatticeHamiltonian<T>& h) {
  return LatticeHamiltonian<T>{h.diag, h.sub, h.sup};
}

/// Exact elementwise test of P*H*P == H.
template <class T>
bool is_pt_symmetric(const LatticeHamiltonian<T>& h) {
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(h.diag[i] == h.diag[n - 1 - i])) return false;
  // (P H P)(i,i+1) = H(n-1-i, n-2-i) = sub[n-2-i]
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(h.sup[i] == h.sub[n - 2 - i])) return false;
  return true;
}

template <class T>
Mat<T> to_dense(const LatticeHamiltonian<T>& h) {
  const auto n = static_cast<Eigen::Index>(h.size());
  Mat<T> m = Mat<T>::Constant(n, n, T(0));
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = h.diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = h.sup[i];
    m(i + 1, i) = h.sub[i];
  }
  return m;
}

inline LatticeHamiltonian<double> to_double(const LatticeHamiltonian<Rational>& h) {
  LatticeHamiltonian<double> out;
  for (const auto& x : h.diag) out.diag.push_back(to_float(x));
  for (const auto& x : h.sup) out.sup.push_back(to_float(x));
  for (const auto& x : h.sub) out.sub.push_back(to_float(x));
  return out;
}

/// Row-major, tab-separated dense dump, one row per line.
inline void write_dense_tsv(std::ostream& os, const Eigen::MatrixXd& m) {
  const auto old_precision = os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << '\t';
      os << m(i, j);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace ptlat
