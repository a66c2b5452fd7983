#pragma once

// Solutions of the Dieudonne (quasi-Hermiticity) equation H^T P = P H.
//
// Three independent routes are provided:
//   * sylvester_kernel: SVD nullspace of the linear map X -> H^T X - X H
//     restricted to symmetric X;
//   * rank_one_basis: outer products y y^T of the left eigenvectors;
//   * banded_pseudometric: the unique solution supported on a staircase
//     pattern (exact over Rational, or in double precision).

#include <Eigen/Core>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptlat/errors.hpp"
#include "ptlat/exactlin.hpp"
#include "ptlat/lattice.hpp"
#include "ptlat/spectra.hpp"

namespace ptlat {

enum class BasisSource { dense_kernel, rank_one, banded };

inline std::string to_string(BasisSource s) {
  switch (s) {
    case BasisSource::dense_kernel: return "dense-kernel";
    case BasisSource::rank_one: return "rank-one";
    case BasisSource::banded: return "banded";
  }
  return "unknown";
}

/// Symmetric solution of the Dieudonne equation.
template <class T = double>
struct Pseudometric {
  std::size_t n = 0;
  std::optional<std::size_t> band;  // band index k when built from the banded ansatz
  Mat<T> entries;
};

struct PseudometricBasis {
  std::size_t n = 0;
  std::vector<Pseudometric<double>> members;
  BasisSource source = BasisSource::dense_kernel;
};

/// Scaling applied to eigenvectors before forming rank-one members.
enum class VectorScaling {
  max_component,  // first largest-magnitude component equals +1
  unit_norm       // Euclidean norm 1
};

/// H^T P - P H, evaluated through the tridiagonal structure (exact for Rational).
template <class T>
Mat<T> dieudonne_defect(const LatticeHamiltonian<T>& h, const Mat<T>& p) {
  const auto n = static_cast<Eigen::Index>(h.size());
  if (p.rows() != n || p.cols() != n) throw DimensionMismatch("pseudometric and Hamiltonian sizes differ");
  Mat<T> out = Mat<T>::Constant(n, n, T(0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // (H^T P)(i,j) = sum_m H(m,i) P(m,j);  (P H)(i,j) = sum_m P(i,m) H(m,j)
      T acc = h.diag[i] * p(i, j) - p(i, j) * h.diag[j];
      if (i > 0) acc += h.sup[i - 1] * p(i - 1, j);      // H(i-1,i)
      if (i + 1 < n) acc += h.sub[i] * p(i + 1, j);      // H(i+1,i)
      if (j > 0) acc -= p(i, j - 1) * h.sup[j - 1];      // H(j-1,j)
      if (j + 1 < n) acc -= p(i, j + 1) * h.sub[j];      // H(j+1,j)
      out(i, j) = acc;
    }
  }
  return out;
}

/// max |(H^T P - P H)_ij|.
template <class T>
T residual(const LatticeHamiltonian<T>& h, const Mat<T>& p) {
  const Mat<T> d = dieudonne_defect(h, p);
  T best = T(0);
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      using std::abs;
      const T a = abs(d(i, j));
      if (best < a) best = a;
    }
  return best;
}

template <class T>
T residual(const LatticeHamiltonian<T>& h, const Pseudometric<T>& p) {
  return residual(h, p.entries);
}

namespace detail {

/// Minimal real gap of a fully real spectrum; throws DegenerateSpectrum if
/// the spectrum is complex or the gap is at most `min_gap`.
inline std::vector<double> real_simple_spectrum(const LatticeHamiltonian<double>& h, double min_gap = 1e-8) {
  const Spectrum spec = eigenvalues(h);
  if (!spec.all_real()) throw DegenerateSpectrum("spectrum is not real");
  std::vector<double> ev;
  for (const auto& e : spec.eigenvalues) ev.push_back(e.real());
  for (std::size_t i = 1; i < ev.size(); ++i)
    if (ev[i] - ev[i - 1] <= min_gap) throw DegenerateSpectrum("eigenvalues " + std::to_string(ev[i - 1]) + " and " + std::to_string(ev[i]) + " collide");
  return ev;
}

/// Packed coordinates of a symmetric matrix; off-diagonal entries carry a
/// factor sqrt(2) so that the Euclidean norm equals the Frobenius norm.
inline Eigen::MatrixXd unpack_symmetric(const Eigen::VectorXd& y, Eigen::Index n) {
  Eigen::MatrixXd x(n, n);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = y(idx++);
      if (i == j)
        x(i, i) = v;
      else
        x(i, j) = x(j, i) = v * r;
    }
  return x;
}

inline Eigen::VectorXd frobenius_vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

}  // namespace detail

/// Orthonormal (Frobenius) basis of all symmetric solutions of H^T X = X H.
inline PseudometricBasis sylvester_kernel(const LatticeHamiltonian<double>& h) {
  detail::real_simple_spectrum(h);
  const auto n = static_cast<Eigen::Index>(h.size());
  const Eigen::Index unknowns = n * (n + 1) / 2;
  const Eigen::Index equations = n * (n - 1) / 2;  // the image is antisymmetric

  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(equations, 1), unknowns);
  for (Eigen::Index c = 0; c < unknowns; ++c) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(unknowns);
    e(c) = 1.0;
    const Eigen::MatrixXd d = dieudonne_defect(h, detail::unpack_symmetric(e, n));
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) map(row++, c) = d(i, j);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  const Eigen::Index nullity = unknowns - rank;
  if (nullity != n) throw UnexpectedKernelDimension(static_cast<std::size_t>(nullity), static_cast<std::size_t>(n));

  PseudometricBasis basis;
  basis.n = h.size();
  basis.source = BasisSource::dense_kernel;
  for (Eigen::Index k = rank; k < unknowns; ++k) {
    Pseudometric<double> p;
    p.n = h.size();
    p.entries = detail::unpack_symmetric(svd.matrixV().col(k), n);
    basis.members.push_back(std::move(p));
  }
  return basis;
}

/// Members y_k y_k^T built from the left eigenvectors, in ascending eigenvalue order.
inline PseudometricBasis rank_one_basis(const LatticeHamiltonian<double>& h,
                                        VectorScaling scaling = VectorScaling::max_component) {
  const auto ev = detail::real_simple_spectrum(h);
  PseudometricBasis basis;
  basis.n = h.size();
  basis.source = BasisSource::rank_one;
  for (double e : ev) {
    const EigenPair pair = eigenpair(h, e);
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(pair.left_vector.data(), static_cast<Eigen::Index>(pair.left_vector.size()));
    if (scaling == VectorScaling::unit_norm) y.normalize();
    Pseudometric<double> p;
    p.n = h.size();
    p.entries = y * y.transpose();
    basis.members.push_back(std::move(p));
  }
  return basis;
}

/// Largest distance of a member of one basis from the span of the other,
/// with every member scaled to unit Frobenius norm; symmetric in (a, b).
inline double span_projection_residual(const PseudometricBasis& a, const PseudometricBasis& b) {
  auto one_way = [](const PseudometricBasis& from, const PseudometricBasis& onto) {
    if (onto.members.empty()) return from.members.empty() ? 0.0 : 1.0;
    const Eigen::Index len = onto.members.front().entries.size();
    Eigen::MatrixXd cols(len, static_cast<Eigen::Index>(onto.members.size()));
    for (std::size_t k = 0; k < onto.members.size(); ++k)
      cols.col(static_cast<Eigen::Index>(k)) = detail::frobenius_vec(onto.members[k].entries).normalized();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(cols);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(len, cols.cols());
    double worst = 0.0;
    for (const auto& m : from.members) {
      const Eigen::VectorXd v = detail::frobenius_vec(m.entries).normalized();
      worst = std::max(worst, (v - q * (q.transpose() * v)).norm());
    }
    return worst;
  };
  if (a.n != b.n) throw DimensionMismatch("bases act on different dimensions");
  return std::max(one_way(a, b), one_way(b, a));
}

/// 0-based (row, col) position.
using Position = std::pair<std::size_t, std::size_t>;

/// Staircase support of the k-th banded pseudometric (1-based conditions):
///   |i-j| <= k-1,  |i+j-(n+1)| <= n-k,  i+j = k+1 (mod 2).
inline bool in_band_support(std::size_t n, std::size_t k, std::size_t i1, std::size_t j1) {
  const long i = static_cast<long>(i1), j = static_cast<long>(j1), nn = static_cast<long>(n), kk = static_cast<long>(k);
  return std::labs(i - j) <= kk - 1 && std::labs(i + j - (nn + 1)) <= nn - kk && ((i + j - (kk + 1)) % 2 + 2) % 2 == 0;
}

/// Support positions in row-major order (0-based).
inline std::vector<Position> band_support(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("band index must satisfy 1 <= k <= n");
  std::vector<Position> out;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (in_band_support(n, k, i, j)) out.emplace_back(i - 1, j - 1);
  return out;
}

/// Support position closest to the matrix centre; ties go to the smaller row, then column.
inline Position band_pivot(std::size_t n, std::size_t k) {
  const auto support = band_support(n, k);
  // Twice the squared distance from ((n-1)/2, (n-1)/2), kept integral.
  auto dist = [n](const Position& p) {
    const long di = 2 * static_cast<long>(p.first) - static_cast<long>(n - 1);
    const long dj = 2 * static_cast<long>(p.second) - static_cast<long>(n - 1);
    return di * di + dj * dj;
  };
  Position best = support.front();
  for (const auto& p : support)
    if (dist(p) < dist(best)) best = p;  // row-major scan keeps the first on ties
  return best;
}

namespace detail {

inline std::vector<Eigen::VectorXd> kernel_basis(const Eigen::MatrixXd& a) {
  std::vector<Eigen::VectorXd> out;
  if (a.rows() == 0) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.push_back(Eigen::VectorXd::Unit(a.cols(), c));
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  for (Eigen::Index k = rank; k < a.cols(); ++k) out.push_back(svd.matrixV().col(k));
  return out;
}

inline std::vector<RationalVector> kernel_basis(const RationalMatrix& a) { return nullspace_exact(a); }

template <class T>
bool is_zero_value(const T& x) {
  return x == T(0);
}

}  // namespace detail

/// The Dieudonne solution supported on the k-th staircase, scaled so the
/// entry at band_pivot(n, k) equals 1.
///
/// Unknowns are the support entries with i <= j; symmetry is imposed,
/// centrosymmetry is not and comes out of the solve.
template <class T>
Pseudometric<T> banded_pseudometric(const LatticeHamiltonian<T>& h, std::size_t k) {
  const std::size_t n = h.size();
  const auto support = band_support(n, k);

  std::vector<std::vector<long>> index(n, std::vector<long>(n, -1));
  long unknowns = 0;
  for (const auto& [i, j] : support)
    if (i <= j) index[i][j] = unknowns++;
  for (const auto& [i, j] : support)
    if (i > j) index[i][j] = index[j][i];

  // One equation per entry (a, b), a < b, of the antisymmetric defect.
  std::vector<std::vector<std::pair<long, T>>> rows;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<std::pair<long, T>> row;
      auto add = [&](std::size_t r, std::size_t c, const T& coef) {
        const long u = index[r][c];
        if (u < 0 || detail::is_zero_value(coef)) return;
        for (auto& [uu, cc] : row)
          if (uu == u) {
            cc += coef;
            return;
          }
        row.emplace_back(u, coef);
      };
      // (H^T P)(a,b) = sum_m H(m,a) P(m,b)
      add(a, b, h.diag[a]);
      if (a > 0) add(a - 1, b, h.sup[a - 1]);
      if (a + 1 < n) add(a + 1, b, h.sub[a]);
      // -(P H)(a,b) = -sum_m P(a,m) H(m,b)
      add(a, b, T(-h.diag[b]));
      if (b > 0) add(a, b - 1, T(-h.sup[b - 1]));
      if (b + 1 < n) add(a, b + 1, T(-h.sub[b]));
      std::erase_if(row, [](const auto& e) { return detail::is_zero_value(e.second); });
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }

  Mat<T> system = Mat<T>::Constant(static_cast<Eigen::Index>(rows.size()), unknowns, T(0));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [u, c] : rows[r]) system(static_cast<Eigen::Index>(r), u) = c;

  const auto kernel = detail::kernel_basis(system);
  if (kernel.size() != 1) throw AnsatzKernelNotOneDimensional(kernel.size());
  const auto& v = kernel.front();

  const auto [pi, pj] = band_pivot(n, k);
  const T pivot = v(index[pi][pj]);
  if constexpr (std::is_same_v<T, double>) {
    if (std::abs(pivot) <= 1e-12 * v.cwiseAbs().maxCoeff())
      throw DegenerateParameters("normalization entry of the banded solution vanishes");
  } else {
    if (detail::is_zero_value(pivot)) throw DegenerateParameters("normalization entry of the banded solution vanishes");
  }

  Pseudometric<T> p;
  p.n = n;
  p.band = k;
  p.entries = Mat<T>::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), T(0));
  for (const auto& [i, j] : support) p.entries(i, j) = T(v(index[i][j]) / pivot);
  return p;
}

/// All n banded members k = 1..n, double precision.
inline PseudometricBasis banded_basis(const LatticeHamiltonian<double>& h) {
  PseudometricBasis basis;
  basis.n = h.size();
  basis.source = BasisSource::banded;
  for (std::size_t k = 1; k <= h.size(); ++k) basis.members.push_back(banded_pseudometric(h, k));
  return basis;
}

template <class T>
bool is_symmetric(const Mat<T>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (!(m(i, j) == m(j, i))) return false;
  return true;
}

template <class T>
bool is_centrosymmetric(const Mat<T>& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(m(i, j) == m(n - 1 - i, n - 1 - j))) return false;
  return true;
}

}  // namespace ptlat
