#pragma once

// Eigenvalues and eigenvectors of real nonsymmetric tridiagonal matrices.
//
// When every off-diagonal product sup[d]*sub[d] is positive the matrix is
// diagonally similar to a symmetric tridiagonal one, the spectrum is real and
// is found by Sturm-sequence bisection. Otherwise a Francis double-shift QR
// sweep runs on the (already Hessenberg) dense matrix.

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "ptlat/errors.hpp"
#include "ptlat/lattice.hpp"

namespace ptlat {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolReal = 1e-9;

struct Spectrum {
  std::vector<Complex> eigenvalues;  // sorted by real part, then imaginary part
  std::vector<bool> real_flags;      // |Im| < tol_real
  double tol_real = kDefaultTolReal;

  std::size_t size() const { return eigenvalues.size(); }
  std::size_t real_count() const { return static_cast<std::size_t>(std::count(real_flags.begin(), real_flags.end(), true)); }
  bool all_real() const { return real_count() == size(); }
};

struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // strictly positive

  std::size_t size() const { return diag.size(); }
};

struct EigenPair {
  double eigenvalue = 0.0;
  std::vector<double> right_vector;  // H x = E x
  std::vector<double> left_vector;   // H^T y = E y
};

/// det(H - E I) by the three-term recurrence
/// D_k = (d_k - E) D_{k-1} - sup[k-1] sub[k-1] D_{k-2}.
inline Complex charpoly_eval(const LatticeHamiltonian<double>& h, Complex e) {
  Complex prev = 1.0;
  Complex cur = Complex(h.diag[0]) - e;
  for (std::size_t k = 1; k < h.size(); ++k) {
    const Complex next = (Complex(h.diag[k]) - e) * cur - h.sup[k - 1] * h.sub[k - 1] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Value and derivative of det(H - E I) at real E.
inline std::pair<double, double> charpoly_with_derivative(const LatticeHamiltonian<double>& h, double e) {
  double p0 = 1.0, dp0 = 0.0;
  double p1 = h.diag[0] - e, dp1 = -1.0;
  for (std::size_t k = 1; k < h.size(); ++k) {
    const double b = h.sup[k - 1] * h.sub[k - 1];
    const double a = h.diag[k] - e;
    const double p2 = a * p1 - b * p0;
    const double dp2 = -p1 + a * dp1 - b * dp0;
    p0 = p1;
    dp0 = dp1;
    p1 = p2;
    dp1 = dp2;
  }
  return {p1, dp1};
}

inline bool is_symmetrizable(const LatticeHamiltonian<double>& h) {
  for (std::size_t d = 0; d + 1 < h.size(); ++d)
    if (!(h.sup[d] * h.sub[d] > 0.0)) return false;
  return true;
}

/// Symmetric tridiagonal matrix with offdiag sqrt(sup*sub), similar to h.
inline SymmetricTridiagonal symmetrize(const LatticeHamiltonian<double>& h) {
  SymmetricTridiagonal s;
  s.diag = h.diag;
  s.offdiag.resize(h.size() > 0 ? h.size() - 1 : 0);
  for (std::size_t d = 0; d + 1 < h.size(); ++d) {
    const double prod = h.sup[d] * h.sub[d];
    if (!(prod > 0.0)) throw NotSymmetrizable(d + 1);
    s.offdiag[d] = std::sqrt(prod);
  }
  return s;
}

/// Number of eigenvalues strictly below x (Sturm sign count of the LDL^T pivots).
inline std::size_t sturm_count(const SymmetricTridiagonal& s, double x) {
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = s.diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (i + 1 == s.size()) break;
    q = s.diag[i + 1] - x - s.offdiag[i] * s.offdiag[i] / q;
  }
  return count;
}

/// Gershgorin interval containing every eigenvalue.
inline std::pair<double, double> gershgorin_bounds(const SymmetricTridiagonal& s) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(s.offdiag[i - 1]);
    if (i + 1 < s.size()) r += std::abs(s.offdiag[i]);
    lo = std::min(lo, s.diag[i] - r);
    hi = std::max(hi, s.diag[i] + r);
  }
  const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return {lo - pad, hi + pad};
}

/// All eigenvalues, ascending, each bisected until its bracket stops shrinking.
inline std::vector<double> sturm_eigenvalues(const SymmetricTridiagonal& s) {
  const std::size_t n = s.size();
  const auto [glo, ghi] = gershgorin_bounds(s);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k-th eigenvalue: smallest x with count(x) > k.
    double lo = glo, hi = ghi;
    if (k > 0) lo = std::max(lo, out[k - 1] - 1e-300);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(s, mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    out[k] = 0.5 * (lo + hi);
  }
  return out;
}

namespace detail {

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace detail

/// Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.
///
/// At most 100*n sweeps in total; an exceptional shift is used after every
/// 10 sweeps without deflation.
inline std::vector<Complex> hessenberg_qr_eigenvalues(Eigen::MatrixXd m) {
  const int n = static_cast<int>(m.rows());
  std::vector<Complex> w(static_cast<std::size_t>(n));
  if (n == 0) return w;
  // 1-based accessor keeps the index arithmetic of the classical algorithm readable.
  auto a = [&m](int i, int j) -> double& { return m(i - 1, j - 1); };

  const std::size_t max_sweeps = 100 * static_cast<std::size_t>(n);
  std::size_t sweeps = 0;

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));

  int nn = n;
  double t = 0.0;
  double p = 0, q = 0, r = 0, s = 0, x = 0, y = 0, z = 0, ww = 0;
  while (nn >= 1) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 2; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {
        w[static_cast<std::size_t>(nn - 1)] = Complex(x + t, 0.0);
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        ww = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + ww;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + detail::sign_of(z, p);
            double e1 = x + z;
            double e2 = e1;
            if (z != 0.0) e2 = x - ww / z;
            w[static_cast<std::size_t>(nn - 2)] = Complex(e1, 0.0);
            w[static_cast<std::size_t>(nn - 1)] = Complex(e2, 0.0);
          } else {
            w[static_cast<std::size_t>(nn - 2)] = Complex(x + p, -z);
            w[static_cast<std::size_t>(nn - 1)] = Complex(x + p, z);
          }
          nn -= 2;
        } else {
          if (++sweeps > max_sweeps) throw NoConvergence(max_sweeps);
          if (its > 0 && its % 10 == 0) {
            t += x;
            for (int i = 1; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            ww = -0.4375 * s * s;
          }
          ++its;
          int mm = nn - 2;
          for (; mm >= l; --mm) {
            z = a(mm, mm);
            r = x - z;
            s = y - z;
            p = (r * s - ww) / a(mm + 1, mm) + a(mm, mm + 1);
            q = a(mm + 1, mm + 1) - z - r - s;
            r = a(mm + 2, mm + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (mm == l) break;
            const double u = std::abs(a(mm, mm - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(mm - 1, mm - 1)) + std::abs(z) + std::abs(a(mm + 1, mm + 1)));
            if (u + v == v) break;
          }
          for (int i = mm + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != mm + 2) a(i, i - 3) = 0.0;
          }
          for (int k = mm; k <= nn - 1; ++k) {
            if (k != mm) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = detail::sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == mm) {
                if (l != mm) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  return w;
}

namespace detail {

inline void sort_spectrum(std::vector<Complex>& ev) {
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

/// Makes complex eigenvalues exact conjugate pairs: each value with Im > 0 is
/// matched with the nearest unmatched value with Im < 0 and both are replaced
/// by their average.
inline void pair_conjugates(std::vector<Complex>& ev) {
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i] || ev[i].imag() <= 0.0) continue;
    std::size_t best = ev.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (used[j] || j == i || ev[j].imag() >= 0.0) continue;
      const double d = std::abs(ev[j] - std::conj(ev[i]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == ev.size()) continue;
    const double re = 0.5 * (ev[i].real() + ev[best].real());
    const double im = 0.5 * (ev[i].imag() - ev[best].imag());
    ev[i] = Complex(re, im);
    ev[best] = Complex(re, -im);
    used[i] = used[best] = true;
  }
}

inline Spectrum make_spectrum(std::vector<Complex> ev, double tol_real) {
  pair_conjugates(ev);
  sort_spectrum(ev);
  Spectrum s;
  s.tol_real = tol_real;
  s.real_flags.reserve(ev.size());
  for (const auto& e : ev) s.real_flags.push_back(std::abs(e.imag()) < tol_real);
  s.eigenvalues = std::move(ev);
  return s;
}

}  // namespace detail

/// Spectrum through the general QR path regardless of symmetrizability.
inline Spectrum eigenvalues_qr(const LatticeHamiltonian<double>& h, double tol_real = kDefaultTolReal) {
  return detail::make_spectrum(hessenberg_qr_eigenvalues(to_dense(h)), tol_real);
}

/// Spectrum through Sturm bisection; requires a symmetrizable matrix.
inline Spectrum eigenvalues_sturm(const LatticeHamiltonian<double>& h, double tol_real = kDefaultTolReal) {
  const auto values = sturm_eigenvalues(symmetrize(h));
  std::vector<Complex> ev(values.begin(), values.end());
  return detail::make_spectrum(std::move(ev), tol_real);
}

inline Spectrum eigenvalues(const LatticeHamiltonian<double>& h, double tol_real = kDefaultTolReal) {
  if (is_symmetrizable(h)) return eigenvalues_sturm(h, tol_real);
  return eigenvalues_qr(h, tol_real);
}

inline std::size_t real_count(const LatticeHamiltonian<double>& h, double tol_real = kDefaultTolReal) {
  if (!(tol_real > 0.0)) throw std::invalid_argument("tol_real must be positive");
  return eigenvalues(h, tol_real).real_count();
}

namespace detail {

inline std::vector<double> normalize_max_component(const Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  const double vmax = v.cwiseAbs().maxCoeff();
  // First component within a relative 1e-9 of the maximum magnitude.
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= (1.0 - 1e-9) * vmax) {
      imax = i;
      break;
    }
  }
  const Eigen::VectorXd u = v / v(imax);
  return std::vector<double>(u.data(), u.data() + u.size());
}

/// Inverse iteration on the dense shifted matrix.
inline Eigen::VectorXd inverse_iteration(const Eigen::MatrixXd& a, double e) {
  const auto n = a.rows();
  const double shift = e + 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(e));
  Eigen::MatrixXd shifted = a;
  shifted.diagonal().array() -= shift;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.01 * static_cast<double>(i % 7);
  x.normalize();
  for (int it = 0; it < 4; ++it) {
    x = lu.solve(x);
    x.normalize();
  }
  return x;
}

}  // namespace detail

/// Right and left eigenvectors for a simple real eigenvalue E.
///
/// E must lie within a relative 1e-8 (Newton step of the characteristic
/// polynomial) of a real eigenvalue that is separated from the rest of the
/// spectrum by more than 1e-8. Vectors are scaled so that the first
/// largest-magnitude component equals +1.
inline EigenPair eigenpair(const LatticeHamiltonian<double>& h, double e) {
  const double scale = std::max(1.0, std::abs(e));
  const auto [p, dp] = charpoly_with_derivative(h, e);
  if (!(std::abs(p) <= 1e-8 * scale * std::abs(dp)))
    throw NotAnEigenvalue("E = " + std::to_string(e) + " is not an eigenvalue");

  const Spectrum spec = eigenvalues(h);
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double d = std::abs(spec.eigenvalues[i] - Complex(e));
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  if (!spec.real_flags[nearest] || best > 1e-8 * scale)
    throw NotAnEigenvalue("E = " + std::to_string(e) + " is not a real eigenvalue");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i != nearest && std::abs(spec.eigenvalues[i] - spec.eigenvalues[nearest]) <= 1e-8 * scale)
      throw DegenerateEigenvalue("eigenvalue " + std::to_string(e) + " is not simple");
  }

  const double refined = spec.eigenvalues[nearest].real();
  const Eigen::MatrixXd dense = to_dense(h);
  EigenPair pair;
  pair.eigenvalue = refined;
  pair.right_vector = detail::normalize_max_component(detail::inverse_iteration(dense, refined));
  pair.left_vector = detail::normalize_max_component(detail::inverse_iteration(dense.transpose(), refined));
  return pair;
}

}  // namespace ptlat
