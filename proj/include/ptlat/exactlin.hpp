#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <utility>
#include <vector>

#include "ptlat/errors.hpp"
#include "ptlat/rational.hpp"

namespace ptlat {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using IntegerRows = std::vector<std::vector<mpz_class>>;

/// Row echelon form produced by fraction-free elimination.
struct EchelonForm {
  IntegerRows rows;
  std::vector<std::size_t> pivot_cols;  // pivot column of echelon row i
  int swap_sign = 1;                    // (-1)^(number of row swaps)
};

/// Scales each row by the lcm of its denominators so every entry is an integer.
/// Row scaling leaves kernels and solution sets unchanged.
inline IntegerRows integer_rows(const RationalMatrix& a) {
  IntegerRows out(static_cast<std::size_t>(a.rows()),
                  std::vector<mpz_class>(static_cast<std::size_t>(a.cols())));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    mpz_class l = 1;
    for (Eigen::Index j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).denominator().get_mpz_t());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const mpq_class& q = a(i, j).value();
      out[i][j] = q.get_num() * (l / q.get_den());
    }
  }
  return out;
}

/// Bareiss fraction-free elimination to row echelon form.
///
/// Every update divides exactly by the previous pivot; a non-exact division
/// would break the determinant-divisibility property and throws logic_error.
inline EchelonForm bareiss_echelon(IntegerRows a) {
  EchelonForm form;
  const std::size_t m = a.size();
  const std::size_t cols = m == 0 ? 0 : a.front().size();
  mpz_class prev = 1;
  mpz_class t;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      form.swap_sign = -form.swap_sign;
    }
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        if (!mpz_divisible_p(t.get_mpz_t(), prev.get_mpz_t()))
          throw std::logic_error("Bareiss step produced a non-exact division");
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    form.pivot_cols.push_back(c);
    ++r;
  }
  form.rows = std::move(a);
  return form;
}

/// Exact kernel basis of `a`. One vector per free column; empty for a trivial kernel.
inline std::vector<RationalVector> nullspace_exact(const RationalMatrix& a) {
  const auto cols = static_cast<std::size_t>(a.cols());
  const EchelonForm form = bareiss_echelon(integer_rows(a));
  const std::size_t rank = form.pivot_cols.size();

  std::vector<bool> is_pivot(cols, false);
  for (auto c : form.pivot_cols) is_pivot[c] = true;

  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RationalVector x = RationalVector::Constant(a.cols(), Rational(0));
    x(static_cast<Eigen::Index>(f)) = Rational(1);
    for (std::size_t i = rank; i-- > 0;) {
      const std::size_t pc = form.pivot_cols[i];
      mpq_class sum = 0;
      for (std::size_t j = pc + 1; j < cols; ++j) {
        const auto& xj = x(static_cast<Eigen::Index>(j));
        if (!xj.is_zero() && form.rows[i][j] != 0) sum += mpq_class(form.rows[i][j]) * xj.value();
      }
      x(static_cast<Eigen::Index>(pc)) = Rational(mpq_class(-sum / mpq_class(form.rows[i][pc])));
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Exact solution of the square nonsingular system a*x = b.
inline RationalVector solve_exact(const RationalMatrix& a, const RationalVector& b) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw DimensionMismatch("solve_exact needs a square matrix and a matching right-hand side");
  const auto n = static_cast<std::size_t>(a.rows());
  RationalMatrix aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const EchelonForm form = bareiss_echelon(integer_rows(aug));
  if (form.pivot_cols.size() < n || form.pivot_cols[n - 1] != n - 1)
    throw SingularMatrix("solve_exact: matrix is singular");

  RationalVector x(a.rows());
  for (std::size_t i = n; i-- > 0;) {
    mpq_class sum = mpq_class(form.rows[i][n]);
    for (std::size_t j = i + 1; j < n; ++j) sum -= mpq_class(form.rows[i][j]) * x(static_cast<Eigen::Index>(j)).value();
    x(static_cast<Eigen::Index>(i)) = Rational(mpq_class(sum / mpq_class(form.rows[i][i])));
  }
  return x;
}

/// Exact determinant of an integer-valued square matrix (last Bareiss pivot).
inline mpz_class determinant_integer(const IntegerRows& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  const EchelonForm form = bareiss_echelon(a);
  if (form.pivot_cols.size() < n) return 0;
  return form.swap_sign * form.rows[n - 1][n - 1];
}

/// Exact determinant of a rational square matrix.
inline Rational determinant_exact(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant_exact needs a square matrix");
  mpz_class scale = 1;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    mpz_class l = 1;
    for (Eigen::Index j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).denominator().get_mpz_t());
    scale *= l;
  }
  return Rational(determinant_integer(integer_rows(a)), scale);
}

/// Exact product a*b without relying on Eigen's blocked kernels.
inline RationalMatrix multiply_exact(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply_exact: inner dimensions differ");
  RationalMatrix out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      mpq_class s = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k).value() * b(k, j).value();
      }
      out(i, j) = Rational(s);
    }
  }
  return out;
}

inline RationalVector multiply_exact(const RationalMatrix& a, const RationalVector& x) {
  RationalMatrix xm = x;
  return multiply_exact(a, xm).col(0);
}

}  // namespace ptlat
