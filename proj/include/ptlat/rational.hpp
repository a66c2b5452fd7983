#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "ptlat/errors.hpp"

namespace ptlat {

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// Values are always canonical: the denominator is positive, the fraction is
/// fully reduced, and zero is stored as 0/1.
class Rational {
 public:
  Rational() = default;

  template <std::integral I>
  Rational(I value) : q_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)

  Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  /// Parses "p/q", an integer "p", or a plain decimal such as "-0.25".
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      mpz_class num, den;
      if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
        throw std::invalid_argument("malformed rational literal '" + s + "'");
      return Rational(num, den);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
      mpz_class num;
      if (num.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
      return Rational(num, mpz_class(1));
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (digits.front() == '+') digits.erase(0, 1);
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    return Rational(num, den);
  }

  const mpq_class& value() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  /// "num/den", denominator always written.
  std::string str() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Nearest double (round-to-nearest-even); throws Overflow beyond the double range.
inline double to_float(const Rational& x) {
  mpfr_t tmp;
  mpfr_init2(tmp, std::numeric_limits<double>::digits);
  mpfr_set_q(tmp, x.value().get_mpq_t(), MPFR_RNDN);
  const double d = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  if (!std::isfinite(d)) throw Overflow("rational " + x.str() + " exceeds the double range");
  return d;
}

/// Exact conversion of a finite double.
inline Rational from_float(double x) {
  if (!std::isfinite(x)) throw NonFinite("cannot convert a non-finite double to a rational");
  return Rational(mpq_class(x));
}

inline bool is_finite_value(double x) { return std::isfinite(x); }
inline bool is_finite_value(const Rational&) { return true; }

inline double as_double(double x) { return x; }
inline double as_double(const Rational& x) { return to_float(x); }

}  // namespace ptlat

namespace Eigen {

template <>
struct NumTraits<ptlat::Rational> : GenericNumTraits<ptlat::Rational> {
  using Real = ptlat::Rational;
  using NonInteger = ptlat::Rational;
  using Nested = ptlat::Rational;
  using Literal = ptlat::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 40,
    MulCost = 80
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
  static Real highest() = delete;
  static Real lowest() = delete;
};

}  // namespace Eigen
