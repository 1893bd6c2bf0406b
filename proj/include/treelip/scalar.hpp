#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace treelip {

using Rational = mpq_class;
using Integer = mpz_class;

// Comparison tolerance for values that went through floating point.
inline constexpr double kDefaultTolerance = 1e-9;

// A non-negative real |z|. Exact magnitudes are stored as their exact
// square, so |a+bi| of exact complex rationals never loses precision even
// when the modulus itself is irrational.
class Magnitude {
 public:
  Magnitude() = default;

  static Magnitude of_rational(const Rational& r);
  static Magnitude from_square(Rational square);
  static Magnitude approx(double value);

  bool exact() const { return exact_; }
  const Rational& square() const;
  // The exact value when it is rational (the stored square is a perfect
  // square of a rational), otherwise nullopt.
  std::optional<Rational> rational() const;
  double to_double() const;
  bool is_zero() const;

  Magnitude operator*(const Magnitude& o) const;
  Magnitude operator/(const Magnitude& o) const;
  Magnitude pow(unsigned n) const;
  // n-th root; stays exact only when the root is rational.
  Magnitude root(unsigned n) const;

  friend bool operator==(const Magnitude& a, const Magnitude& b);
  friend std::partial_ordering operator<=>(const Magnitude& a, const Magnitude& b);

  std::string to_string() const;

 private:
  bool exact_ = true;
  Rational square_ = 0;
  double approx_ = 0.0;
};

Magnitude max(const Magnitude& a, const Magnitude& b);

// Complex scalar. Exact when both components are rationals; any operation
// touching an inexact operand yields an inexact result.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(Rational re, Rational im = 0);

  static Scalar approx(std::complex<double> z);
  // Parses "a", "bi", "a+bi", "a-bi" with integer, p/q, or decimal
  // components. Rational-only input gives an exact scalar.
  static Scalar parse(std::string_view text);

  bool exact() const { return exact_; }
  const Rational& re() const;
  const Rational& im() const;
  std::complex<double> to_complex() const;
  bool is_zero() const;
  bool is_real() const;
  Magnitude abs() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  // Integer power; negative exponents require a nonzero base. 0^0 = 1.
  Scalar pow(long n) const;

  friend bool operator==(const Scalar& a, const Scalar& b);

  std::string to_string() const;

 private:
  bool exact_ = true;
  Rational re_ = 0;
  Rational im_ = 0;
  std::complex<double> z_{};
};

bool approx_equal(const Scalar& a, const Scalar& b, double tol = kDefaultTolerance);
// a <= b, exactly when both are exact, else within tol.
bool approx_le(const Magnitude& a, const Magnitude& b, double tol = kDefaultTolerance);

std::string rational_to_string(const Rational& r);

}  // namespace treelip
