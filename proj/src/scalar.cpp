#include "treelip/scalar.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "treelip/errors.hpp"

namespace treelip {

namespace {

// Exact integer n-th root of a non-negative integer, if one exists.
std::optional<Integer> exact_root(const Integer& x, unsigned n) {
  Integer r;
  if (mpz_root(r.get_mpz_t(), x.get_mpz_t(), n) == 0) return std::nullopt;
  return r;
}

std::optional<Rational> exact_root(const Rational& x, unsigned n) {
  auto num = exact_root(x.get_num(), n);
  if (!num) return std::nullopt;
  auto den = exact_root(x.get_den(), n);
  if (!den) return std::nullopt;
  Rational out(*num, *den);
  out.canonicalize();
  return out;
}

std::complex<double> to_cd(const Rational& re, const Rational& im) {
  return {re.get_d(), im.get_d()};
}

}  // namespace

std::string rational_to_string(const Rational& r) { return r.get_str(); }

// ---- Magnitude ------------------------------------------------------------

Magnitude Magnitude::of_rational(const Rational& r) {
  Magnitude m;
  m.square_ = r * r;
  return m;
}

Magnitude Magnitude::from_square(Rational square) {
  if (sgn(square) < 0) throw DomainError("negative squared magnitude");
  Magnitude m;
  m.square_ = std::move(square);
  return m;
}

Magnitude Magnitude::approx(double value) {
  Magnitude m;
  m.exact_ = false;
  m.approx_ = std::abs(value);
  return m;
}

const Rational& Magnitude::square() const {
  if (!exact_) throw std::logic_error("square() of an inexact magnitude");
  return square_;
}

std::optional<Rational> Magnitude::rational() const {
  if (!exact_) return std::nullopt;
  return exact_root(square_, 2);
}

double Magnitude::to_double() const {
  if (!exact_) return approx_;
  if (auto r = rational()) return r->get_d();
  return std::sqrt(square_.get_d());
}

bool Magnitude::is_zero() const { return exact_ ? sgn(square_) == 0 : approx_ == 0.0; }

Magnitude Magnitude::operator*(const Magnitude& o) const {
  if (exact_ && o.exact_) return from_square(square_ * o.square_);
  return approx(to_double() * o.to_double());
}

Magnitude Magnitude::operator/(const Magnitude& o) const {
  if (o.is_zero()) throw DomainError("division by a zero magnitude");
  if (exact_ && o.exact_) return from_square(square_ / o.square_);
  return approx(to_double() / o.to_double());
}

Magnitude Magnitude::pow(unsigned n) const {
  if (!exact_) return approx(std::pow(approx_, n));
  Rational sq = 1;
  for (unsigned i = 0; i < n; ++i) sq *= square_;
  return from_square(sq);
}

Magnitude Magnitude::root(unsigned n) const {
  if (n == 0) throw DomainError("zeroth root");
  if (exact_) {
    if (auto r = exact_root(square_, n)) return from_square(*r);
  }
  return approx(std::pow(to_double(), 1.0 / n));
}

bool operator==(const Magnitude& a, const Magnitude& b) {
  if (a.exact_ && b.exact_) return a.square_ == b.square_;
  return a.to_double() == b.to_double();
}

std::partial_ordering operator<=>(const Magnitude& a, const Magnitude& b) {
  if (a.exact_ && b.exact_) {
    int c = cmp(a.square_, b.square_);
    return c < 0 ? std::partial_ordering::less
                 : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
  }
  return a.to_double() <=> b.to_double();
}

Magnitude max(const Magnitude& a, const Magnitude& b) { return (b > a) ? b : a; }

std::string Magnitude::to_string() const {
  if (exact_) {
    if (auto r = rational()) return rational_to_string(*r);
    return "sqrt(" + rational_to_string(square_) + ")";
  }
  std::ostringstream os;
  os.precision(17);
  os << approx_;
  return os.str();
}

bool approx_le(const Magnitude& a, const Magnitude& b, double tol) {
  if (a.exact() && b.exact()) return a <= b;
  return a.to_double() <= b.to_double() + tol;
}

// ---- Scalar ---------------------------------------------------------------

Scalar::Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

Scalar Scalar::approx(std::complex<double> z) {
  Scalar s;
  s.exact_ = false;
  s.z_ = z;
  return s;
}

const Rational& Scalar::re() const {
  if (!exact_) throw std::logic_error("re() of an inexact scalar");
  return re_;
}

const Rational& Scalar::im() const {
  if (!exact_) throw std::logic_error("im() of an inexact scalar");
  return im_;
}

std::complex<double> Scalar::to_complex() const { return exact_ ? to_cd(re_, im_) : z_; }

bool Scalar::is_zero() const {
  return exact_ ? (sgn(re_) == 0 && sgn(im_) == 0) : z_ == std::complex<double>{};
}

bool Scalar::is_real() const { return exact_ ? sgn(im_) == 0 : z_.imag() == 0.0; }

Magnitude Scalar::abs() const {
  if (exact_) return Magnitude::from_square(re_ * re_ + im_ * im_);
  return Magnitude::approx(std::abs(z_));
}

Scalar Scalar::operator-() const {
  if (exact_) return Scalar(-re_, -im_);
  return approx(-z_);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (exact_ && o.exact_) {
    re_ += o.re_;
    im_ += o.im_;
  } else {
    *this = approx(to_complex() + o.to_complex());
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (exact_ && o.exact_) {
    re_ -= o.re_;
    im_ -= o.im_;
  } else {
    *this = approx(to_complex() - o.to_complex());
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (exact_ && o.exact_) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
  } else {
    *this = approx(to_complex() * o.to_complex());
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DomainError("division by zero scalar");
  if (exact_ && o.exact_) {
    Rational den = o.re_ * o.re_ + o.im_ * o.im_;
    Rational re = (re_ * o.re_ + im_ * o.im_) / den;
    Rational im = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
  } else {
    *this = approx(to_complex() / o.to_complex());
  }
  return *this;
}

Scalar Scalar::pow(long n) const {
  if (n < 0) return Scalar(1) / pow(-n);
  if (!exact_) return approx(std::pow(z_, static_cast<double>(n)));
  Scalar result(1);
  Scalar base = *this;
  auto e = static_cast<unsigned long>(n);
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return a.re_ == b.re_ && a.im_ == b.im_;
  return a.to_complex() == b.to_complex();
}

std::string Scalar::to_string() const {
  if (!exact_) {
    std::ostringstream os;
    os.precision(17);
    os << z_.real();
    if (z_.imag() != 0.0) os << (z_.imag() < 0 ? "-" : "+") << std::abs(z_.imag()) << "i";
    return os.str();
  }
  std::string out = rational_to_string(re_);
  if (sgn(im_) != 0) {
    out += sgn(im_) < 0 ? "-" : "+";
    out += rational_to_string(Rational(::abs(im_))) + "i";
  }
  return out;
}

bool approx_equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.exact() && b.exact()) return a == b;
  return std::abs(a.to_complex() - b.to_complex()) <= tol;
}

// ---- parsing --------------------------------------------------------------

namespace {

struct Component {
  bool exact = true;
  Rational q = 0;
  double d = 0.0;
};

Component parse_component(std::string_view s, std::string_view whole) {
  auto fail = [&]() -> Component {
    throw SpecError("cannot parse scalar '" + std::string(whole) + "'");
  };
  if (s.empty()) fail();
  std::string str(s);
  bool decimal = str.find_first_of(".eE") != std::string::npos;
  Component c;
  if (decimal) {
    std::size_t used = 0;
    try {
      c.d = std::stod(str, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != str.size()) fail();
    c.exact = false;
    return c;
  }
  for (std::size_t i = 0; i < str.size(); ++i) {
    char ch = str[i];
    bool ok = (ch >= '0' && ch <= '9') || ch == '/' || ((ch == '-' || ch == '+') && i == 0);
    if (!ok) fail();
  }
  if (str[0] == '+') str.erase(0, 1);
  try {
    c.q = Rational(str);
  } catch (const std::exception&) {
    fail();
  }
  if (str.find('/') != std::string::npos && sgn(c.q.get_den()) == 0) fail();
  c.q.canonicalize();
  return c;
}

}  // namespace

Scalar Scalar::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ') s += ch;
  }
  if (s.empty()) throw SpecError("empty scalar");
  std::string re_part;
  std::string im_part;
  if (s.back() == 'i') {
    // split at the last sign that is not a leading sign or an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size() - 1; i > 0; --i) {
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) {
      im_part = s.substr(0, s.size() - 1);
    } else {
      re_part = s.substr(0, split);
      im_part = s.substr(split, s.size() - 1 - split);
    }
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
  } else {
    re_part = s;
  }
  Component re = re_part.empty() ? Component{} : parse_component(re_part, text);
  Component im = im_part.empty() ? Component{} : parse_component(im_part, text);
  if (re.exact && im.exact) return Scalar(re.q, im.q);
  double rd = re.exact ? re.q.get_d() : re.d;
  double id = im.exact ? im.q.get_d() : im.d;
  return approx({rd, id});
}

}  // namespace treelip
