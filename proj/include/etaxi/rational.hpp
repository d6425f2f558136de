#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace etaxi {

/**
 * Exact rational scalar backed by GMP.
 *
 * Invariant: always stored in lowest terms with positive denominator
 * (mpq_class canonical form). All arithmetic is exact.
 */
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(static_cast<signed long>(n)) {}
  Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p" or "p/q" with optional leading minus, nothing else.
  static std::optional<Rational> parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    if (s[0] == '-') i = 1;
    bool digits = false, slash = false, den_digits = false;
    for (std::size_t j = i; j < s.size(); ++j) {
      char c = s[j];
      if (c == '/') {
        if (slash || !digits) return std::nullopt;
        slash = true;
      } else if (c >= '0' && c <= '9') {
        (slash ? den_digits : digits) = true;
      } else {
        return std::nullopt;
      }
    }
    if (!digits || (slash && !den_digits)) return std::nullopt;
    mpq_class v;
    if (v.set_str(std::string(s), 10) != 0) return std::nullopt;
    if (v.get_den() == 0) return std::nullopt;
    v.canonicalize();
    Rational r;
    r.v_ = std::move(v);
    return r;
  }

  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational pow(long e) const {
    if (e == 0) return Rational(1);  // includes 0^0 = 1
    bool neg = e < 0;
    unsigned long ue = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    if (neg && is_zero()) throw std::domain_error("Rational: 0 to negative power");
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), ue);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), ue);
    Rational r;
    r.v_ = neg ? mpq_class(d, n) : mpq_class(n, d);
    r.v_.canonicalize();
    return r;
  }

  Rational inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    Rational r;
    r.v_ = mpq_class(v_.get_den(), v_.get_num());
    r.v_.canonicalize();
    return r;
  }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  // Only valid when the value is an integer that fits a long.
  long to_long() const {
    if (!is_integer() || !v_.get_num().fits_slong_p())
      throw std::domain_error("Rational: not a small integer");
    return v_.get_num().get_si();
  }

  std::string str() const { return v_.get_str(); }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

inline Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(mpq_class(b));
}

inline Rational factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(mpq_class(f));
}

}  // namespace etaxi
