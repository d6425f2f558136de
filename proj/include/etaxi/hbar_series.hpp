#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "etaxi/rational.hpp"

namespace etaxi {

/**
 * Power series in hbar truncated at a fixed order K, Rational coefficients.
 *
 * Multiplication truncates at K; the truncation order is preserved through
 * every operation, and mixing different orders is a hard error.
 */
class HbarSeries {
 public:
  HbarSeries() : c_(1, Rational(0)) {}
  explicit HbarSeries(int order, const Rational& c0 = Rational(0))
      : c_(static_cast<std::size_t>(order) + 1, Rational(0)) {
    if (order < 0) throw std::invalid_argument("HbarSeries: negative order");
    c_[0] = c0;
  }
  HbarSeries(int order, std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    if (order < 0 || c_.size() != static_cast<std::size_t>(order) + 1)
      throw std::invalid_argument("HbarSeries: coefficient count mismatch");
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(int m) const { return c_.at(static_cast<std::size_t>(m)); }
  Rational& coeff(int m) { return c_.at(static_cast<std::size_t>(m)); }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  HbarSeries operator-() const {
    HbarSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  HbarSeries& operator+=(const HbarSeries& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  HbarSeries& operator-=(const HbarSeries& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend HbarSeries operator+(HbarSeries a, const HbarSeries& b) { return a += b; }
  friend HbarSeries operator-(HbarSeries a, const HbarSeries& b) { return a -= b; }

  friend HbarSeries operator*(const HbarSeries& a, const HbarSeries& b) {
    a.check(b);
    HbarSeries r(a.order());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; i + j < a.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  HbarSeries& operator*=(const HbarSeries& o) { return *this = *this * o; }

  friend bool operator==(const HbarSeries& a, const HbarSeries& b) {
    a.check(b);
    return a.c_ == b.c_;
  }
  friend bool operator!=(const HbarSeries& a, const HbarSeries& b) { return !(a == b); }

  // Multiplicative inverse mod hbar^(K+1); needs an invertible constant term.
  HbarSeries reciprocal() const {
    if (c_[0].is_zero()) throw std::domain_error("HbarSeries: reciprocal needs c0 != 0");
    HbarSeries r(order());
    r.c_[0] = c_[0].inverse();
    for (std::size_t m = 1; m < c_.size(); ++m) {
      Rational s(0);
      for (std::size_t j = 0; j < m; ++j) s += r.c_[j] * c_[m - j];
      r.c_[m] = -s * r.c_[0];
    }
    return r;
  }

  HbarSeries pow(long e) const {
    if (e < 0) return reciprocal().pow(-e);
    HbarSeries r(order(), Rational(1)), base = *this;
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  std::string str() const {
    std::string out;
    bool first = true;
    for (std::size_t m = 0; m < c_.size(); ++m) {
      if (c_[m].is_zero()) continue;
      Rational a = c_[m];
      if (first) {
        if (a.sign() < 0) {
          out += "-";
          a = -a;
        }
      } else {
        out += a.sign() < 0 ? " - " : " + ";
        if (a.sign() < 0) a = -a;
      }
      if (m == 0) {
        out += a.str();
      } else {
        std::string h = m == 1 ? "h" : "h^" + std::to_string(m);
        out += a.is_one() ? h : a.str() + "*" + h;
      }
      first = false;
    }
    if (first) return "0";
    return out;
  }

 private:
  void check(const HbarSeries& o) const {
    if (c_.size() != o.c_.size())
      throw std::invalid_argument("HbarSeries: truncation order mismatch");
  }

  std::vector<Rational> c_;
};

// Truncated exponential: sum_{m<=K} (c hbar)^m / m!.
inline HbarSeries exp_series(const Rational& c, int K) {
  HbarSeries r(K);
  Rational term(1);
  r.coeff(0) = term;
  for (int m = 1; m <= K; ++m) {
    term = term * c / Rational(m);
    r.coeff(m) = term;
  }
  return r;
}

}  // namespace etaxi
