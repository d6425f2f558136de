#pragma once

#include <compare>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

#include "etaxi/rational.hpp"

namespace etaxi {

/**
 * Element of (1/2)Z stored as twice its value.
 *
 * Mode labels, grading levels and operator weights all live here: integers in
 * the untwisted sector, half-odd integers in the twisted one.
 */
class HalfInt {
 public:
  constexpr HalfInt() : t_(0) {}
  constexpr HalfInt(long n) : t_(2 * n) {}
  static constexpr HalfInt from_twice(long t) {
    HalfInt h;
    h.t_ = t;
    return h;
  }

  constexpr long twice() const { return t_; }
  constexpr bool is_integer() const { return t_ % 2 == 0; }
  constexpr bool is_half_odd() const { return t_ % 2 != 0; }

  long as_long() const {
    if (!is_integer()) throw std::domain_error("HalfInt: not an integer");
    return t_ / 2;
  }

  Rational to_rational() const { return Rational(t_, 2); }

  constexpr HalfInt operator-() const { return from_twice(-t_); }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.t_ + b.t_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.t_ - b.t_); }
  friend constexpr HalfInt operator*(long k, HalfInt a) { return from_twice(k * a.t_); }
  HalfInt& operator+=(HalfInt o) { t_ += o.t_; return *this; }
  HalfInt& operator-=(HalfInt o) { t_ -= o.t_; return *this; }

  friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

  std::string str() const {
    if (is_integer()) return std::to_string(t_ / 2);
    return std::to_string(t_) + "/2";
  }

  // Accepts "n" or "n/2" (odd n); used for truncation levels on the CLI.
  static std::optional<HalfInt> parse(const std::string& s) {
    auto r = Rational::parse(s);
    if (!r) return std::nullopt;
    Rational twice = *r * Rational(2);
    if (!twice.is_integer()) return std::nullopt;
    return from_twice(twice.to_long());
  }

 private:
  long t_;
};

}  // namespace etaxi
