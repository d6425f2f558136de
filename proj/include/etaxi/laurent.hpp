#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>

#include "etaxi/rational.hpp"

namespace etaxi {

// Formal variables available to operator coefficients. Three slots suffice:
// two deformation parameters and one family parameter.
enum class Var : int { q = 0, t = 1, alpha = 2 };

inline const char* var_name(Var v) {
  switch (v) {
    case Var::q: return "q";
    case Var::t: return "t";
    default: return "alpha";
  }
}

/**
 * Multivariate Laurent polynomial in (q, t, alpha) with Rational coefficients.
 *
 * Invariants: no zero coefficients stored; exponent vectors are exact ints.
 * Ring operations are closed and exact; inverse exists only for monomials.
 */
class LaurentPoly {
 public:
  using Expo = std::array<int, 3>;
  using Terms = std::map<Expo, Rational>;

  LaurentPoly() = default;
  LaurentPoly(long n) { insert({0, 0, 0}, Rational(n)); }
  LaurentPoly(const Rational& c) { insert({0, 0, 0}, c); }

  static LaurentPoly monomial(Var v, int e, const Rational& c = Rational(1)) {
    LaurentPoly p;
    Expo x{0, 0, 0};
    x[static_cast<int>(v)] = e;
    p.insert(x, c);
    return p;
  }

  static LaurentPoly term(const Expo& x, const Rational& c) {
    LaurentPoly p;
    p.insert(x, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_monomial() const { return terms_.size() == 1; }

  bool is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Expo{0, 0, 0};
  }

  LaurentPoly operator-() const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) insert(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) insert(e, -c);
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Expo e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
        r.insert(e, ca * cb);
      }
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  LaurentPoly pow(long e) const {
    if (e < 0) {
      return inverse().pow(-e);
    }
    LaurentPoly r(1), base = *this;
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  // Inverse of a single term; anything else is not a unit in this ring.
  LaurentPoly inverse() const {
    if (!is_monomial()) throw std::domain_error("LaurentPoly: inverse of a non-monomial");
    const auto& [e, c] = *terms_.begin();
    return term({-e[0], -e[1], -e[2]}, c.inverse());
  }

  // Exact evaluation; a variable with nonzero exponent must get a nonzero value.
  Rational eval(const std::array<Rational, 3>& vals) const {
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
      Rational m = c;
      for (int i = 0; i < 3; ++i) {
        if (e[i] == 0) continue;
        if (vals[i].is_zero())
          throw std::domain_error("LaurentPoly: zero assigned with nonzero exponent");
        m *= vals[i].pow(e[i]);
      }
      sum += m;
    }
    return sum;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rational a = c;
      if (first) {
        if (a.sign() < 0) {
          out += "-";
          a = -a;
        }
      } else {
        out += a.sign() < 0 ? " - " : " + ";
        if (a.sign() < 0) a = -a;
      }
      std::string vars;
      for (int i = 0; i < 3; ++i) {
        if (e[i] == 0) continue;
        if (!vars.empty()) vars += "*";
        vars += var_name(static_cast<Var>(i));
        if (e[i] != 1) vars += "^" + std::to_string(e[i]);
      }
      if (vars.empty()) {
        out += a.str();
      } else if (a.is_one()) {
        out += vars;
      } else {
        out += a.str() + "*" + vars;
      }
      first = false;
    }
    return out;
  }

 private:
  void insert(const Expo& e, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Terms terms_;
};

}  // namespace etaxi
