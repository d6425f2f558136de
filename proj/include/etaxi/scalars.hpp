#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "etaxi/hbar_series.hpp"
#include "etaxi/laurent.hpp"
#include "etaxi/rational.hpp"

namespace etaxi {

// Mixing coefficient rings inside one computation is a hard error.
struct RingError : std::runtime_error {
  explicit RingError(const std::string& what) : std::runtime_error(what) {}
};

// Tagged union over the three coefficient rings.
using ScalarValue = std::variant<Rational, LaurentPoly, HbarSeries>;

enum class ScalarOp { add, sub, mul };

inline ScalarValue scalar_arith(const ScalarValue& a, const ScalarValue& b, ScalarOp op) {
  if (a.index() != b.index()) throw RingError("scalar_arith: ring mismatch");
  auto run = [op](const auto& x, const auto& y) -> ScalarValue {
    switch (op) {
      case ScalarOp::add: return x + y;
      case ScalarOp::sub: return x - y;
      default: return x * y;
    }
  };
  switch (a.index()) {
    case 0: return run(std::get<0>(a), std::get<0>(b));
    case 1: return run(std::get<1>(a), std::get<1>(b));
    default: {
      const auto& x = std::get<2>(a);
      const auto& y = std::get<2>(b);
      if (x.order() != y.order()) throw RingError("scalar_arith: hbar order mismatch");
      return run(x, y);
    }
  }
}

inline bool scalar_is_zero(const ScalarValue& s) {
  return std::visit([](const auto& x) { return x.is_zero(); }, s);
}

inline std::string scalar_str(const ScalarValue& s) {
  return std::visit([](const auto& x) { return x.str(); }, s);
}

/**
 * Compile-time ring plumbing for the templated operator engine. A context
 * value carries whatever the ring needs to mint constants (the truncation
 * order for hbar series, nothing for the other two).
 */
template <class R>
struct RingCtx;

template <>
struct RingCtx<Rational> {
  Rational zero() const { return Rational(0); }
  Rational one() const { return Rational(1); }
  Rational from_rational(const Rational& x) const { return x; }
};

template <>
struct RingCtx<LaurentPoly> {
  LaurentPoly zero() const { return LaurentPoly(); }
  LaurentPoly one() const { return LaurentPoly(1); }
  LaurentPoly from_rational(const Rational& x) const { return LaurentPoly(x); }
};

template <>
struct RingCtx<HbarSeries> {
  int order = 0;
  HbarSeries zero() const { return HbarSeries(order); }
  HbarSeries one() const { return HbarSeries(order, Rational(1)); }
  HbarSeries from_rational(const Rational& x) const { return HbarSeries(order, x); }
};

template <class R>
std::string ring_str(const R& x) {
  return x.str();
}

}  // namespace etaxi
