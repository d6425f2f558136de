#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etaxi/fock.hpp"
#include "etaxi/ops.hpp"

namespace etaxi {

/**
 * Treatment of the level-zero creator/annihilator pair inside normal-ordered
 * bilinears. Away from the zero pair, normal ordering is the usual one: move
 * annihilators right with a fermionic sign. The zero pair has no canonical
 * ordering, so three treatments are supported:
 *
 *   omit    drop the pair term entirely,
 *   raw     keep the ordered product itself (a projector onto b = 1 words),
 *   lambda  lambda * Id minus that projector.
 *
 * Only weight-zero xi-eta bilinears are sensitive to the choice.
 */
enum class ZeroModeRule { omit, raw, lambda };

struct Convention {
  ZeroModeRule rule = ZeroModeRule::omit;
  Rational lambda = Rational(1);

  static Convention omit() { return {ZeroModeRule::omit, Rational(0)}; }
  static Convention raw() { return {ZeroModeRule::raw, Rational(0)}; }
  static Convention with_lambda(const Rational& l) { return {ZeroModeRule::lambda, l}; }

  std::string str() const {
    switch (rule) {
      case ZeroModeRule::omit: return "omit";
      case ZeroModeRule::raw: return "raw";
      default: return "lambda=" + lambda.str();
    }
  }
};

inline std::optional<Convention> parse_zero_mode(const std::string& s) {
  if (s == "omit") return Convention::omit();
  if (s == "raw") return Convention::raw();
  if (s == "lambda") return std::nullopt;  // needs a value
  return std::nullopt;
}

namespace detail {

inline bool mode_is_creator(ModeKind kind, HalfInt label) {
  if (kind == ModeKind::xi) return label.twice() <= 0;
  return label.twice() < 0;
}

}  // namespace detail

/**
 * Weight-n current sum_k coeff(k) :A_k B_{n-k}: as a windowed block matrix.
 * The coefficient callback sees the label k of the first letter.
 */
template <class R>
OperatorHandle<R> build_bilinear(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                                 const Convention& conv, ModeKind ka, ModeKind kb, long n,
                                 const std::function<R(HalfInt)>& coeff) {
  const GradedBasis& bas = *basis;
  Sector sec = bas.sector;
  OperatorHandle<R> h(basis, ctx, HalfInt(n), fresh_window(bas, HalfInt(n)));
  if (h.window().empty) return h;

  long M = bas.max_level.twice() / 2 + std::labs(n) + 2;
  std::vector<std::pair<HalfInt, R>> terms;
  auto consider = [&](HalfInt k) {
    R c = coeff(k);
    if (!c.is_zero()) terms.emplace_back(k, std::move(c));
  };
  if (sec == Sector::NS) {
    for (long j = -M; j <= M; ++j) consider(HalfInt(j));
  } else {
    for (long j = -M - 1; j <= M; ++j) consider(HalfInt::from_twice(2 * j + 1));
  }

  for (const auto& [lv, blk] : bas.blocks) {
    if (!h.window().contains(lv)) continue;
    for (int col = 0; col < static_cast<int>(blk.size()); ++col) {
      const BasisState& s = blk[col];
      for (const auto& [k, c] : terms) {
        HalfInt la = k, lb = HalfInt(n) - k;

        if (la.twice() == 0 && lb.twice() == 0 && ka != kb) {
          // The zero pair, by convention. xi-eta order counts positive.
          bool xi_first = ka == ModeKind::xi;
          R signed_c = xi_first ? c : -c;
          switch (conv.rule) {
            case ZeroModeRule::omit:
              break;
            case ZeroModeRule::raw:
              if (s.b) h.add_entry(lv, col, col, signed_c);
              break;
            case ZeroModeRule::lambda:
              h.add_entry(lv, col, col, signed_c * ctx.from_rational(conv.lambda));
              if (s.b) h.add_entry(lv, col, col, -signed_c);
              break;
          }
          continue;
        }

        bool reorder = !detail::mode_is_creator(ka, la) && detail::mode_is_creator(kb, lb);
        ModeKind k1 = reorder ? ka : kb;
        HalfInt l1 = reorder ? la : lb;
        ModeKind k2 = reorder ? kb : ka;
        HalfInt l2 = reorder ? lb : la;

        auto r1 = apply_mode_core(sec, k1, l1, s);
        if (!r1) continue;
        auto r2 = apply_mode_core(sec, k2, l2, r1->first);
        if (!r2) continue;
        int sign = r1->second * r2->second * (reorder ? -1 : 1);

        auto it = bas.index.find(r2->first);
        if (it == bas.index.end())
          throw std::logic_error("build_bilinear: image left the basis");
        R term = sign < 0 ? -c : c;
        h.add_entry(lv, col, it->second.second, term);
      }
    }
  }
  return h;
}

template <class R>
OperatorHandle<R> build_mode_op(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                                ModeKind kind, HalfInt m) {
  const GradedBasis& bas = *basis;
  OperatorHandle<R> h(basis, ctx, m, fresh_window(bas, m));
  if (h.window().empty) return h;
  for (const auto& [lv, blk] : bas.blocks) {
    if (!h.window().contains(lv)) continue;
    for (int col = 0; col < static_cast<int>(blk.size()); ++col) {
      if (auto r = apply_mode_core(bas.sector, kind, m, blk[col])) {
        auto it = bas.index.find(r->first);
        if (it == bas.index.end()) throw std::logic_error("build_mode_op: image left the basis");
        h.add_entry(lv, col, it->second.second, r->second < 0 ? -ctx.one() : ctx.one());
      }
    }
  }
  return h;
}

// Charge current: sum_k :xi_k eta_{n-k}:.
template <class R>
OperatorHandle<R> build_J(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                          const Convention& conv, long n) {
  return build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, n,
                           [&ctx](HalfInt) { return ctx.one(); });
}

// Stress tensor modes: sum_k (-k) :xi_k eta_{n-k}:.
template <class R>
OperatorHandle<R> build_L(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                          const Convention& conv, long n) {
  return build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, n,
                           [&ctx](HalfInt k) { return ctx.from_rational(-k.to_rational()); });
}

// One-parameter twist of the stress tensor: L_n + (n+1)(a/2) J_n.
template <class R>
OperatorHandle<R> build_L_twisted(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                                  const Convention& conv, long n, const R& a) {
  R half_shift = a * ctx.from_rational(Rational(n + 1, 2));
  return build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, n,
                           [&ctx, half_shift](HalfInt k) {
                             return ctx.from_rational(-k.to_rational()) + half_shift;
                           });
}

// Two-index family: sum_k (-k)^n :xi_k eta_{r-k}:, with (-k)^0 = 1 at k = 0.
template <class R>
OperatorHandle<R> build_V(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                          const Convention& conv, long n, long r) {
  if (n < 0) throw std::invalid_argument("build_V: upper index must be nonnegative");
  return build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, r,
                           [&ctx, n](HalfInt k) {
                             return ctx.from_rational((-k.to_rational()).pow(n));
                           });
}

// Diagonal conserved family: sum_{m>0} m^k (N^+_m + (-1)^{k+1} N^-_m).
template <class R>
OperatorHandle<R> build_I(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx, long k) {
  if (k < 0) throw std::invalid_argument("build_I: negative index");
  Convention conv = Convention::omit();  // no zero pair appears; any rule agrees
  auto plus = build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, 0,
                                [&ctx, k](HalfInt j) {
                                  if (j.twice() >= 0) return ctx.zero();
                                  return ctx.from_rational((-j.to_rational()).pow(k));
                                });
  auto minus = build_bilinear<R>(basis, ctx, conv, ModeKind::eta, ModeKind::xi, 0,
                                 [&ctx, k](HalfInt j) {
                                   if (j.twice() >= 0) return ctx.zero();
                                   Rational c = (-j.to_rational()).pow(k);
                                   if (k % 2 == 0) c = -c;
                                   return ctx.from_rational(c);
                                 });
  return plus + minus;
}

// Spin-parameterised deformation: pw(e) must return the e-th power of the
// deformation unit; weight-n mode is sum_k pw(2k - n - 1) :xi_k eta_{n-k}:.
template <class R>
OperatorHandle<R> build_Dq(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                           const Convention& conv, long n,
                           const std::function<R(long)>& pw) {
  return build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, n,
                           [&pw, n](HalfInt k) { return pw(k.twice() - n - 1); });
}

// W-triple of weight-two currents.
template <class R>
OperatorHandle<R> build_W_plus(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx, long n) {
  return build_bilinear<R>(basis, ctx, Convention::omit(), ModeKind::eta, ModeKind::eta, n,
                           [&ctx](HalfInt m) {
                             return ctx.from_rational(-m.to_rational() - Rational(1));
                           });
}

template <class R>
OperatorHandle<R> build_W_minus(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx, long n) {
  return build_bilinear<R>(basis, ctx, Convention::omit(), ModeKind::xi, ModeKind::xi, n,
                           [&ctx, n](HalfInt k) {
                             Rational kv = k.to_rational();
                             return -kv * (kv + 1) * (Rational(n) - kv);
                           });
}

template <class R>
OperatorHandle<R> build_W_zero(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                               const Convention& conv, long n) {
  auto xieta = build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, n,
                                 [&ctx](HalfInt k) {
                                   Rational kv = k.to_rational();
                                   return ctx.from_rational(kv * (kv + 1) / 2);
                                 });
  auto etaxi = build_bilinear<R>(basis, ctx, conv, ModeKind::eta, ModeKind::xi, n,
                                 [&ctx, n](HalfInt j) {
                                   Rational jv = j.to_rational();
                                   return ctx.from_rational((jv + 1) * (Rational(n) - jv) / 2);
                                 });
  return xieta + etaxi;
}

template <class R>
OperatorHandle<R> build_W(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                          const Convention& conv, int which, long n) {
  if (which == +1) return build_W_plus<R>(basis, ctx, n);
  if (which == -1) return build_W_minus<R>(basis, ctx, n);
  if (which == 0) return build_W_zero<R>(basis, ctx, conv, n);
  throw std::invalid_argument("build_W: which must be -1, 0 or +1");
}

/**
 * Modes of the quadratic fields with s - 1 derivatives spread over the pair:
 * even s puts the extra derivative on the first letter. Derivative modes pick
 * up descending products of the label.
 */
template <class R>
OperatorHandle<R> build_quadratic_mode(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                                       const Convention& conv, long s, long n) {
  if (s < 1) throw std::invalid_argument("build_quadratic_mode: s must be positive");
  long a = s / 2;            // derivatives on xi
  long b = (s - 1) / 2;      // derivatives on eta
  return build_bilinear<R>(basis, ctx, conv, ModeKind::xi, ModeKind::eta, n,
                           [&ctx, a, b, n](HalfInt k) {
                             Rational kv = k.to_rational();
                             Rational mv = Rational(n) - kv;
                             Rational c(1);
                             for (long i = 0; i < a; ++i) c = c * -(kv + i);
                             for (long i = 1; i <= b; ++i) c = c * -(mv + i);
                             return ctx.from_rational(c);
                           });
}

/**
 * Operator with an even bilinear part and an odd single-mode tail. The graded
 * bracket pairs even parts by commutator and odd parts by anticommutator.
 */
template <class R>
struct TildeOp {
  OperatorHandle<R> even;
  OperatorHandle<R> odd;
};

template <class R>
OperatorHandle<R> graded_commutator(const TildeOp<R>& x, const TildeOp<R>& y) {
  return commutator(x.even, y.even) + commutator(x.even, y.odd) + commutator(x.odd, y.even) +
         anticommutator(x.odd, y.odd);
}

template <class R>
TildeOp<R> build_tilde_L(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                         const Convention& conv, long n, const Rational& deltaT) {
  auto even = build_L<R>(basis, ctx, conv, n);
  auto odd = build_mode_op<R>(basis, ctx, ModeKind::eta, HalfInt(n))
                 .scale(ctx.from_rational(-deltaT * Rational(n + 1)));
  return {even, odd};
}

template <class R>
TildeOp<R> build_tilde_D(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                         const Convention& conv, long n, const std::function<R(long)>& pw) {
  auto even = build_Dq<R>(basis, ctx, conv, n, pw);
  auto odd = build_mode_op<R>(basis, ctx, ModeKind::eta, HalfInt(n))
                 .scale(pw(-n - 1) * ctx.from_rational(Rational(-2)));
  return {even, odd};
}

/**
 * Expansion of the deformation current around the identity of its parameter
 * group: unit = exp(gamma * hbar), truncated at hbar^K. Returns the rational
 * coefficient operators of hbar^0 .. hbar^K.
 */
inline std::vector<OperatorHandle<Rational>> hbar_expand(std::shared_ptr<const GradedBasis> basis,
                                                         const Convention& conv, long n,
                                                         const Rational& gamma, int K) {
  RingCtx<HbarSeries> hctx{K};
  auto op = build_Dq<HbarSeries>(basis, hctx, conv, n,
                                 [&gamma, K](long e) { return exp_series(gamma * e, K); });
  RingCtx<Rational> qctx;
  std::vector<OperatorHandle<Rational>> out;
  for (int j = 0; j <= K; ++j)
    out.emplace_back(basis, qctx, op.weight(), op.window());
  for (const auto& [lv, blk] : op.blocks())
    for (const auto& [col, column] : blk)
      for (const auto& [row, v] : column)
        for (int j = 0; j <= K; ++j) out[j].add_entry(lv, col, row, v.coeff(j));
  return out;
}

// Diagonal eigenvalue of the conserved family on a canonical word.
inline Rational iom_eigenvalue(long k, const BasisState& s) {
  Rational acc(0);
  for (auto p : s.p1) acc += p.to_rational().pow(k);
  for (auto p : s.p2) {
    Rational t = p.to_rational().pow(k);
    acc += (k % 2 == 0) ? -t : t;
  }
  return acc;
}

// Weight-zero deformation eigenvalue on a b = 0 word, as powers of the unit.
template <class R>
R d0_eigenvalue(const std::function<R(long)>& pw, const BasisState& s, const R& zero) {
  R acc = zero;
  for (auto p : s.p1) acc += pw(-p.twice() - 1);
  for (auto p : s.p2) acc = acc - pw(p.twice() - 1);
  return acc;
}

// hbar^k coefficient of the weight-zero eigenvalue with unit exp(gamma hbar).
inline Rational d0k_eigenvalue(long k, const Rational& gamma, const BasisState& s) {
  Rational acc(0);
  for (auto p : s.p1) acc += (-p.to_rational() * 2 - 1).pow(k);
  for (auto p : s.p2) acc -= (p.to_rational() * 2 - 1).pow(k);
  return acc * gamma.pow(k) / factorial(k);
}

}  // namespace etaxi
