#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etaxi/bernoulli.hpp"
#include "etaxi/fock.hpp"
#include "etaxi/halfint.hpp"
#include "etaxi/rational.hpp"

namespace etaxi {

/**
 * Finite sum of monomials in variables q_0 .. q_{nvars-1} with exact rational
 * exponents and integer coefficients. Terms are kept in a map keyed by the
 * exponent vector, so iteration order and equality are canonical.
 */
struct MonomialSeries {
  int nvars = 1;
  std::map<std::vector<Rational>, long long> terms;

  static MonomialSeries one(int nvars) {
    MonomialSeries s;
    s.nvars = nvars;
    s.terms.emplace(std::vector<Rational>(static_cast<std::size_t>(nvars), Rational(0)), 1);
    return s;
  }

  void add(const std::vector<Rational>& e, long long c) {
    if (static_cast<int>(e.size()) != nvars)
      throw std::invalid_argument("MonomialSeries: exponent arity mismatch");
    auto it = terms.find(e);
    if (it == terms.end()) {
      if (c != 0) terms.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }

  MonomialSeries times_monomial(const std::vector<Rational>& e) const {
    MonomialSeries out;
    out.nvars = nvars;
    for (const auto& [k, c] : terms) {
      std::vector<Rational> shifted = k;
      for (int i = 0; i < nvars; ++i)
        shifted[static_cast<std::size_t>(i)] += e[static_cast<std::size_t>(i)];
      out.terms.emplace(std::move(shifted), c);
    }
    return out;
  }

  friend MonomialSeries operator+(const MonomialSeries& a, const MonomialSeries& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("MonomialSeries: arity mismatch");
    MonomialSeries out = a;
    for (const auto& [k, c] : b.terms) out.add(k, c);
    return out;
  }

  friend MonomialSeries operator*(const MonomialSeries& a, const MonomialSeries& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("MonomialSeries: arity mismatch");
    MonomialSeries out;
    out.nvars = a.nvars;
    for (const auto& [ka, ca] : a.terms)
      for (const auto& [kb, cb] : b.terms) {
        std::vector<Rational> e = ka;
        for (int i = 0; i < a.nvars; ++i)
          e[static_cast<std::size_t>(i)] += kb[static_cast<std::size_t>(i)];
        out.add(e, ca * cb);
      }
    return out;
  }

  friend bool operator==(const MonomialSeries& a, const MonomialSeries& b) {
    return a.nvars == b.nvars && a.terms == b.terms;
  }

  /** Sets q_var := 1, merging terms that collide. */
  MonomialSeries substitute_one(int var) const {
    if (var < 0 || var >= nvars) throw std::invalid_argument("substitute_one: bad variable");
    MonomialSeries out;
    out.nvars = nvars;
    for (const auto& [k, c] : terms) {
      std::vector<Rational> e = k;
      e[static_cast<std::size_t>(var)] = Rational(0);
      out.add(e, c);
    }
    return out;
  }

  /** Drops trailing variables; every dropped exponent must already be zero. */
  MonomialSeries truncate_vars(int new_nvars) const {
    if (new_nvars < 1 || new_nvars > nvars)
      throw std::invalid_argument("truncate_vars: bad arity");
    MonomialSeries out;
    out.nvars = new_nvars;
    for (const auto& [k, c] : terms) {
      for (int i = new_nvars; i < nvars; ++i)
        if (!k[static_cast<std::size_t>(i)].is_zero())
          throw std::invalid_argument("truncate_vars: nonzero exponent dropped");
      out.add(std::vector<Rational>(k.begin(), k.begin() + new_nvars), c);
    }
    return out;
  }

  /** Substitutes q_i := q^{weights[i]}, collapsing to a single variable. */
  std::map<Rational, long long> specialize(const std::vector<Rational>& weights) const {
    if (static_cast<int>(weights.size()) != nvars)
      throw std::invalid_argument("specialize: weight arity mismatch");
    std::map<Rational, long long> out;
    for (const auto& [k, c] : terms) {
      Rational e(0);
      for (int i = 0; i < nvars; ++i)
        e += weights[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
      out[e] += c;
      if (out[e] == 0) out.erase(e);
    }
    return out;
  }

  /** Total of all coefficients, i.e. every variable set to one. */
  long long total() const {
    long long s = 0;
    for (const auto& [k, c] : terms) s += c;
    return s;
  }
};

/**
 * One graded character instance: sector, label bound L (mode labels up to L
 * in the untwisted sector, up to L - 1/2 in the twisted one), number of
 * grading variables K, and the two optional prefactors.
 */
struct CharacterSpec {
  Sector sector = Sector::NS;
  long L = 1;
  int K = 2;
  bool with_normalization = false;
  bool regularized = false;
};

inline void validate_character_spec(const CharacterSpec& spec) {
  if (spec.L < 0 || spec.L > 12)
    throw std::invalid_argument("character: label bound must be between 0 and 12");
  if (spec.K < 1 || spec.K > 8)
    throw std::invalid_argument("character: variable count must be between 1 and 8");
}

inline std::vector<HalfInt> character_labels(Sector sec, long L) {
  std::vector<HalfInt> out;
  for (long n = 1; n <= L; ++n)
    out.push_back(sec == Sector::NS ? HalfInt(n) : HalfInt::from_twice(2 * n - 1));
  return out;
}

namespace chdetail {

// Exponent vector of one creation mode: variable i carries label^i, with the
// alternating sign for the second species.
inline std::vector<Rational> mode_exponents(HalfInt label, int K, bool second_species) {
  std::vector<Rational> e(static_cast<std::size_t>(K), Rational(0));
  Rational lab = label.to_rational();
  for (int i = 0; i < K; ++i) {
    Rational p = lab.pow(i);
    if (second_species && i % 2 == 0) p = -p;
    e[static_cast<std::size_t>(i)] = p;
  }
  return e;
}

inline std::vector<Rational> prefactor_exponents(const CharacterSpec& spec) {
  std::vector<Rational> e(static_cast<std::size_t>(spec.K), Rational(0));
  auto labels = character_labels(spec.sector, spec.L);
  if (spec.with_normalization) {
    for (int i = 0; i < spec.K; i += 2)
      for (HalfInt lab : labels) e[static_cast<std::size_t>(i)] += lab.to_rational().pow(i);
  }
  if (spec.regularized) {
    Rational a = spec.sector == Sector::NS ? Rational(1) : Rational(1, 2);
    for (int i = 1; i < spec.K; i += 2)
      e[static_cast<std::size_t>(i)] += hurwitz_zeta_negative(i, a);
  }
  return e;
}

inline bool has_prefactor(const CharacterSpec& spec) {
  return spec.with_normalization || spec.regularized;
}

}  // namespace chdetail

/**
 * Trace of the graded weight over all diagrams whose mode labels stay within
 * the bound: both species range over subsets of the label list independently.
 */
inline MonomialSeries char_bruteforce(const CharacterSpec& spec) {
  validate_character_spec(spec);
  auto labels = character_labels(spec.sector, spec.L);
  std::vector<std::vector<Rational>> xi_e, eta_e;
  for (HalfInt lab : labels) {
    xi_e.push_back(chdetail::mode_exponents(lab, spec.K, false));
    eta_e.push_back(chdetail::mode_exponents(lab, spec.K, true));
  }
  MonomialSeries out;
  out.nvars = spec.K;
  long count = static_cast<long>(labels.size());
  for (long m1 = 0; m1 < (1L << count); ++m1) {
    for (long m2 = 0; m2 < (1L << count); ++m2) {
      std::vector<Rational> e(static_cast<std::size_t>(spec.K), Rational(0));
      for (long i = 0; i < count; ++i) {
        if (m1 & (1L << i))
          for (int j = 0; j < spec.K; ++j)
            e[static_cast<std::size_t>(j)] += xi_e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (m2 & (1L << i))
          for (int j = 0; j < spec.K; ++j)
            e[static_cast<std::size_t>(j)] += eta_e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      out.add(e, 1);
    }
  }
  if (chdetail::has_prefactor(spec)) out = out.times_monomial(chdetail::prefactor_exponents(spec));
  return out;
}

/** The same character as a closed product over the label list. */
inline MonomialSeries char_product(const CharacterSpec& spec) {
  validate_character_spec(spec);
  MonomialSeries out = MonomialSeries::one(spec.K);
  for (HalfInt lab : character_labels(spec.sector, spec.L)) {
    MonomialSeries fx = MonomialSeries::one(spec.K);
    fx.add(chdetail::mode_exponents(lab, spec.K, false), 1);
    MonomialSeries fe = MonomialSeries::one(spec.K);
    fe.add(chdetail::mode_exponents(lab, spec.K, true), 1);
    out = out * fx * fe;
  }
  if (chdetail::has_prefactor(spec)) out = out.times_monomial(chdetail::prefactor_exponents(spec));
  return out;
}

struct CharacterPair {
  MonomialSeries trace;
  MonomialSeries product;
  bool match = false;
};

inline CharacterPair character_pair(const CharacterSpec& spec) {
  CharacterPair out;
  out.trace = char_bruteforce(spec);
  out.product = char_product(spec);
  out.match = out.trace == out.product;
  return out;
}

/** Zeta-regularized additive shifts of the odd conserved charges. */
inline std::vector<std::pair<long, Rational>> regularized_shifts(int K, Sector sec) {
  if (K < 1 || K > 32) throw std::invalid_argument("regularized_shifts: bad variable count");
  Rational a = sec == Sector::NS ? Rational(1) : Rational(1, 2);
  std::vector<std::pair<long, Rational>> out;
  for (int i = 1; i < K; i += 2) out.emplace_back(i, hurwitz_zeta_negative(i, a));
  return out;
}

struct D0tCharacter {
  std::map<Rational, long long> trace;
  std::map<Rational, long long> product;
  bool match = false;
  std::optional<Rational> continuum_exponent;
};

/**
 * Single-variable character graded by the deformed weight-zero eigenvalue at
 * a fixed nonzero parameter: trace over diagrams against the closed product
 * with its balancing power per label. The continuum exponent is only defined
 * away from the unit parameter square.
 */
inline D0tCharacter char_D0t(const Rational& t, Sector sec, long L) {
  if (t.is_zero()) throw std::invalid_argument("char_D0t: parameter must be nonzero");
  if (L < 0 || L > 12) throw std::invalid_argument("char_D0t: label bound must be 0..12");
  auto labels = character_labels(sec, L);
  D0tCharacter out;

  std::vector<Rational> up, down;
  for (HalfInt lab : labels) {
    up.push_back(t.pow(-lab.twice() - 1));
    down.push_back(t.pow(lab.twice() - 1));
  }
  long count = static_cast<long>(labels.size());
  for (long m1 = 0; m1 < (1L << count); ++m1) {
    for (long m2 = 0; m2 < (1L << count); ++m2) {
      Rational e(0);
      for (long i = 0; i < count; ++i) {
        if (m1 & (1L << i)) e += up[static_cast<std::size_t>(i)];
        if (m2 & (1L << i)) e -= down[static_cast<std::size_t>(i)];
      }
      out.trace[e] += 1;
    }
  }

  std::map<Rational, long long> prod;
  prod[Rational(0)] = 1;
  auto mul_factor = [&](const std::vector<Rational>& shifts) {
    // multiply by sum of q^{shift} over the given exponent shifts
    std::map<Rational, long long> next;
    for (const auto& [e, c] : prod)
      for (const Rational& s : shifts) next[e + s] += c;
    prod = std::move(next);
  };
  for (long i = 0; i < count; ++i) {
    mul_factor({-down[static_cast<std::size_t>(i)]});
    mul_factor({Rational(0), up[static_cast<std::size_t>(i)]});
    mul_factor({Rational(0), down[static_cast<std::size_t>(i)]});
  }
  out.product = std::move(prod);
  out.match = out.trace == out.product;

  Rational t2 = t * t;
  if (!(t2 == Rational(1))) {
    Rational num = sec == Sector::NS ? t : Rational(1);
    out.continuum_exponent = num / (t2 - Rational(1));
  }
  return out;
}

struct D0kCharacter {
  std::map<Rational, long long> substituted;
  std::map<Rational, long long> trace;
  bool match = false;
};

/**
 * Expansion-order character: substitutes q_s := q^{w_s} with the signed
 * binomial weights into the bare multi-variable character, and checks it
 * against the direct trace of the order-k eigenvalue. Needs one variable per
 * conserved charge through index k.
 */
inline D0kCharacter char_D0k_specialize(long k, Sector sec, long L, std::optional<int> K_opt = {}) {
  if (k < 0 || k > 7) throw std::invalid_argument("char_D0k: order must be 0..7");
  int K = K_opt.value_or(static_cast<int>(k) + 1);
  if (K < k + 1)
    throw std::invalid_argument("char_D0k: need variables through the requested order");
  CharacterSpec spec;
  spec.sector = sec;
  spec.L = L;
  spec.K = K;
  MonomialSeries bare = char_bruteforce(spec);
  std::vector<Rational> w(static_cast<std::size_t>(K), Rational(0));
  Rational sign(k % 2 == 0 ? 1 : -1);
  for (long s = 0; s <= k; ++s)
    w[static_cast<std::size_t>(s)] = sign * Rational(2).pow(s) * binomial(k, s) / factorial(k);

  D0kCharacter out;
  out.substituted = bare.specialize(w);

  auto labels = character_labels(sec, L);
  std::vector<Rational> up, down;
  for (HalfInt lab : labels) {
    Rational l2 = lab.to_rational() * 2;
    up.push_back((-l2 - 1).pow(k) / factorial(k));
    down.push_back((l2 - 1).pow(k) / factorial(k));
  }
  long count = static_cast<long>(labels.size());
  for (long m1 = 0; m1 < (1L << count); ++m1) {
    for (long m2 = 0; m2 < (1L << count); ++m2) {
      Rational e(0);
      for (long i = 0; i < count; ++i) {
        if (m1 & (1L << i)) e += up[static_cast<std::size_t>(i)];
        if (m2 & (1L << i)) e -= down[static_cast<std::size_t>(i)];
      }
      out.trace[e] += 1;
    }
  }
  out.match = out.substituted == out.trace;
  return out;
}

}  // namespace etaxi
