#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "etaxi/characters.hpp"

using namespace etaxi;

namespace {

using Evec = std::vector<Rational>;

MonomialSeries bare(Sector sec, long L, int K) {
  CharacterSpec spec;
  spec.sector = sec;
  spec.L = L;
  spec.K = K;
  return char_bruteforce(spec);
}

}  // namespace

TEST_CASE("two-variable character at bound one, both sectors") {
  auto ns = bare(Sector::NS, 1, 2);
  REQUIRE(ns.terms.size() == 4);
  CHECK(ns.terms.at(Evec{Rational(0), Rational(0)}) == 1);
  CHECK(ns.terms.at(Evec{Rational(1), Rational(1)}) == 1);
  CHECK(ns.terms.at(Evec{Rational(-1), Rational(1)}) == 1);
  CHECK(ns.terms.at(Evec{Rational(0), Rational(2)}) == 1);

  auto r = bare(Sector::R, 1, 2);
  REQUIRE(r.terms.size() == 4);
  CHECK(r.terms.at(Evec{Rational(0), Rational(0)}) == 1);
  CHECK(r.terms.at(Evec{Rational(1), Rational(1, 2)}) == 1);
  CHECK(r.terms.at(Evec{Rational(-1), Rational(1, 2)}) == 1);
  CHECK(r.terms.at(Evec{Rational(0), Rational(1)}) == 1);
}

TEST_CASE("empty label list gives the unit character") {
  for (int K : {1, 2, 4}) {
    auto s = bare(Sector::NS, 0, K);
    CHECK(s == MonomialSeries::one(K));
    CharacterSpec spec;
    spec.L = 0;
    spec.K = K;
    CHECK(char_product(spec) == MonomialSeries::one(K));
  }
}

TEST_CASE("trace equals product over the full grid, with and without prefactors") {
  for (Sector sec : {Sector::NS, Sector::R}) {
    for (long L = 0; L <= 6; ++L) {
      for (int K = 1; K <= 5; ++K) {
        CharacterSpec spec;
        spec.sector = sec;
        spec.L = L;
        spec.K = K;
        auto pair = character_pair(spec);
        INFO("sector " << sector_str(sec) << " L " << L << " K " << K);
        CHECK(pair.match);
        for (const auto& [e, c] : pair.trace.terms) CHECK(c > 0);
        spec.with_normalization = true;
        CHECK(character_pair(spec).match);
        spec.regularized = true;
        CHECK(character_pair(spec).match);
      }
    }
  }
}

TEST_CASE("three-variable character with normalization at bound one") {
  CharacterSpec spec;
  spec.L = 1;
  spec.K = 3;
  spec.with_normalization = true;
  auto chi = char_bruteforce(spec);
  REQUIRE(chi.terms.size() == 4);
  CHECK(chi.terms.at(Evec{Rational(1), Rational(0), Rational(1)}) == 1);
  CHECK(chi.terms.at(Evec{Rational(2), Rational(1), Rational(2)}) == 1);
  CHECK(chi.terms.at(Evec{Rational(0), Rational(1), Rational(0)}) == 1);
  CHECK(chi.terms.at(Evec{Rational(1), Rational(2), Rational(1)}) == 1);
  CHECK(character_pair(spec).match);
}

TEST_CASE("normalization prefactor is the even-charge monomial") {
  CharacterSpec spec;
  spec.L = 2;
  spec.K = 2;
  spec.with_normalization = true;
  auto with = char_bruteforce(spec);
  auto plain = bare(Sector::NS, 2, 2);
  CHECK(with == plain.times_monomial(Evec{Rational(2), Rational(0)}));
}

TEST_CASE("regularized prefactor shifts the odd variables by zeta values") {
  CharacterSpec spec;
  spec.L = 1;
  spec.K = 2;
  spec.regularized = true;
  auto chi = char_bruteforce(spec);
  CHECK(chi.terms.count(Evec{Rational(0), Rational(-1, 12)}) == 1);
  CHECK(chi.terms.count(Evec{Rational(1), Rational(11, 12)}) == 1);
}

TEST_CASE("enlarging the bound is stable below it") {
  for (Sector sec : {Sector::NS, Sector::R}) {
    for (long L = 1; L <= 5; ++L) {
      auto a = bare(sec, L, 2);
      auto b = bare(sec, L + 1, 2);
      auto filter = [L](const MonomialSeries& s) {
        MonomialSeries out;
        out.nvars = s.nvars;
        for (const auto& [e, c] : s.terms)
          if (e[1] <= Rational(L)) out.add(e, c);
        return out;
      };
      INFO("sector " << sector_str(sec) << " L " << L);
      CHECK(filter(a) == filter(b));
    }
  }
}

TEST_CASE("specialization chain down to the level series") {
  auto five = bare(Sector::NS, 4, 5);
  auto collapsed = five.substitute_one(2).substitute_one(3).substitute_one(4).truncate_vars(2);
  CHECK(collapsed == bare(Sector::NS, 4, 2));

  auto levels = collapsed.specialize(Evec{Rational(0), Rational(1)});
  const long expected[] = {1, 2, 3, 6, 9};
  for (long l = 0; l <= 4; ++l) CHECK(levels.at(Rational(l)) == expected[l]);

  long long total = 0;
  for (const auto& [e, c] : levels) total += c;
  CHECK(total == 256);
  CHECK(bare(Sector::NS, 3, 2).total() == 64);
  CHECK(bare(Sector::R, 2, 3).total() == 16);
}

TEST_CASE("zeta shift table") {
  auto ns = regularized_shifts(6, Sector::NS);
  REQUIRE(ns.size() == 3);
  CHECK(ns[0] == std::pair<long, Rational>(1, Rational(-1, 12)));
  CHECK(ns[1] == std::pair<long, Rational>(3, Rational(1, 120)));
  CHECK(ns[2] == std::pair<long, Rational>(5, Rational(-1, 252)));

  auto r = regularized_shifts(4, Sector::R);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == std::pair<long, Rational>(1, Rational(1, 24)));
  CHECK(r[1] == std::pair<long, Rational>(3, Rational(-7, 960)));

  CHECK(hurwitz_zeta_negative(2, Rational(1)).is_zero());
  CHECK(hurwitz_zeta_negative(4, Rational(1)).is_zero());
}

TEST_CASE("deformed weight-zero character at rational parameters") {
  auto c = char_D0t(Rational(2), Sector::NS, 1);
  REQUIRE(c.match);
  REQUIRE(c.trace.size() == 4);
  CHECK(c.trace.at(Rational(0)) == 1);
  CHECK(c.trace.at(Rational(1, 8)) == 1);
  CHECK(c.trace.at(Rational(-2)) == 1);
  CHECK(c.trace.at(Rational(-15, 8)) == 1);
  REQUIRE(c.continuum_exponent.has_value());
  CHECK(*c.continuum_exponent == Rational(2, 3));

  auto r = char_D0t(Rational(2), Sector::R, 1);
  REQUIRE(r.match);
  CHECK(r.trace.at(Rational(1, 4)) == 1);
  CHECK(r.trace.at(Rational(-3, 4)) == 1);
  REQUIRE(r.continuum_exponent.has_value());
  CHECK(*r.continuum_exponent == Rational(1, 3));

  for (Sector sec : {Sector::NS, Sector::R})
    for (const Rational& t : {Rational(2), Rational(3, 2), Rational(5, 3)})
      for (long L = 0; L <= 4; ++L) {
        INFO("sector " << sector_str(sec) << " t " << t.str() << " L " << L);
        CHECK(char_D0t(t, sec, L).match);
      }

  auto unit = char_D0t(Rational(1), Sector::NS, 2);
  CHECK(unit.match);
  CHECK(!unit.continuum_exponent.has_value());
  CHECK(unit.trace.at(Rational(0)) == 6);

  CHECK_THROWS_AS(char_D0t(Rational(0), Sector::NS, 1), std::invalid_argument);
}

TEST_CASE("expansion-order substitution matches the direct trace") {
  auto k0 = char_D0k_specialize(0, Sector::NS, 1);
  REQUIRE(k0.match);
  CHECK(k0.trace.at(Rational(0)) == 2);
  CHECK(k0.trace.at(Rational(1)) == 1);
  CHECK(k0.trace.at(Rational(-1)) == 1);

  auto k1 = char_D0k_specialize(1, Sector::NS, 1);
  REQUIRE(k1.match);
  CHECK(k1.trace.at(Rational(0)) == 1);
  CHECK(k1.trace.at(Rational(-3)) == 1);
  CHECK(k1.trace.at(Rational(-1)) == 1);
  CHECK(k1.trace.at(Rational(-4)) == 1);

  for (Sector sec : {Sector::NS, Sector::R})
    for (long k = 0; k <= 3; ++k)
      for (long L = 0; L <= 3; ++L) {
        INFO("sector " << sector_str(sec) << " k " << k << " L " << L);
        CHECK(char_D0k_specialize(k, sec, L).match);
      }

  CHECK_THROWS_AS(char_D0k_specialize(2, Sector::NS, 2, 2), std::invalid_argument);
  CHECK(char_D0k_specialize(1, Sector::NS, 2, 4).substituted ==
        char_D0k_specialize(1, Sector::NS, 2).substituted);
}

TEST_CASE("series arithmetic guards") {
  auto s = bare(Sector::NS, 2, 3);
  CHECK_THROWS_AS(s.truncate_vars(1), std::invalid_argument);
  CHECK_THROWS_AS(s.specialize(Evec{Rational(1)}), std::invalid_argument);
  CharacterSpec spec;
  spec.L = 13;
  CHECK_THROWS_AS(char_bruteforce(spec), std::invalid_argument);
  spec.L = 2;
  spec.K = 0;
  CHECK_THROWS_AS(char_bruteforce(spec), std::invalid_argument);
}
