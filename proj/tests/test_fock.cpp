#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "etaxi/fock.hpp"
#include "word_oracle.hpp"

using namespace etaxi;
using oracle::Letter;

namespace {

std::map<BasisState, long> impl_reduce(Sector sec, const std::vector<Letter>& word) {
  StateVector<Rational> sv;
  sv.emplace(BasisState::vacuum(), Rational(1));
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    StateVector<Rational> next;
    for (const auto& [st, c] : sv) {
      if (auto r = apply_mode_core(sec, it->kind, it->label, st)) {
        Rational term = c;
        if (r->second < 0) term = -term;
        sv_add_term(next, r->first, term);
      }
    }
    sv = std::move(next);
  }
  std::map<BasisState, long> out;
  for (const auto& [st, c] : sv) out[st] = c.to_long();
  return out;
}

void check_word(Sector sec, const std::vector<Letter>& word) {
  auto expect = oracle::reduce(word);
  auto got = impl_reduce(sec, word);
  if (got != expect) {
    std::string ws;
    for (const auto& l : word) ws += std::string(mode_name(l.kind)) + "(" + l.label.str() + ") ";
    INFO("word: " << ws);
    REQUIRE(got == expect);
  }
}

std::vector<Letter> alphabet(Sector sec, int max_twice) {
  std::vector<Letter> out;
  int start = sec == Sector::NS ? 0 : 1;
  for (int tw = start; tw <= max_twice; tw += 2) {
    for (int sign : {-1, 1}) {
      if (tw == 0 && sign < 0) continue;
      HalfInt lab = HalfInt::from_twice(sign * tw);
      out.push_back({ModeKind::xi, lab});
      out.push_back({ModeKind::eta, lab});
    }
  }
  return out;
}

BasisState mk(std::vector<long> p1, int b, std::vector<long> p2) {
  BasisState s;
  for (long n : p1) s.p1.push_back(HalfInt(n));
  for (long m : p2) s.p2.push_back(HalfInt(m));
  s.b = static_cast<std::uint8_t>(b);
  return s;
}

BasisState mk2(std::vector<long> p1twice, std::vector<long> p2twice) {
  BasisState s;
  for (long n : p1twice) s.p1.push_back(HalfInt::from_twice(n));
  for (long m : p2twice) s.p2.push_back(HalfInt::from_twice(m));
  return s;
}

// Coefficients of prod_labels (1 + q^a)^2 on the twice-integer lattice.
std::vector<long> squared_partition_counts(const std::vector<int>& labels_twice, int cap_twice) {
  std::vector<long> dp(cap_twice + 1, 0);
  dp[0] = 1;
  for (int a : labels_twice)
    for (int rep = 0; rep < 2; ++rep)
      for (int j = cap_twice; j >= a; --j) dp[j] += dp[j - a];
  return dp;
}

}  // namespace

TEST_CASE("single mode actions match the relation-based reducer, untwisted") {
  auto ab = alphabet(Sector::NS, 4);  // labels -2..2, both kinds
  check_word(Sector::NS, {});
  for (const auto& a : ab) check_word(Sector::NS, {a});
  for (const auto& a : ab)
    for (const auto& b : ab) check_word(Sector::NS, {a, b});
  for (const auto& a : ab)
    for (const auto& b : ab)
      for (const auto& c : ab) check_word(Sector::NS, {a, b, c});
}

TEST_CASE("four-letter words over small labels, untwisted") {
  auto ab = alphabet(Sector::NS, 2);  // labels -1, 0, 1
  for (const auto& a : ab)
    for (const auto& b : ab)
      for (const auto& c : ab)
        for (const auto& d : ab) check_word(Sector::NS, {a, b, c, d});
}

TEST_CASE("words in the twisted sector agree with the reducer") {
  auto ab = alphabet(Sector::R, 3);  // labels +-1/2, +-3/2
  for (const auto& a : ab) check_word(Sector::R, {a});
  for (const auto& a : ab)
    for (const auto& b : ab)
      for (const auto& c : ab) check_word(Sector::R, {a, b, c});
  for (const auto& a : ab)
    for (const auto& b : ab)
      for (const auto& c : ab)
        for (const auto& d : ab) check_word(Sector::R, {a, b, c, d});
}

TEST_CASE("pinned single-mode values") {
  BasisState x = mk({1}, 0, {2});  // xi(-1) eta(-2) Om

  auto r = apply_mode_core(Sector::NS, ModeKind::eta, HalfInt(1), x);
  REQUIRE(r);
  CHECK(r->first == mk({}, 0, {2}));
  CHECK(r->second == 1);

  CHECK_FALSE(apply_mode_core(Sector::NS, ModeKind::xi, HalfInt(1), x));

  r = apply_mode_core(Sector::NS, ModeKind::xi, HalfInt(2), x);
  REQUIRE(r);
  CHECK(r->first == mk({1}, 0, {}));
  CHECK(r->second == -1);

  // Insertion passes earlier columns.
  r = apply_mode_core(Sector::NS, ModeKind::xi, HalfInt(-1), mk({2}, 0, {}));
  REQUIRE(r);
  CHECK(r->first == mk({2, 1}, 0, {}));
  CHECK(r->second == -1);

  r = apply_mode_core(Sector::NS, ModeKind::xi, HalfInt(0), mk({1}, 0, {}));
  REQUIRE(r);
  CHECK(r->first == mk({1}, 1, {}));
  CHECK(r->second == -1);

  // eta_0 Om = 0; eta_0 xi_0 Om = Om.
  CHECK_FALSE(apply_mode_core(Sector::NS, ModeKind::eta, HalfInt(0), BasisState::vacuum()));
  r = apply_mode_core(Sector::NS, ModeKind::eta, HalfInt(0), mk({}, 1, {}));
  REQUIRE(r);
  CHECK(r->first == BasisState::vacuum());
  CHECK(r->second == 1);

  r = apply_mode_core(Sector::NS, ModeKind::xi, HalfInt(1), mk({}, 0, {1}));
  REQUIRE(r);
  CHECK(r->first == BasisState::vacuum());
  CHECK(r->second == 1);
}

TEST_CASE("pair relations hold on every state of a small basis") {
  for (Sector sec : {Sector::NS, Sector::R}) {
    auto basis = enumerate_basis(sec, HalfInt::from_twice(6));
    auto ab = alphabet(sec, 6);
    RingCtx<Rational> ctx;
    for (const auto& A : ab) {
      for (const auto& B : ab) {
        for (const auto& [lv, blk] : basis.blocks) {
          for (const auto& st : blk) {
            StateVector<Rational> acc;
            for (const auto& [s1, c1] : apply_mode(sec, B.kind, B.label, st, ctx))
              for (const auto& [s2, c2] : apply_mode(sec, A.kind, A.label, s1, ctx))
                sv_add_term(acc, s2, c1 * c2);
            for (const auto& [s1, c1] : apply_mode(sec, A.kind, A.label, st, ctx))
              for (const auto& [s2, c2] : apply_mode(sec, B.kind, B.label, s1, ctx))
                sv_add_term(acc, s2, c1 * c2);
            StateVector<Rational> expect;
            if (A.kind != B.kind && (A.label + B.label).twice() == 0)
              expect.emplace(st, Rational(1));
            REQUIRE(acc == expect);
          }
        }
      }
    }
  }
}

TEST_CASE("mode application shifts level and charge as graded") {
  for (Sector sec : {Sector::NS, Sector::R}) {
    auto basis = enumerate_basis(sec, HalfInt::from_twice(8));
    auto ab = alphabet(sec, 4);
    for (const auto& A : ab) {
      for (const auto& [lv, blk] : basis.blocks) {
        for (const auto& st : blk) {
          if (auto r = apply_mode_core(sec, A.kind, A.label, st)) {
            CHECK(r->first.level() == st.level() - A.label);
            int dq = A.kind == ModeKind::xi ? 1 : -1;
            CHECK(r->first.charge() == st.charge() + dq);
          }
        }
      }
    }
  }
}

TEST_CASE("level and charge of sample words") {
  CHECK(mk({3}, 0, {}).level() == HalfInt(3));
  CHECK(mk({3}, 0, {}).charge() == 1);
  CHECK(mk({1}, 1, {2}).level() == HalfInt(3));
  CHECK(mk({1}, 1, {2}).charge() == 1);
  CHECK(BasisState::vacuum().level() == HalfInt(0));
  CHECK(BasisState::vacuum().charge() == 0);
  BasisState r = mk2({3}, {1});  // xi(-3/2) eta(-1/2) mu
  CHECK(r.level() == HalfInt::from_twice(4));
  CHECK(r.charge() == 0);
}

TEST_CASE("word rendering") {
  CHECK(BasisState::vacuum().word_str(Sector::NS) == "Om");
  CHECK(BasisState::vacuum().word_str(Sector::R) == "mu");
  CHECK(mk({3, 1}, 1, {2}).word_str(Sector::NS) == "xi(-3)xi(-1)xi(0)eta(-2)Om");
  CHECK(mk2({3}, {1}).word_str(Sector::R) == "xi(-3/2)eta(-1/2)mu");
}

TEST_CASE("block sizes match the squared strict-partition generating function") {
  SECTION("untwisted, level cap 10") {
    auto basis = enumerate_basis(Sector::NS, HalfInt(10));
    std::vector<int> labels;
    for (int n = 1; n <= 10; ++n) labels.push_back(2 * n);
    auto dp = squared_partition_counts(labels, 20);
    for (int lv = 0; lv <= 10; ++lv)
      CHECK(basis.block(HalfInt(lv)).size() == 2 * static_cast<std::size_t>(dp[2 * lv]));
    // Pinned slice of the counting sequence for good measure.
    std::vector<long> head(dp.begin(), dp.begin() + 21);
    std::vector<long> expect_b0 = {1, 0, 2, 0, 3, 0, 6, 0, 9, 0, 14,
                                   0, 22, 0, 32, 0, 46, 0, 66, 0, 93};
    CHECK(head == expect_b0);
  }
  SECTION("twisted, level cap 10") {
    auto basis = enumerate_basis(Sector::R, HalfInt(10));
    std::vector<int> labels;
    for (int tw = 1; tw <= 19; tw += 2) labels.push_back(tw);
    auto dp = squared_partition_counts(labels, 20);
    for (int tw = 0; tw <= 20; ++tw)
      CHECK(basis.block(HalfInt::from_twice(tw)).size() == static_cast<std::size_t>(dp[tw]));
  }
}

TEST_CASE("small bases enumerate exactly") {
  auto ns0 = enumerate_basis(Sector::NS, HalfInt(0));
  REQUIRE(ns0.levels.size() == 1);
  REQUIRE(ns0.block(HalfInt(0)).size() == 2);
  CHECK(ns0.block(HalfInt(0))[0] == BasisState::vacuum());
  CHECK(ns0.block(HalfInt(0))[1] == mk({}, 1, {}));

  auto ns1 = enumerate_basis(Sector::NS, HalfInt(1));
  REQUIRE(ns1.block(HalfInt(1)).size() == 4);
  CHECK(ns1.total_states() == 6);

  auto r1 = enumerate_basis(Sector::R, HalfInt::from_twice(1));
  REQUIRE(r1.levels.size() == 2);
  CHECK(r1.block(HalfInt(0)).size() == 1);
  CHECK(r1.block(HalfInt::from_twice(1)).size() == 2);
}

TEST_CASE("part-bounded bases count four to the bound") {
  for (long L = 1; L <= 4; ++L) {
    auto basis = enumerate_basis(Sector::NS, HalfInt(L * (L + 1)), HalfInt(L));
    long b0 = 0;
    for (const auto& [lv, blk] : basis.blocks)
      for (const auto& st : blk)
        if (st.b == 0) ++b0;
    long expect = 1;
    for (long i = 0; i < L; ++i) expect *= 4;
    CHECK(b0 == expect);
    CHECK(basis.total_states() == 2 * expect);
  }
}

TEST_CASE("index lookup is consistent with blocks") {
  auto basis = enumerate_basis(Sector::NS, HalfInt(6));
  int seen = 0;
  for (const auto& [lv, blk] : basis.blocks) {
    for (std::size_t i = 0; i + 1 < blk.size(); ++i) CHECK(blk[i] < blk[i + 1]);
    for (std::size_t i = 0; i < blk.size(); ++i) {
      auto it = basis.index.find(blk[i]);
      REQUIRE(it != basis.index.end());
      CHECK(it->second.first == lv);
      CHECK(it->second.second == static_cast<int>(i));
      ++seen;
    }
  }
  CHECK(seen == basis.total_states());
  CHECK(static_cast<int>(basis.index.size()) == basis.total_states());
}

TEST_CASE("labels outside the sector lattice are rejected") {
  CHECK_THROWS_AS(
      apply_mode_core(Sector::NS, ModeKind::xi, HalfInt::from_twice(1), BasisState::vacuum()),
      std::invalid_argument);
  CHECK_THROWS_AS(apply_mode_core(Sector::R, ModeKind::eta, HalfInt(1), BasisState::vacuum()),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_mode_core(Sector::R, ModeKind::xi, HalfInt(0), BasisState::vacuum()),
                  std::invalid_argument);
}
