#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>

#include "etaxi/verify.hpp"

using namespace etaxi;

namespace {

bool has_note(const RelationReport& rep, const std::string& needle) {
  return std::any_of(rep.notes.begin(), rep.notes.end(), [&](const std::string& n) {
    return n.find(needle) != std::string::npos;
  });
}

std::string measured(const RelationReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.measurements)
    if (k == key) return v;
  return "<missing>";
}

std::string first_failure(const RelationReport& rep) {
  if (rep.failures.empty()) return "";
  const auto& f = rep.failures.front();
  return f.relation + " on " + f.state + " | expected " + f.expected + " | got " + f.actual;
}

}  // namespace

TEST_CASE("report status transitions and exit codes") {
  RelationReport rep;
  CHECK(rep.passed());
  CHECK(rep.exit_code() == 0);
  rep.mark_fail();
  CHECK(rep.status == "fail");
  CHECK(rep.exit_code() == 1);
  rep.mark_window_empty();
  CHECK(rep.status == "window-empty");
  CHECK(rep.exit_code() == 2);
}

TEST_CASE("failure machinery records entry-level mismatches") {
  auto basis = make_basis(Sector::NS, 4);
  RingCtx<Rational> ctx;
  auto l1 = build_L<Rational>(basis, ctx, Convention::omit(), 1);
  auto j1 = build_J<Rational>(basis, ctx, Convention::omit(), 1);
  RelationReport rep;
  vdetail::check_equal(rep, "probe", l1, j1);
  REQUIRE(rep.status == "fail");
  REQUIRE(!rep.failures.empty());
  CHECK(rep.failures.front().relation == "probe");
  CHECK(rep.failures.front().state.find(" -> ") != std::string::npos);

  RelationReport rep2;
  auto l0 = build_L<Rational>(basis, ctx, Convention::omit(), 0);
  vdetail::check_scalar(rep2, "not scalar", l0, Rational(0));
  CHECK(rep2.status == "fail");
  CHECK(rep2.failures.front().expected == "a scalar multiple of the identity");
}

TEST_CASE("mode anticommutators hold on every state in both sectors") {
  VerifyOptions opt;
  opt.max_level = 4;
  opt.max_index = 3;
  auto rep = verify_anticommutators(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
  CHECK(measured(rep, "relation_instances") == "147");

  opt.sector = Sector::R;
  opt.max_index = 2;
  auto rrep = verify_anticommutators(opt);
  CHECK(rrep.passed());
  CHECK(measured(rrep, "relation_instances") == "48");
}

TEST_CASE("stress tensor suite passes and degrades to window-empty") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.max_index = 3;
  auto rep = verify_virasoro(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
  CHECK(has_note(rep, "truncation stability"));

  opt.max_level = 1;
  auto small = verify_virasoro(opt);
  CHECK(small.status == "window-empty");
  CHECK(small.exit_code() == 2);

  opt.sector = Sector::R;
  CHECK_THROWS_AS(verify_virasoro(opt), std::invalid_argument);
}

TEST_CASE("twisted stress tensor: quadratic central charge and anomaly root") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.max_index = 3;
  auto rep = verify_virasoro_alpha(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
  CHECK(measured(rep, "central_charge_quadratic") == "-2 + 6*alpha - 3*alpha^2");
  CHECK(measured(rep, "anomaly_free_alpha") == "1");
  CHECK(measured(rep, "anomaly_at_alpha_2_n_1") == "1");

  VerifyOptions bad = opt;
  bad.alpha_samples = {Rational(0), Rational(1)};
  CHECK_THROWS_AS(verify_virasoro_alpha(bad), std::invalid_argument);
}

TEST_CASE("deformed current bracket in the symbolic ring") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.max_index = 3;
  opt.ring = "laurent";
  auto rep = verify_Dq_algebra(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
  CHECK(has_note(rep, "jacobi identity spot-checked"));
}

TEST_CASE("deformed current bracket at rational samples and truncated series") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.max_index = 3;
  opt.ring = "rational";
  auto rep = verify_Dq_algebra(opt);
  CHECK(rep.passed());

  opt.ring = "hbar";
  opt.max_level = 4;
  opt.max_index = 2;
  opt.hbar_order = 4;
  auto hrep = verify_Dq_algebra(opt);
  INFO(first_failure(hrep));
  CHECK(hrep.passed());
  CHECK(has_note(hrep, "sinh form"));

  opt.ring = "nope";
  CHECK_THROWS_AS(verify_Dq_algebra(opt), std::invalid_argument);

  VerifyOptions tiny;
  tiny.max_level = 2;
  tiny.max_index = 3;
  tiny.ring = "laurent";
  CHECK(verify_Dq_algebra(tiny).status == "window-empty");
}

TEST_CASE("two-index family bracket with measured central constant") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.upper_index = 2;
  opt.max_index = 3;
  auto rep = verify_V_algebra(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
  CHECK(measured(rep, "measured_c") == "1");
  CHECK(has_note(rep, "occupancy projector"));
}

TEST_CASE("central sum of the two-index family is antisymmetric") {
  CHECK(v_central_sum(0, 0, 1) == Rational(1));
  CHECK(v_central_sum(1, 1, 2) == Rational(-1));
  CHECK(v_central_sum(0, 0, 0) == Rational(0));
  for (long n = 0; n <= 2; ++n)
    for (long m = 0; m <= 2; ++m)
      for (long r = -3; r <= 3; ++r)
        CHECK(v_central_sum(n, m, r) == -v_central_sum(m, n, -r));
}

TEST_CASE("conserved family: involution, eigenvalues, cross identities") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.max_index = 6;
  auto rep = verify_involution_and_eigenvalues(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());

  opt.sector = Sector::R;
  opt.max_level = 5;
  opt.max_index = 4;
  auto rrep = verify_involution_and_eigenvalues(opt);
  INFO(first_failure(rrep));
  CHECK(rrep.passed());
}

TEST_CASE("degenerate vacuum structure of the tail extensions") {
  VerifyOptions opt;
  opt.max_level = 5;
  auto rep = verify_jordan(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
  CHECK(has_note(rep, "dropped-pair right side at (1,-1) deviates"));
  CHECK(has_note(rep, "unit-weight zero-pair variant"));

  opt.max_level = 3;
  CHECK(verify_jordan(opt).status == "window-empty");
}

TEST_CASE("weight-two triple transforms as conformal primaries") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.max_index = 3;
  auto rep = verify_primary_w3(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
}

TEST_CASE("series expansion of the deformed current") {
  VerifyOptions opt;
  opt.max_level = 6;
  opt.max_index = 3;
  opt.expansion_k = 6;
  opt.expansion_level = 6;
  auto rep = verify_expansion(opt);
  INFO(first_failure(rep));
  CHECK(rep.passed());
  CHECK(measured(rep, "first_order_central_charge") == "1");
}

TEST_CASE("cross-convention comparison fails exactly where the projector acts") {
  VerifyOptions opt;
  opt.max_level = 8;
  auto rep = verify_convention_independence(opt);
  CHECK(rep.status == "fail");
  CHECK(rep.exit_code() == 1);
  REQUIRE(!rep.failures.empty());
  // Deviations only in comparisons against the dropped-pair rule.
  for (const auto& f : rep.failures)
    CHECK(f.relation.find("omit vs lambda=0") != std::string::npos);
  CHECK(has_note(rep, "identical commutators"));
  CHECK(has_note(rep, "flag-diagonal parts"));
  CHECK(has_note(rep, "projector-bracket"));
}
