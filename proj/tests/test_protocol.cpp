#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qbsc/protocol.hpp"
#include "test_util.hpp"

using namespace qbsc;
using namespace qbsc_test;

TEST_CASE("two-basis unitary set") {
  const UnitarySet us = two_basis_set(1);
  REQUIRE(us.size() == 2);
  CHECK((us.unitaries[0] - ComplexMatrix::identity(2)).max_abs() == 0.0);
  CHECK((us.unitaries[1] - hadamard_n(1)).max_abs() < 1e-15);

  for (std::size_t n : {1, 2, 3}) {
    const UnitarySet s = two_basis_set(n);
    for (const auto& u : s.unitaries) CHECK(unitarity_defect(u) < 1e-12);
    // <x|H^xn|x> = 2^-n/2 for every x: product of 2^-1/2 amplitudes.
    const double expect = std::pow(2.0, -static_cast<double>(n) / 2.0);
    for (std::size_t x = 0; x < s.dim(); ++x)
      CHECK(std::abs(s.unitaries[1](x, x)) == Catch::Approx(expect).margin(1e-12));
  }
}

TEST_CASE("haar unitary sets") {
  const UnitarySet one = haar_set(2, 1, 5);
  CHECK(one.size() == 1);
  CHECK(unitarity_defect(one.unitaries[0]) < 1e-9);

  const UnitarySet a = haar_set(2, 3, 17);
  const UnitarySet b = haar_set(2, 3, 17);
  for (std::size_t r = 0; r < 3; ++r)
    CHECK((a.unitaries[r] - b.unitaries[r]).max_abs() == 0.0);
  const UnitarySet c = haar_set(2, 3, 18);
  CHECK((a.unitaries[0] - c.unitaries[0]).max_abs() > 1e-6);
}

TEST_CASE("commit and reveal") {
  const UnitarySet us = two_basis_set(1);
  const CommitTranscript t0 = commit("0", 0, us);
  CHECK(t0.commit_state.matrix(0, 0).real() == Catch::Approx(1.0));

  const CommitTranscript tp = commit("0", 1, us);
  CHECK(tp.commit_state.matrix(0, 1).real() == Catch::Approx(0.5));

  SECTION("commit states are pure") {
    const UnitarySet h3 = haar_set(2, 3, 9);
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t x = rng.below(4);
      const std::size_t r = rng.below(3);
      const CommitTranscript t = commit(all_bitstrings(2)[x], r, h3);
      const ComplexMatrix sq = t.commit_state.matrix * t.commit_state.matrix;
      CHECK(sq.trace().real() == Catch::Approx(1.0).margin(1e-10));
    }
  }

  SECTION("honest reveals always accepted, exhaustively for n <= 3") {
    for (std::size_t n : {1, 2, 3}) {
      for (const UnitarySet& s : {two_basis_set(n), haar_set(n, 4, 21)}) {
        for (const auto& x : all_bitstrings(n))
          for (std::size_t r = 0; r < s.size(); ++r) {
            CommitTranscript t = commit(x, r, s);
            CHECK_FALSE(t.accepted.has_value());
            CHECK(reveal_verify(t, x, r, s) ==
                  Catch::Approx(1.0).margin(1e-12));
            REQUIRE(t.revealed.has_value());
            CHECK(t.revealed->first == x);
            CHECK(t.accepted == true);
          }
      }
    }
  }

  SECTION("wrong basis announcement: |<x|H|x>|^2 = 1/2") {
    for (const auto& x : {"0", "1"}) {
      CommitTranscript t = commit(x, 0, us);
      CHECK(reveal_verify(t, x, 1, us) == Catch::Approx(0.5).margin(1e-12));
      CHECK_FALSE(t.accepted.has_value());  // outcome genuinely random
    }
  }

  SECTION("wrong string with honest basis is rejected") {
    CommitTranscript t0 = commit("0", 0, us);
    CHECK(reveal_verify(t0, "1", 0, us) == Catch::Approx(0.0).margin(1e-12));
    CHECK(t0.accepted == false);
    CommitTranscript t1 = commit("0", 1, us);
    CHECK(reveal_verify(t1, "1", 1, us) == Catch::Approx(0.0).margin(1e-12));
  }

  CHECK_THROWS_AS(commit("00", 0, us), std::invalid_argument);
  CHECK_THROWS_AS(commit("0", 2, us), std::invalid_argument);
}

TEST_CASE("binding bound audit") {
  Rng rng(33);
  SECTION("|U| = 1") {
    const UnitarySet us(1, {ComplexMatrix::identity(2)},
                        UnitarySet::Kind::custom);
    CHECK(binding_bound_audit(us, random_density_matrix(2, rng)) ==
          Catch::Approx(1.0).margin(1e-10));
  }
  SECTION("two-basis n=2 sums to 2, the footnote identity") {
    const UnitarySet us = two_basis_set(2);
    for (int trial = 0; trial < 20; ++trial)
      CHECK(binding_bound_audit(us, random_density_matrix(4, rng)) ==
            Catch::Approx(2.0).margin(1e-9));
  }
  SECTION("haar set of 5 sums to 5") {
    const UnitarySet us = haar_set(2, 5, 7);
    for (int trial = 0; trial < 20; ++trial)
      CHECK(binding_bound_audit(us, random_density_matrix(4, rng)) ==
            Catch::Approx(5.0).margin(1e-9));
  }
  SECTION("|U| Tr(rho) identity across random sets") {
    for (int trial = 0; trial < 60; ++trial) {
      Rng r2 = Rng::stream(1500, trial);
      const std::size_t n = 1 + r2.below(2);
      const std::size_t k = 1 + r2.below(6);
      const UnitarySet us = haar_set(n, k, 31 + trial);
      CHECK(binding_bound_audit(us, random_density_matrix(us.dim(), r2)) ==
            Catch::Approx(static_cast<double>(k)).margin(1e-9));
    }
  }
}

TEST_CASE("trivial protocol") {
  SECTION("beta = 0 accepts every string") {
    const Protocol p = Protocol::trivial(2, 0);
    CHECK(p.a_bound() == Catch::Approx(2.0));
    for (const auto& x : all_bitstrings(2)) {
      const CVector bob = p.honest_commit_vector("00");
      const CVector acc = p.accept_vector(x, 0);
      CHECK(std::norm(inner(acc, bob)) == Catch::Approx(1.0));
    }
  }
  SECTION("beta = n is perfectly binding among basis states") {
    const Protocol p = Protocol::trivial(2, 2);
    CHECK(p.a_bound() == Catch::Approx(0.0));
    CHECK(xi(p.ensemble()) == Catch::Approx(2.0).margin(1e-10));
    const CVector bob = p.honest_commit_vector("01");
    CHECK(std::norm(inner(p.accept_vector("01", 0), bob)) ==
          Catch::Approx(1.0));
    CHECK(std::norm(inner(p.accept_vector("11", 0), bob)) ==
          Catch::Approx(0.0));
  }
  SECTION("xi equals beta: the closed form for revealed prefixes") {
    for (std::size_t beta : {0, 1, 2, 3, 4})
      CHECK(xi(Protocol::trivial(4, beta).ensemble()) ==
            Catch::Approx(static_cast<double>(beta)).margin(1e-9));
  }
}

TEST_CASE("security report") {
  SECTION("two-basis n=3 closed forms") {
    OptimizerSettings opts;
    opts.restarts = 4;
    opts.seed = 3;
    const SecurityReport rep =
        security_report(Protocol::lockcom(two_basis_set(3)), opts);
    CHECK(rep.a_bound == Catch::Approx(1.0));
    CHECK(rep.b_guess == Catch::Approx(2.169925001442312).margin(1e-9));
    // chi = 3 - h((1 - 2^-3/2)/2), the entropy of one two-state mixture.
    const double expect_chi =
        3.0 - binary_entropy(0.5 * (1.0 - std::pow(2.0, -1.5)));
    REQUIRE(rep.b_chi.has_value());
    CHECK(*rep.b_chi == Catch::Approx(expect_chi).margin(1e-9));
    CHECK(*rep.b_chi == Catch::Approx(2.0921476993980717).margin(1e-9));
    REQUIRE(rep.b_iacc.has_value());
    CHECK(rep.b_iacc->upper <= std::min(3.0, *rep.b_chi) + 1e-9);
    CHECK(rep.b_iacc->lower <= rep.b_iacc->upper + 1e-9);
  }
  SECTION("trivial(4,2)") {
    const SecurityReport rep = security_report(Protocol::trivial(4, 2), {},
                                               {.chi = true, .iacc = false});
    CHECK(rep.a_bound == Catch::Approx(2.0));
    CHECK(rep.b_guess == Catch::Approx(2.0).margin(1e-9));
  }
  SECTION("single-unitary LOCKCOM: a = 0, xi = n") {
    const UnitarySet us(2, {ComplexMatrix::identity(4)},
                        UnitarySet::Kind::custom);
    const SecurityReport rep = security_report(
        Protocol::lockcom(us), {}, {.chi = false, .iacc = false});
    CHECK(rep.a_bound == Catch::Approx(0.0));
    CHECK(rep.b_guess == Catch::Approx(2.0).margin(1e-10));
  }
  SECTION("deterministic given descriptor and seed") {
    OptimizerSettings opts;
    opts.restarts = 2;
    opts.max_iters = 50;
    opts.seed = 11;
    const Protocol p = Protocol::lockcom(haar_set(2, 3, 41));
    const SecurityReport a = security_report(p, opts);
    const SecurityReport b = security_report(p, opts);
    CHECK(a.b_guess == b.b_guess);
    CHECK(*a.b_chi == *b.b_chi);
    CHECK(a.b_iacc->lower == b.b_iacc->lower);
    CHECK(a.b_iacc->upper == b.b_iacc->upper);
  }
  SECTION("dimension cap enforced") {
    DimCaps caps;
    caps.ensemble_n = 2;
    CHECK_THROWS_WITH(
        security_report(Protocol::trivial(3, 1), {}, {}, caps),
        Catch::Matchers::ContainsSubstring("dimension cap"));
  }
  SECTION("a + b_guess stays above n for two-basis LOCKCOM") {
    for (std::size_t n : {1, 2, 3, 4}) {
      const Ensemble e = lockcom_ensemble(n, two_basis_unitaries(n));
      const double lhs = 1.0 + xi(e);
      const double expect =
          static_cast<double>(n) +
          std::log2(1.0 + std::pow(2.0, -static_cast<double>(n)));
      CHECK(lhs == Catch::Approx(expect).margin(1e-9));
      CHECK(lhs >= static_cast<double>(n));
    }
  }
}

TEST_CASE("haar locking trend: Iacc lower bounds non-increasing in k") {
  // Larger published sets lock harder; allow optimizer noise of 0.05 bits.
  OptimizerSettings opts;
  opts.restarts = 4;
  opts.max_iters = 150;
  opts.seed = 13;
  double prev = HUGE_VAL;
  for (std::size_t k : {2, 4, 8, 16}) {
    const Ensemble e = lockcom_ensemble(3, haar_set(3, k, 77));
    const IaccBracket b = accessible_info_bracket(e, opts);
    CHECK(b.lower <= prev + 0.05);
    prev = b.lower;
  }
}
