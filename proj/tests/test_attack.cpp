#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qbsc/attack.hpp"
#include "test_util.hpp"

using namespace qbsc;
using namespace qbsc_test;

TEST_CASE("bob's square-root measurement attack") {
  const auto [a1, b1] = bob_pgm_attack(orthogonal_ensemble(2));
  CHECK(a1 == Catch::Approx(1.0).margin(1e-10));
  CHECK(b1 == Catch::Approx(1.0).margin(1e-10));

  Rng rng(91);
  const auto [a2, b2] = bob_pgm_attack(identical_ensemble(2, 3, rng));
  CHECK(a2 == Catch::Approx(0.25).margin(1e-10));
  CHECK(b2 == Catch::Approx(0.25).margin(1e-10));

  const auto [a3, b3] =
      bob_pgm_attack(lockcom_ensemble(1, two_basis_unitaries(1)));
  CHECK(a3 == Catch::Approx(0.75).margin(1e-9));
  CHECK(b3 == Catch::Approx(0.75).margin(1e-9));

  // The measurement achieves its own bound.
  for (int trial = 0; trial < 20; ++trial) {
    Rng r2 = Rng::stream(1600, trial);
    const auto [a, b] = bob_pgm_attack(random_ensemble(2, 4, r2));
    CHECK(a >= b - 1e-10);
    CHECK(a == Catch::Approx(b).margin(1e-10));
  }
}

TEST_CASE("cheat bound") {
  CHECK(cheat_bound(0.0) == Catch::Approx(1.0));
  CHECK(cheat_bound(0.5) == Catch::Approx(0.0).margin(1e-12));
  CHECK(cheat_bound(0.02) == Catch::Approx(0.8));
  CHECK(cheat_bound(2.0) == 0.0);
  CHECK_THROWS_AS(cheat_bound(-0.1), std::invalid_argument);
}

TEST_CASE("trade-off constants") {
  const TradeoffConstants tc = constant_c();
  CHECK(tc.delta_star == Catch::Approx(7.609640474436811).margin(1e-6));
  CHECK(tc.gamma_star == Catch::Approx(5.28771237954945).margin(1e-6));
  CHECK(tc.c == tc.delta_star);
  // Algebraic identity at the optimum: 2^(1 - gamma*/4) = 4/5, so
  // delta(gamma*) = gamma* + log2(5) = 5 log2(5) - 4.
  CHECK(std::pow(2.0, 1.0 - tc.gamma_star / 4.0) ==
        Catch::Approx(0.8).margin(1e-6));
  CHECK(tradeoff_delta(tc.gamma_star) ==
        Catch::Approx(5.0 * std::log2(5.0) - 4.0).margin(1e-9));
}

TEST_CASE("reveal distributions under steering") {
  SECTION("identical states give identical distributions") {
    Rng rng(95);
    const PureState phi = random_pure_state(4, rng);
    RevealVerifier ver;
    ver.outcomes = {"0", "1"};
    ver.projectors = {ComplexMatrix::diagonal({1, 1, 0, 0}),
                      ComplexMatrix::diagonal({0, 0, 1, 1})};
    const auto [py, pz] = reveal_distributions(phi, phi, ver);
    CHECK(statistical_distance(py, pz) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("orthogonal states under a distinguishing verifier") {
    RevealVerifier ver;
    ver.outcomes = {"0", "1"};
    ver.projectors = {ComplexMatrix::diagonal({1, 0}),
                      ComplexMatrix::diagonal({0, 1})};
    const auto [py, pz] = reveal_distributions(
        PureState::basis(2, 0), PureState::basis(2, 1), ver);
    CHECK(py.probabilities[0] == Catch::Approx(1.0));
    CHECK(pz.probabilities[1] == Catch::Approx(1.0));
    CHECK(statistical_distance(py, pz) <= 1.0);
  }
  SECTION("data processing on random pairs") {
    for (int trial = 0; trial < 50; ++trial) {
      Rng rng = Rng::stream(1700, trial);
      const PureState a = random_pure_state(4, rng);
      const PureState b = random_pure_state(4, rng);
      // Random projective verifier from a Haar frame.
      const ComplexMatrix u = haar_unitary(4, rng);
      RevealVerifier ver;
      for (std::size_t k = 0; k < 3; ++k) {
        CVector col(4);
        for (std::size_t i = 0; i < 4; ++i) col[i] = u(i, k);
        ver.outcomes.push_back(std::to_string(k));
        ver.projectors.push_back(outer(col, col));
      }
      const auto [py, pz] = reveal_distributions(a, b, ver);
      const double overlap = std::abs(inner(a.amplitudes, b.amplitudes));
      CHECK(statistical_distance(py, pz) <=
            std::sqrt(1.0 - overlap * overlap) + 1e-9);
    }
  }
}

TEST_CASE("alice's hash attack on the trivial protocol") {
  const Protocol p = Protocol::trivial(4, 2);

  SECTION("kernel-aligned hash: reads only the unrevealed bits, d = 0") {
    // g depends on bits 3,4 only, so the revealed prefix tells Bob nothing
    // about g(x); equivalently the revealed coordinates lie in ker(g).
    const Gf2Hash g(4, 2, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    const AttackReport rep = alice_hash_attack(p, 2, 0, 1, &g);
    CHECK(rep.d_best == Catch::Approx(0.0).margin(1e-10));
    CHECK(rep.predicted_lower == Catch::Approx(4.0).margin(1e-6));
    CHECK(rep.simulated_sum == Catch::Approx(4.0).margin(1e-9));
    CHECK(rep.implied_a == Catch::Approx(2.0).margin(1e-9));
    // a + b = n with b = xi = beta = 2: the trivial protocol is optimal.
    CHECK(rep.implied_a + 2.0 == Catch::Approx(4.0).margin(1e-9));
    // Perfect steering: every hash value opens with certainty.
    for (double q : rep.per_y_reveal_probs)
      CHECK(q == Catch::Approx(1.0).margin(1e-9));
  }

  SECTION("sampled hashes: simulated sums dominate the predicted bound") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
      const AttackReport rep = alice_hash_attack(p, 2, 64, seed);
      CHECK(rep.simulated_sum >= rep.sum_q_tilde - 1e-9);
      if (rep.predicted_lower > 0.0) {
        CHECK(rep.sum_q_tilde >= rep.predicted_lower - 1e-6);
        CHECK(rep.simulated_sum >= rep.predicted_lower - 1e-6);
      }
    }
  }

  SECTION("oracle: per-x acceptance of the kernel-aligned attack") {
    // Exhaustive closed form: with g reading the suffix, steering is exact
    // and announcing any of the 2^(n-m) strings x with the measured suffix
    // succeeds iff its prefix matches Bob's held prefix distribution, which
    // the superposition makes uniform; summed over y every string opens with
    // total weight 1 within its own preimage, 4 strings per y x 4 values
    // of y / 4 = 4 total.
    const Gf2Hash g(4, 2, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    const AttackReport rep = alice_hash_attack(p, 2, 0, 1, &g);
    CHECK(rep.sum_q_tilde == Catch::Approx(4.0).margin(1e-9));
  }
}

TEST_CASE("alice's hash attack degenerates gracefully when fully revealing") {
  // trivial(2,2): Bob holds everything, epsilon is near maximal, yet the
  // honest reveal still counts: the sums stay >= 1.
  const Protocol p = Protocol::trivial(2, 2);
  const AttackReport rep = alice_hash_attack(p, 1, 32, 7);
  CHECK(rep.predicted_lower <= 1.0);
  CHECK(rep.simulated_sum >= 1.0 - 1e-9);
  CHECK(rep.sum_q_tilde >= 1.0 - 1e-9);
}

TEST_CASE("alice's hash attack on two-basis LOCKCOM") {
  const Protocol p = Protocol::lockcom(two_basis_set(3));
  const AttackReport rep = alice_hash_attack(p, 2, 64, 11);

  CHECK(rep.simulated_sum >= std::max(1.0, rep.predicted_lower) - 1e-6);

  SECTION("steering chain holds per hash value") {
    for (std::size_t y = 0; y < rep.per_y_reveal_probs.size(); ++y) {
      const double bound = cheat_bound(rep.per_y_trace_distances[y]);
      CHECK(rep.per_y_reveal_probs[y] >= bound - 1e-6);
    }
  }
  SECTION("averaging inequality from the chosen hash") {
    double avg = 0.0;
    for (double d : rep.per_y_dist_to_avg) avg += d;
    avg *= std::pow(2.0, -static_cast<double>(rep.s));
    CHECK(avg <= 2.0 * rep.d_best + 1e-9);
  }
  SECTION("y0 minimizes the distance to the average state") {
    const std::size_t y0 = bitstring_to_index(rep.y0);
    for (double d : rep.per_y_dist_to_avg)
      CHECK(rep.per_y_dist_to_avg[y0] <= d + 1e-12);
    CHECK(rep.per_y_dist_to_avg[y0] <= 2.0 * rep.epsilon + 1e-9);
  }
  SECTION("reports are deterministic under the seed") {
    const AttackReport again = alice_hash_attack(p, 2, 64, 11);
    CHECK(again.simulated_sum == rep.simulated_sum);
    CHECK(again.d_best == rep.d_best);
    CHECK(again.y0 == rep.y0);
  }

  CHECK_THROWS_AS(alice_hash_attack(p, 3, 16, 1), std::invalid_argument);
}

TEST_CASE("trade-off audit") {
  SECTION("two-basis n=3 passes") {
    const SecurityReport rep = security_report(
        Protocol::lockcom(two_basis_set(3)), {}, {.chi = false, .iacc = false});
    const TradeoffVerdict v = tradeoff_audit(rep);
    CHECK(v.pass);
    CHECK_FALSE(v.flagged());
    CHECK(v.a_bound + v.b_guess + v.c >=
          static_cast<double>(v.n) - 1e-9);
    CHECK(v.slack == Catch::Approx(1.0 + 2.169925001442312 +
                                   7.609640474436811 - 3.0)
                         .margin(1e-6));
  }
  SECTION("trivial(4,2) with its attack: equality before c") {
    const SecurityReport rep = security_report(
        Protocol::trivial(4, 2), {}, {.chi = false, .iacc = false});
    const Gf2Hash g(4, 2, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    const AttackReport atk = alice_hash_attack(Protocol::trivial(4, 2), 2, 0, 1, &g);
    const TradeoffVerdict v = tradeoff_audit(rep, &atk);
    CHECK(v.pass);
    CHECK(v.attack_pass);
    REQUIRE(v.attack_implied_a.has_value());
    // a + b = n exactly; c is pure slack here.
    CHECK(*v.attack_implied_a + v.b_guess ==
          Catch::Approx(4.0).margin(1e-6));
  }
  SECTION("hypothetical too-good protocol is flagged") {
    SecurityReport fake;
    fake.n = 8;
    fake.a_bound = 0.0;
    fake.b_guess = 0.0;
    const TradeoffVerdict v = tradeoff_audit(fake);
    CHECK_FALSE(v.pass);
    CHECK(v.flagged());
  }
}

TEST_CASE("parallel composition audit") {
  SECTION("chi is exactly additive on tensor squares") {
    for (int trial = 0; trial < 8; ++trial) {
      Rng rng = Rng::stream(1800, trial);
      const Ensemble e = random_ensemble(1 + rng.below(2), 2 + rng.below(3), rng);
      const ParallelAuditReport rep =
          parallel_audit(e, 2, ParallelMeasure::chi);
      CHECK(rep.additivity_gap == Catch::Approx(0.0).margin(1e-9));
    }
  }
  SECTION("identical-states ensembles measure zero at any power") {
    Rng rng(97);
    const Ensemble e = identical_ensemble(1, 2, rng);
    for (std::size_t copies : {1, 2, 3}) {
      CHECK(parallel_audit(e, copies, ParallelMeasure::chi).power_value ==
            Catch::Approx(0.0).margin(1e-9));
      CHECK(parallel_audit(e, copies, ParallelMeasure::xi).power_value ==
            Catch::Approx(0.0).margin(1e-9));
    }
  }
  SECTION("xi is additive for two-basis LOCKCOM squares") {
    const Ensemble e = lockcom_ensemble(1, two_basis_unitaries(1));
    const ParallelAuditReport rep = parallel_audit(e, 2, ParallelMeasure::xi);
    CHECK(rep.base_value ==
          Catch::Approx(1.0 + std::log2(0.75)).margin(1e-10));
    CHECK(rep.additivity_gap == Catch::Approx(0.0).margin(1e-9));
  }
  SECTION("dimension cap enforced") {
    DimCaps caps;
    caps.ensemble_n = 3;
    const Ensemble e = lockcom_ensemble(2, two_basis_unitaries(2));
    CHECK_THROWS_AS(parallel_audit(e, 2, ParallelMeasure::chi, caps),
                    std::invalid_argument);
  }
}
