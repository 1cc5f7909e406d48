#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qbsc/info.hpp"
#include "test_util.hpp"

using namespace qbsc;
using namespace qbsc_test;

TEST_CASE("shannon mutual information") {
  SECTION("identity channel on two uniform bits") {
    Channel ch;
    ch.priors.assign(4, 0.25);
    ch.cond.assign(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 4; ++i) ch.cond[i][i] = 1.0;
    CHECK(shannon_mutual_information(ch) == Catch::Approx(2.0).margin(1e-12));
  }
  SECTION("constant channel carries nothing") {
    Channel ch;
    ch.priors.assign(4, 0.25);
    ch.cond.assign(4, {0.3, 0.7});
    CHECK(shannon_mutual_information(ch) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("half-identity channel, oracle by entropy arithmetic") {
    Channel ch;
    ch.priors.assign(4, 0.25);
    ch.cond.assign(4, std::vector<double>(4, 0.125));
    for (int i = 0; i < 4; ++i) ch.cond[i][i] += 0.5;
    // H(Y|X) = -(5/8)log2(5/8) - 3*(1/8)log2(1/8); H(Y) = 2.
    const double hyx = -(5.0 / 8.0) * std::log2(5.0 / 8.0) +
                       3.0 * (1.0 / 8.0) * 3.0;
    CHECK(shannon_mutual_information(ch) ==
          Catch::Approx(2.0 - hyx).margin(1e-12));
    CHECK(shannon_mutual_information(ch) ==
          Catch::Approx(0.4512050593046015).margin(1e-12));
  }
}

TEST_CASE("von neumann entropy") {
  Rng rng(41);
  CHECK(von_neumann_entropy(DensityMatrix::pure(random_pure_state(4, rng))) ==
        Catch::Approx(0.0).margin(1e-9));
  for (std::size_t n : {1, 2, 3})
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(std::size_t{1} << n)) ==
          Catch::Approx(static_cast<double>(n)).margin(1e-10));
  // Oracle: binary entropy of the smaller eigenvalue.
  const DensityMatrix mix = DensityMatrix::unchecked(ComplexMatrix::diagonal(
      {0.8535533905932737, 0.14644660940672624}));
  CHECK(von_neumann_entropy(mix) ==
        Catch::Approx(binary_entropy(0.14644660940672624)).margin(1e-12));
  CHECK(von_neumann_entropy(mix) == Catch::Approx(0.6008760366928561).margin(1e-10));
}

TEST_CASE("holevo information") {
  CHECK(holevo_chi(orthogonal_ensemble(2)) == Catch::Approx(2.0).margin(1e-9));
  Rng rng(43);
  CHECK(holevo_chi(identical_ensemble(2, 3, rng)) ==
        Catch::Approx(0.0).margin(1e-9));
  const Ensemble tb = lockcom_ensemble(1, two_basis_unitaries(1));
  CHECK(holevo_chi(tb) ==
        Catch::Approx(1.0 - 0.6008760366928561).margin(1e-9));
}

TEST_CASE("conditional collision entropy and xi") {
  for (std::size_t n : {1, 2, 3}) {
    CHECK(h2_conditional(orthogonal_ensemble(n)) ==
          Catch::Approx(0.0).margin(1e-10));
    CHECK(xi(orthogonal_ensemble(n)) ==
          Catch::Approx(static_cast<double>(n)).margin(1e-10));

    Rng rng = Rng::stream(700, n);
    const Ensemble same = identical_ensemble(n, 3, rng);
    CHECK(h2_conditional(same) ==
          Catch::Approx(static_cast<double>(n)).margin(1e-10));
    CHECK(xi(same) == Catch::Approx(0.0).margin(1e-10));

    // Two-basis LOCKCOM closed form: H2 = -log2((1 + 2^-n)/2).
    const Ensemble tb = lockcom_ensemble(n, two_basis_unitaries(n));
    const double expect =
        -std::log2(0.5 * (1.0 + std::pow(2.0, -static_cast<double>(n))));
    CHECK(h2_conditional(tb) == Catch::Approx(expect).margin(1e-9));
  }
  CHECK(h2_conditional(lockcom_ensemble(1, two_basis_unitaries(1))) ==
        Catch::Approx(0.4150374992788438).margin(1e-10));
  CHECK(xi(lockcom_ensemble(3, two_basis_unitaries(3))) ==
        Catch::Approx(2.169925001442312).margin(1e-9));
}

TEST_CASE("pretty-good measurement") {
  SECTION("orthogonal ensemble gives computational projectors") {
    const Povm m = pretty_good_measurement(orthogonal_ensemble(2));
    REQUIRE(m.operators.size() >= 4);
    for (std::size_t x = 0; x < 4; ++x) {
      ComplexMatrix proj(4, 4);
      proj(x, x) = 1.0;
      CHECK((m.operators[x] - proj).max_abs() < 1e-9);
    }
  }
  SECTION("two-basis LOCKCOM: M_x = rho_x since rho is maximally mixed") {
    const Ensemble e = lockcom_ensemble(2, two_basis_unitaries(2));
    const Povm m = pretty_good_measurement(e);
    for (std::size_t x = 0; x < e.size(); ++x)
      CHECK((m.operators[x] - e.states[x].matrix).max_abs() < 1e-9);
  }
  SECTION("completeness with reject outcome on random ensembles") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng = Rng::stream(800, trial);
      const Ensemble e = random_ensemble(2, 1 + rng.below(6), rng);
      const Povm m = pretty_good_measurement(e);  // constructor validates
      ComplexMatrix sum(e.dim(), e.dim());
      for (const auto& op : m.operators) sum += op;
      CHECK((sum - ComplexMatrix::identity(e.dim())).max_abs() < 1e-8);
    }
  }
}

TEST_CASE("guessing probability") {
  CHECK(guessing_probability(orthogonal_ensemble(2),
                             pretty_good_measurement(orthogonal_ensemble(2))) ==
        Catch::Approx(1.0).margin(1e-10));

  Rng rng(51);
  const Ensemble same = identical_ensemble(2, 4, rng);
  CHECK(guessing_probability(same, Povm::computational(4)) ==
        Catch::Approx(0.25).margin(1e-10));

  for (std::size_t n : {1, 2, 3}) {
    const Ensemble tb = lockcom_ensemble(n, two_basis_unitaries(n));
    CHECK(guessing_probability(tb, pretty_good_measurement(tb)) ==
          Catch::Approx(0.5 * (1.0 + std::pow(2.0, -static_cast<double>(n))))
              .margin(1e-9));
  }
}

TEST_CASE("helstrom optimum") {
  const Ensemble orth = trivial_ensemble(1, 1);
  CHECK(helstrom_optimum(orth).first == Catch::Approx(1.0).margin(1e-10));

  Rng rng(53);
  const Ensemble same = identical_ensemble(1, 3, rng);
  CHECK(helstrom_optimum(same).first == Catch::Approx(0.5).margin(1e-10));

  const Ensemble tb = lockcom_ensemble(1, two_basis_unitaries(1));
  CHECK(helstrom_optimum(tb).first ==
        Catch::Approx(0.5 * (1.0 + 1.0 / std::sqrt(2.0))).margin(1e-9));
  CHECK(helstrom_optimum(tb).first == Catch::Approx(0.8535533905932737).margin(1e-9));

  CHECK_THROWS_AS(helstrom_optimum(orthogonal_ensemble(2)),
                  std::invalid_argument);

  SECTION("oracle: value equals 1/2 + 1/2 ||p0 rho0 - p1 rho1||_1") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng r2 = Rng::stream(900, trial);
      const Ensemble e = random_ensemble(1, 4, r2);
      ComplexMatrix delta = e.states[0].matrix;
      delta *= Complex{e.priors[0], 0.0};
      ComplexMatrix t = e.states[1].matrix;
      t *= Complex{e.priors[1], 0.0};
      delta -= t;
      CHECK(helstrom_optimum(e).first ==
            Catch::Approx(0.5 + 0.5 * trace_norm_hermitian(delta))
                .margin(1e-10));
    }
  }
}

TEST_CASE("collision-entropy identity: PGM guessing probability equals 2^-H2") {
  // Exact identity for the square-root measurement, random ensembles.
  for (int trial = 0; trial < 60; ++trial) {
    Rng rng = Rng::stream(1000, trial);
    const std::size_t n = 1 + rng.below(3);
    const std::size_t d = 2 + rng.below(7);
    const Ensemble e = random_ensemble(n, d, rng);
    const double guess = guessing_probability(e, pretty_good_measurement(e));
    CHECK(guess ==
          Catch::Approx(std::pow(2.0, -h2_conditional(e))).margin(1e-10));
  }
  // And the PGM never beats the optimum on two-label ensembles.
  for (int trial = 0; trial < 40; ++trial) {
    Rng rng = Rng::stream(1100, trial);
    const Ensemble e = random_ensemble(1, 2 + rng.below(7), rng);
    CHECK(guessing_probability(e, pretty_good_measurement(e)) <=
          helstrom_optimum(e).first + 1e-10);
  }
}

TEST_CASE("accessible information bracket") {
  OptimizerSettings opts;
  opts.restarts = 6;
  opts.seed = 7;

  SECTION("orthogonal ensemble closes at n") {
    const IaccBracket b = accessible_info_bracket(orthogonal_ensemble(2), opts);
    CHECK(b.lower == Catch::Approx(2.0).margin(1e-9));
    CHECK(b.upper == Catch::Approx(2.0).margin(1e-9));
  }
  SECTION("identical states close at 0") {
    Rng rng(61);
    const IaccBracket b =
        accessible_info_bracket(identical_ensemble(2, 3, rng), opts);
    CHECK(b.lower == Catch::Approx(0.0).margin(1e-9));
    CHECK(b.upper == Catch::Approx(0.0).margin(1e-9));
  }
  SECTION("two-basis n=1 closes at the locking value") {
    const Ensemble tb = lockcom_ensemble(1, two_basis_unitaries(1));
    const IaccBracket b = accessible_info_bracket(tb, opts);
    CHECK(b.lower == Catch::Approx(0.3991239633071439).margin(1e-3));
    CHECK(b.upper == Catch::Approx(0.3991239633071439).margin(1e-3));
    CHECK(b.upper - b.lower < 1e-3);
  }
  SECTION("bracket soundness on random ensembles") {
    for (int trial = 0; trial < 6; ++trial) {
      Rng rng = Rng::stream(1200, trial);
      const Ensemble e = random_ensemble(2, 3, rng);
      OptimizerSettings light;
      light.restarts = 3;
      light.max_iters = 120;
      light.seed = 99 + trial;
      const IaccBracket b = accessible_info_bracket(e, light);
      CHECK(b.lower <= b.upper + 1e-9);
      CHECK(b.lower <= holevo_chi(e) + 1e-9);
      // The witness measurement reproduces the reported lower end.
      CHECK(shannon_mutual_information(induced_channel(e, b.best_measurement)) ==
            Catch::Approx(b.lower).margin(1e-9));
      b.best_measurement.validate();
    }
  }
}
