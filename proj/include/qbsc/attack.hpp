#pragma once

#include <optional>
#include <string>

#include "qbsc/hash.hpp"
#include "qbsc/protocol.hpp"

namespace qbsc {

/// Bob runs the square-root measurement, whose achieved guessing
/// probability is exactly 2^-H2 and lower-bounds his optimum.
inline std::pair<double, double> bob_pgm_attack(const Ensemble& e) {
  const double achieved = guessing_probability(e, pretty_good_measurement(e));
  const double bound = std::pow(2.0, -h2_conditional(e));
  return {achieved, bound};
}

/// Steering onto a commitment within trace distance epsilon opens it with
/// probability at least 1 - sqrt(2 epsilon).
inline double cheat_bound(double epsilon) {
  if (epsilon < 0.0)
    throw std::invalid_argument("cheat_bound: epsilon must be nonnegative");
  return std::max(0.0, 1.0 - std::sqrt(2.0 * epsilon));
}

/// The constants of the trade-off bound: delta(gamma) =
/// gamma - log2(1 - 2^(1 - gamma/4)) minimized over gamma > 4.
struct TradeoffConstants {
  double gamma_star = 0.0;
  double delta_star = 0.0;
  double c = 0.0;
};

inline double tradeoff_delta(double gamma) {
  return gamma - std::log2(1.0 - std::pow(2.0, 1.0 - gamma / 4.0));
}

/// Golden-section minimization of delta(gamma); the closed forms are
/// gamma* = 4 (log2 5 - 1) and delta* = 5 log2 5 - 4.
inline TradeoffConstants constant_c() {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 4.0 + 1e-9, hi = 40.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = tradeoff_delta(x1), f2 = tradeoff_delta(x2);
  while (hi - lo > 1e-9) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = tradeoff_delta(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = tradeoff_delta(x2);
    }
  }
  TradeoffConstants out;
  out.gamma_star = 0.5 * (lo + hi);
  out.delta_star = tradeoff_delta(out.gamma_star);
  out.c = out.delta_star;
  return out;
}

/// Outcome distribution of a reveal-phase measurement: opened strings plus
/// the reject outcome.
struct RevealDistribution {
  std::vector<std::string> outcomes;
  std::vector<double> probabilities;
};

/// Acceptance projectors per openable outcome, acting on the joint space the
/// states live on. Whatever they leave uncovered is the reject outcome.
struct RevealVerifier {
  std::vector<std::string> outcomes;
  std::vector<ComplexMatrix> projectors;
};

inline double statistical_distance(const RevealDistribution& a,
                                   const RevealDistribution& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i)
    d += std::abs(a.probabilities[i] - b.probabilities[i]);
  return 0.5 * d;
}

/// The reveal phase regarded as a measurement on each of two pure states.
/// Confirms the data-processing fact delta(P_Y, P_Z) <= delta(phi0, psi0);
/// a violation means the verifier is not a valid measurement.
inline std::pair<RevealDistribution, RevealDistribution>
reveal_distributions(const PureState& phi0, const PureState& psi0,
                            const RevealVerifier& verifier) {
  if (phi0.dim != psi0.dim)
    throw std::invalid_argument(
        "reveal_distributions: state dimension mismatch");
  auto run = [&](const PureState& st) {
    RevealDistribution dist;
    dist.outcomes = verifier.outcomes;
    double total = 0.0;
    for (const auto& proj : verifier.projectors) {
      if (proj.rows() != st.dim)
        throw std::invalid_argument(
            "reveal_distributions: projector dimension mismatch");
      const CVector pv = proj * st.amplitudes;
      const double p = std::max(inner(st.amplitudes, pv).real(), 0.0);
      dist.probabilities.push_back(p);
      total += p;
    }
    dist.outcomes.push_back("reject");
    dist.probabilities.push_back(std::max(0.0, 1.0 - total));
    return dist;
  };
  auto py = run(phi0);
  auto pz = run(psi0);

  const double overlap = std::abs(inner(phi0.amplitudes, psi0.amplitudes));
  const double state_dist = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
  if (statistical_distance(py, pz) > state_dist + kHermitianTol)
    throw std::logic_error(
        "reveal_distributions: measured distance exceeds the trace "
        "distance; the verifier is not a measurement");
  return {std::move(py), std::move(pz)};
}

/// Full record of Alice's hash-superposition attack. Everything needed to
/// re-check the steering chain and the averaging inequality per hash value is
/// serialized: per-y trace distances, distances to the average state and
/// honest-reveal success probabilities.
struct AttackReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t s = 0;  // n - m
  Gf2Hash chosen_hash;
  double d_best = 0.0;          // measured d(E_g) of the chosen hash
  double epsilon = 0.0;         // = d_best, the tighter sound choice
  double epsilon_family = 0.0;  // a-priori family bound (1/2) 2^-(m-b)/2
  std::string y0;
  std::vector<double> per_y_trace_distances;  // delta(sigma_y0, sigma_y)
  std::vector<double> per_y_dist_to_avg;      // delta(sigma, sigma_y)
  std::vector<double> per_y_reveal_probs;     // q~_y, honest reveal of y
  double predicted_lower = 0.0;  // max(0, 2^(n-m)(1 - 2 sqrt(2 eps)))
  double sum_q_tilde = 0.0;      // sum_y q~_y
  double simulated_sum = 0.0;    // sum_x p~_x, per-x targeted openings
  double implied_a = 0.0;        // log2(simulated_sum)
  std::size_t hash_samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

/// |psi^g_y> = sum_{x in g^-1(y)} |x>|phi_x> / sqrt|g^-1(y)| on the
/// A x R x B register layout.
inline CVector attack_superposition(const Protocol& p, const Ensemble& e,
                                    const std::vector<std::size_t>& preimage) {
  const std::size_t na = std::size_t{1} << p.n;
  const std::size_t rd = p.rand_dim();
  const std::size_t bd = p.bob_dim();
  CVector v(na * rd * bd, Complex{0.0, 0.0});
  const double w = 1.0 / std::sqrt(static_cast<double>(preimage.size()));
  for (std::size_t x : preimage) {
    const CVector phi = p.honest_commit_vector(e.labels[x]);
    const std::size_t a = bitstring_to_index(e.labels[x]);
    for (std::size_t k = 0; k < rd * bd; ++k) v[a * rd * bd + k] = w * phi[k];
  }
  return v;
}

/// Apply a unitary on the A x R factor of an (A x R) x B vector.
inline CVector steer(const ComplexMatrix& u, const CVector& v,
                     std::size_t local, std::size_t bob) {
  CVector out(v.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < local; ++i)
    for (std::size_t j = 0; j < local; ++j) {
      const Complex f = u(i, j);
      if (f == Complex{0.0, 0.0}) continue;
      for (std::size_t e = 0; e < bob; ++e) out[i * bob + e] += f * v[j * bob + e];
    }
  return out;
}

}  // namespace detail

/// The hash-superposition attack. Alice samples two-universal hashes, keeps the
/// surjective one of least measured d(E_g), commits to the superposition over
/// a preimage of y0 (the hash value closest to the average state) and steers
/// with Uhlmann unitaries toward every other hash value before opening
/// honestly. Reports both the analytic lower bound on the number of openable
/// strings and the exactly simulated sums.
inline AttackReport alice_hash_attack(
    const Protocol& p, std::size_t m, std::size_t hash_samples,
    std::uint64_t seed, const Gf2Hash* forced_hash = nullptr,
    const DimCaps& caps = DimCaps::from_environment()) {
  if (m >= p.n)
    throw std::invalid_argument("alice_hash_attack: need n - m >= 1");
  if (p.n > caps.attack_n)
    throw std::invalid_argument(
        "alice_hash_attack: n exceeds the attack dimension cap (" +
        std::to_string(caps.attack_n) + "); raise QBSC_DIM_CAP to override");
  if (hash_samples == 0 && forced_hash == nullptr)
    throw std::invalid_argument("alice_hash_attack: need at least one hash");

  AttackReport rep;
  rep.n = p.n;
  rep.m = m;
  rep.s = p.n - m;
  rep.seed = seed;
  rep.hash_samples = hash_samples;

  const Ensemble e = p.ensemble();
  const double b_guess = xi(e);
  rep.epsilon_family =
      0.5 * std::pow(2.0, -0.5 * (static_cast<double>(m) - b_guess));

  // Hash selection: min measured d(E_g) among surjective samples (first
  // minimum wins). Surjectivity keeps every preimage nonempty and equal
  // sized, the regime the proof's averaging argument runs in.
  if (forced_hash != nullptr) {
    if (forced_hash->n != p.n || forced_hash->s != rep.s)
      throw std::invalid_argument(
          "alice_hash_attack: forced hash shape must be (n - m) x n");
    if (!forced_hash->surjective())
      throw std::invalid_argument(
          "alice_hash_attack: forced hash must be surjective");
    rep.chosen_hash = *forced_hash;
    rep.d_best = hashed_nonuniformity(e, rep.chosen_hash);
  } else {
    rep.d_best = HUGE_VAL;
    for (std::size_t i = 0; i < hash_samples; ++i) {
      Rng rng = Rng::stream(seed, i);
      const Gf2Hash g = sample_hash(p.n, rep.s, rng);
      if (!g.surjective()) continue;
      const double d = hashed_nonuniformity(e, g);
      if (d < rep.d_best) {
        rep.d_best = d;
        rep.chosen_hash = g;
      }
    }
    if (!std::isfinite(rep.d_best))
      throw std::runtime_error(
          "alice_hash_attack: no surjective hash among the samples");
  }
  rep.epsilon = rep.d_best;
  rep.predicted_lower =
      std::max(0.0, std::pow(2.0, static_cast<double>(rep.s)) *
                        (1.0 - 2.0 * std::sqrt(2.0 * rep.epsilon)));

  const HashedEnsemble he = hashed_ensemble(e, rep.chosen_hash);
  const DensityMatrix sigma = average_state(e);
  const std::size_t ny = he.labels.size();

  rep.per_y_dist_to_avg.resize(ny);
  std::size_t y0 = 0;
  for (std::size_t y = 0; y < ny; ++y) {
    rep.per_y_dist_to_avg[y] =
        he.empty[y] ? 1.0 : trace_distance(he.states[y], sigma);
    if (rep.per_y_dist_to_avg[y] < rep.per_y_dist_to_avg[y0]) y0 = y;
  }
  rep.y0 = he.labels[y0];

  const std::size_t local = (std::size_t{1} << p.n) * p.rand_dim();
  const std::size_t bd = p.bob_dim();
  const CVector psi0 = detail::attack_superposition(p, e, he.preimages[y0]);

  rep.per_y_trace_distances.resize(ny);
  rep.per_y_reveal_probs.resize(ny);
  const std::size_t rd = p.rand_dim();
  for (std::size_t y = 0; y < ny; ++y) {
    rep.per_y_trace_distances[y] =
        y == y0 ? 0.0 : trace_distance(he.states[y0], he.states[y]);

    const CVector target = detail::attack_superposition(p, e, he.preimages[y]);
    CVector steered;
    if (y == y0) {
      steered = psi0;
    } else {
      const ComplexMatrix v = uhlmann_unitary(
          PureState(local * bd, target), PureState(local * bd, psi0), local);
      steered = detail::steer(v, psi0, local, bd);
    }

    // Exact reveal simulation on the steered state. Honest: Alice measures
    // her (x, r) registers and announces what she saw; q~_y collects the
    // accepted openings that land in g^-1(y). Targeted: she announces x
    // regardless of the label register, which can only do better, and is the
    // per-x strategy behind sum_x p~_x.
    double q_honest = 0.0;
    double q_targeted = 0.0;
    for (std::size_t x : he.preimages[y]) {
      const std::size_t a_x = bitstring_to_index(e.labels[x]);
      for (std::size_t r = 0; r < rd; ++r) {
        const CVector w = p.accept_vector(e.labels[x], r);
        for (std::size_t a = 0; a < (std::size_t{1} << p.n); ++a) {
          Complex amp = 0.0;
          for (std::size_t eb = 0; eb < bd; ++eb)
            amp += std::conj(w[eb]) * steered[(a * rd + r) * bd + eb];
          const double contrib = std::norm(amp);
          q_targeted += contrib;
          if (a == a_x) q_honest += contrib;
        }
      }
    }
    rep.per_y_reveal_probs[y] = q_honest;
    rep.sum_q_tilde += q_honest;
    rep.simulated_sum += q_targeted;
  }
  rep.implied_a = std::log2(rep.simulated_sum);
  return rep;
}

/// Verdict of checking a + b + c >= n against a security report and,
/// optionally, the constructive attack's implied a.
struct TradeoffVerdict {
  std::size_t n = 0;
  double a_bound = 0.0;
  double b_guess = 0.0;
  double c = 0.0;
  double slack = 0.0;  // a + b + c - n
  bool pass = false;
  std::optional<double> attack_implied_a;
  std::optional<double> attack_slack;
  bool attack_pass = true;

  bool flagged() const { return !pass || !attack_pass; }
};

/// Checks the impossibility bound. A failure is an implementation alarm, not
/// a discovery: no constructible protocol can violate the bound.
inline TradeoffVerdict tradeoff_audit(
    const SecurityReport& report,
    const AttackReport* attack = nullptr) {
  TradeoffVerdict v;
  v.n = report.n;
  v.a_bound = report.a_bound;
  v.b_guess = report.b_guess;
  v.c = constant_c().c;
  v.slack = v.a_bound + v.b_guess + v.c - static_cast<double>(v.n);
  v.pass = v.slack >= -1e-9;
  if (attack != nullptr) {
    v.attack_implied_a = attack->implied_a;
    v.attack_slack = *v.attack_implied_a + v.b_guess + v.c -
                     static_cast<double>(v.n);
    v.attack_pass = *v.attack_slack >= -1e-9;
  }
  return v;
}

/// Ensemble of `copies` parallel executions: labels concatenate, priors
/// multiply, states tensor.
inline Ensemble tensor_power_ensemble(const Ensemble& e, std::size_t copies) {
  if (copies == 0)
    throw std::invalid_argument("tensor_power_ensemble: copies must be >= 1");
  Ensemble out = e;
  for (std::size_t c = 1; c < copies; ++c) {
    std::vector<std::string> labels;
    std::vector<double> priors;
    std::vector<DensityMatrix> states;
    labels.reserve(out.size() * e.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < e.size(); ++j) {
        labels.push_back(out.labels[i] + e.labels[j]);
        priors.push_back(out.priors[i] * e.priors[j]);
        states.push_back(DensityMatrix::unchecked(
            tensor(out.states[i].matrix, e.states[j].matrix)));
      }
    out = Ensemble(out.n + e.n, std::move(labels), std::move(priors),
                   std::move(states));
  }
  return out;
}

enum class ParallelMeasure { chi, xi };

struct ParallelAuditReport {
  std::size_t copies = 0;
  std::string measure;
  double base_value = 0.0;
  double power_value = 0.0;
  double additivity_gap = 0.0;  // power - copies * base
};

/// Parallel-composition check: chi is exactly additive over tensor powers, and the
/// blockwise H2 makes xi additive too.
inline ParallelAuditReport parallel_audit(
    const Ensemble& e, std::size_t copies, ParallelMeasure measure,
    const DimCaps& caps = DimCaps::from_environment()) {
  double dim_bits = std::log2(static_cast<double>(e.dim())) *
                    static_cast<double>(copies);
  if (dim_bits > static_cast<double>(caps.ensemble_n) + 1e-9)
    throw std::invalid_argument(
        "parallel_audit: tensor power exceeds the dimension cap");
  const Ensemble power = tensor_power_ensemble(e, copies);
  ParallelAuditReport rep;
  rep.copies = copies;
  if (measure == ParallelMeasure::chi) {
    rep.measure = "chi";
    rep.base_value = holevo_chi(e);
    rep.power_value = holevo_chi(power);
  } else {
    rep.measure = "xi";
    rep.base_value = xi(e);
    rep.power_value = xi(power);
  }
  rep.additivity_gap =
      rep.power_value - static_cast<double>(copies) * rep.base_value;
  return rep;
}

}  // namespace qbsc
