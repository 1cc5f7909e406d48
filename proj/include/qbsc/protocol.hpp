#pragma once

#include <cstdlib>
#include <optional>
#include <string>

#include "qbsc/info.hpp"

namespace qbsc {

/// Dimension limits for whole-ensemble computations and for attack
/// simulations holding joint Alice+Bob states. Violations are errors, never
/// silent truncation; the QBSC_DIM_CAP environment variable raises both.
struct DimCaps {
  std::size_t ensemble_n = 6;
  std::size_t attack_n = 4;

  static DimCaps from_environment();
};

inline DimCaps DimCaps::from_environment() {
  DimCaps caps;
  if (const char* v = std::getenv("QBSC_DIM_CAP")) {
    const std::size_t cap = std::strtoull(v, nullptr, 10);
    if (cap > 0) {
      caps.ensemble_n = cap;
      caps.attack_n = cap;
    }
  }
  return caps;
}

/// The published unitary set of a LOCKCOM instance.
struct UnitarySet {
  enum class Kind { two_basis, haar, custom };

  std::size_t n = 0;
  std::vector<ComplexMatrix> unitaries;
  Kind kind = Kind::custom;
  std::uint64_t seed = 0;  // meaningful for haar sets

  UnitarySet() = default;
  UnitarySet(std::size_t n_, std::vector<ComplexMatrix> us, Kind kind_,
             std::uint64_t seed_ = 0)
      : n(n_), unitaries(std::move(us)), kind(kind_), seed(seed_) {
    const std::size_t d = std::size_t{1} << n;
    if (unitaries.empty())
      throw std::invalid_argument("unitary set: need at least one element");
    for (const auto& u : unitaries) {
      if (u.rows() != d || u.cols() != d)
        throw std::invalid_argument("unitary set: wrong dimension");
      if (unitarity_defect(u) > kHermitianTol)
        throw std::invalid_argument("unitary set: element not unitary");
    }
  }

  std::size_t size() const { return unitaries.size(); }
  std::size_t dim() const { return std::size_t{1} << n; }

  std::string kind_name() const {
    switch (kind) {
      case Kind::two_basis: return "two_basis";
      case Kind::haar: return "haar";
      default: return "custom";
    }
  }
};

/// {I^xn, H^xn}: the efficient two-basis instance.
inline UnitarySet two_basis_set(std::size_t n) {
  if (n == 0) throw std::invalid_argument("two_basis_set: n must be >= 1");
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix h1(2, 2);
  h1(0, 0) = r;
  h1(0, 1) = r;
  h1(1, 0) = r;
  h1(1, 1) = -r;
  ComplexMatrix h = h1;
  for (std::size_t k = 1; k < n; ++k) h = tensor(h, h1);
  return UnitarySet(n, {ComplexMatrix::identity(std::size_t{1} << n), h},
                    UnitarySet::Kind::two_basis);
}

/// k unitaries drawn independently from the Haar measure, one generator
/// stream per element so the set is seed-reproducible.
inline UnitarySet haar_set(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("haar_set: k must be >= 1");
  std::vector<ComplexMatrix> us;
  us.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    Rng rng = Rng::stream(seed, r);
    us.push_back(haar_unitary(std::size_t{1} << n, rng));
  }
  return UnitarySet(n, std::move(us), UnitarySet::Kind::haar, seed);
}

inline Ensemble lockcom_ensemble(std::size_t n, const UnitarySet& us) {
  return lockcom_ensemble(n, us.unitaries);
}

/// What Bob holds between commit and reveal.
struct CommitTranscript {
  std::size_t n = 0;
  std::string x;
  std::size_t r = 0;
  DensityMatrix commit_state;
  std::optional<std::pair<std::string, std::size_t>> revealed;
  std::optional<bool> accepted;
};

inline CommitTranscript commit(const std::string& x, std::size_t r,
                               const UnitarySet& us) {
  if (x.size() != us.n)
    throw std::invalid_argument("commit: string length must be n");
  if (r >= us.size())
    throw std::invalid_argument("commit: basis index out of range");
  const std::size_t d = us.dim();
  const std::size_t xi = bitstring_to_index(x);
  CVector col(d);
  for (std::size_t i = 0; i < d; ++i) col[i] = us.unitaries[r](i, xi);
  CommitTranscript t;
  t.n = us.n;
  t.x = x;
  t.r = r;
  t.commit_state = DensityMatrix::unchecked(outer(col, col));
  return t;
}

/// Probability that Bob accepts the opening (x, r): he applies U_r^dag,
/// measures in the computational basis and compares. Honest openings give 1.
/// The transcript records the announced opening; `accepted` is set when the
/// outcome is certain either way.
inline double reveal_verify(CommitTranscript& t, const std::string& x,
                            std::size_t r, const UnitarySet& us) {
  if (x.size() != us.n)
    throw std::invalid_argument("reveal_verify: string length must be n");
  if (r >= us.size())
    throw std::invalid_argument("reveal_verify: basis index out of range");
  if (t.commit_state.dim != us.dim())
    throw std::invalid_argument("reveal_verify: transcript dimension mismatch");
  const std::size_t d = us.dim();
  const std::size_t xi = bitstring_to_index(x);
  CVector col(d);
  for (std::size_t i = 0; i < d; ++i) col[i] = us.unitaries[r](i, xi);
  // <x| U_r^dag rho U_r |x>
  Complex p = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      p += std::conj(col[i]) * t.commit_state.matrix(i, j) * col[j];
  t.revealed = {x, r};
  if (p.real() >= 1.0 - 1e-12)
    t.accepted = true;
  else if (p.real() <= 1e-12)
    t.accepted = false;
  else
    t.accepted.reset();
  return p.real();
}

/// sum_{x,r} <x|U_r^dag rho U_r|x>; collapses to |U| Tr(rho) identically,
/// which is the footnote bound 2^a on Alice's openings.
inline double binding_bound_audit(const UnitarySet& us,
                                  const DensityMatrix& rho) {
  if (rho.dim != us.dim())
    throw std::invalid_argument("binding_bound_audit: dimension mismatch");
  double total = 0.0;
  for (std::size_t r = 0; r < us.size(); ++r) {
    const ComplexMatrix conj =
        us.unitaries[r].adjoint() * rho.matrix * us.unitaries[r];
    for (std::size_t x = 0; x < us.dim(); ++x) total += conj(x, x).real();
  }
  return total;
}

/// A commitment protocol reduced to what the security analysis exercises: the commit
/// ensemble plus a verification predicate. LOCKCOM purifies the honest basis
/// choice r into an Alice-held register so attack states stay pure.
struct Protocol {
  enum class Kind { lockcom, trivial };

  Kind kind = Kind::lockcom;
  std::size_t n = 0;
  std::size_t beta = 0;  // trivial only
  UnitarySet unitaries;  // lockcom only

  static Protocol lockcom(UnitarySet us) {
    Protocol p;
    p.kind = Kind::lockcom;
    p.n = us.n;
    p.unitaries = std::move(us);
    return p;
  }

  static Protocol trivial(std::size_t n, std::size_t beta) {
    if (beta > n)
      throw std::invalid_argument("trivial protocol: beta must be <= n");
    Protocol p;
    p.kind = Kind::trivial;
    p.n = n;
    p.beta = beta;
    return p;
  }

  std::string kind_name() const {
    return kind == Kind::lockcom ? "lockcom" : "trivial";
  }

  Ensemble ensemble() const {
    return kind == Kind::lockcom ? lockcom_ensemble(n, unitaries)
                                 : trivial_ensemble(n, beta);
  }

  /// log2 of the binding bound: the footnote count log2|U| for LOCKCOM, the
  /// direct superposition-attack count n - beta for the baseline.
  double a_bound() const {
    return kind == Kind::lockcom
               ? std::log2(static_cast<double>(unitaries.size()))
               : static_cast<double>(n - beta);
  }

  /// Dimension of Bob's system during the holding phase.
  std::size_t bob_dim() const {
    return std::size_t{1} << (kind == Kind::lockcom ? n : beta);
  }

  /// Dimension of the honest-randomness register Alice keeps when the commit
  /// phase is purified (|U| for LOCKCOM, trivial otherwise).
  std::size_t rand_dim() const {
    return kind == Kind::lockcom ? unitaries.size() : 1;
  }

  /// Honest purified commit vector for input |x> on rand x bob registers:
  /// LOCKCOM: sum_r |r>(U_r|x>)/sqrt|U|; trivial: |x_1..x_beta>.
  CVector honest_commit_vector(const std::string& x) const {
    const std::size_t xi = bitstring_to_index(x);
    if (kind == Kind::trivial) {
      return basis_vector(bob_dim(), bitstring_to_index(x.substr(0, beta)));
    }
    const std::size_t d = bob_dim();
    const std::size_t k = rand_dim();
    CVector v(k * d, Complex{0.0, 0.0});
    const double w = 1.0 / std::sqrt(static_cast<double>(k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t i = 0; i < d; ++i)
        v[r * d + i] = w * unitaries.unitaries[r](i, xi);
    return v;
  }

  /// Bob accepts the opening (x, r) exactly on this state of his system.
  CVector accept_vector(const std::string& x, std::size_t r) const {
    const std::size_t xi = bitstring_to_index(x);
    if (kind == Kind::trivial)
      return basis_vector(bob_dim(), bitstring_to_index(x.substr(0, beta)));
    const std::size_t d = bob_dim();
    CVector col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = unitaries.unitaries[r](i, xi);
    return col;
  }
};

/// (n, a, b) under each concealment measure, all reproducible from the
/// protocol descriptor and the seed.
struct SecurityReport {
  std::string protocol_kind;
  std::string bases_kind;  // two_basis | haar | custom | - (trivial)
  std::size_t n = 0;
  std::size_t beta = 0;
  std::size_t unitary_count = 0;
  double a_bound = 0.0;
  double b_guess = 0.0;                  // xi(E)
  std::optional<double> b_chi;           // Holevo chi
  std::optional<IaccBracket> b_iacc;     // accessible-information bracket
  std::uint64_t seed = 0;
};

/// Which concealment measures security_report computes. xi is always on:
/// it is the quantity the trade-off bound constrains.
struct MeasureSelection {
  bool chi = true;
  bool iacc = true;
};

inline SecurityReport security_report(const Protocol& p,
                                      const OptimizerSettings& opts = {},
                                      const MeasureSelection& measures = {},
                                      const DimCaps& caps = DimCaps::from_environment()) {
  if (p.n > caps.ensemble_n)
    throw std::invalid_argument(
        "security_report: n exceeds the ensemble dimension cap (" +
        std::to_string(caps.ensemble_n) + "); raise QBSC_DIM_CAP to override");
  const Ensemble e = p.ensemble();
  SecurityReport rep;
  rep.protocol_kind = p.kind_name();
  rep.bases_kind =
      p.kind == Protocol::Kind::lockcom ? p.unitaries.kind_name() : "-";
  rep.n = p.n;
  rep.beta = p.beta;
  rep.unitary_count = p.kind == Protocol::Kind::lockcom ? p.unitaries.size() : 0;
  rep.a_bound = p.a_bound();
  rep.b_guess = xi(e);
  if (measures.chi) rep.b_chi = holevo_chi(e);
  if (measures.iacc) rep.b_iacc = accessible_info_bracket(e, opts);
  rep.seed = opts.seed;
  return rep;
}

}  // namespace qbsc
