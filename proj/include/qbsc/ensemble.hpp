#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "qbsc/state.hpp"

namespace qbsc {

/// All n-bit strings in integer order, most significant bit first.
inline std::vector<std::string> all_bitstrings(std::size_t n) {
  if (n > 20) throw std::invalid_argument("bitstrings: n too large");
  std::vector<std::string> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
    std::string s(n, '0');
    for (std::size_t b = 0; b < n; ++b)
      if (v & (std::size_t{1} << (n - 1 - b))) s[b] = '1';
    out.push_back(std::move(s));
  }
  return out;
}

inline std::size_t bitstring_to_index(const std::string& s) {
  std::size_t v = 0;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bitstring: invalid character");
    v = (v << 1) | static_cast<std::size_t>(c - '0');
  }
  return v;
}

/// Labeled family {p_x, rho_x} of priors and states; Bob's view of the
/// commitment. Labels are bit strings but any distinct strings are allowed so
/// hashed ensembles can reuse the type.
struct Ensemble {
  std::size_t n = 0;  // label length in bits
  std::vector<std::string> labels;
  std::vector<double> priors;
  std::vector<DensityMatrix> states;

  Ensemble() = default;
  Ensemble(std::size_t n_, std::vector<std::string> labels_,
           std::vector<double> priors_, std::vector<DensityMatrix> states_)
      : n(n_),
        labels(std::move(labels_)),
        priors(std::move(priors_)),
        states(std::move(states_)) {
    validate();
  }

  void validate() const {
    if (labels.size() != priors.size() || labels.size() != states.size())
      throw std::invalid_argument(
          "ensemble: labels, priors and states must have equal length");
    if (labels.empty()) throw std::invalid_argument("ensemble: empty");
    double sum = 0.0;
    for (double p : priors) {
      if (!(p >= 0.0))
        throw std::invalid_argument("ensemble: priors must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kHermitianTol)
      throw std::invalid_argument("ensemble: priors must sum to 1 within 1e-9");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
      throw std::invalid_argument("ensemble: labels must be distinct");
    for (const auto& l : labels)
      if (l.size() != n)
        throw std::invalid_argument("ensemble: label length must equal n");
    for (const auto& s : states)
      if (s.dim != states.front().dim)
        throw std::invalid_argument("ensemble: states must share one dimension");
  }

  std::size_t dim() const { return states.front().dim; }
  std::size_t size() const { return labels.size(); }

  bool has_full_label_set() const {
    if (labels.size() != (std::size_t{1} << n)) return false;
    std::set<std::string> seen(labels.begin(), labels.end());
    for (const auto& l : all_bitstrings(n))
      if (!seen.count(l)) return false;
    return true;
  }

  void require_full_label_set(const char* who) const {
    if (!has_full_label_set())
      throw std::invalid_argument(std::string(who) +
                                  ": ensemble must carry all 2^n labels");
  }
};

/// Finite measurement: positive operators summing to identity.
struct Povm {
  std::vector<ComplexMatrix> operators;

  Povm() = default;
  explicit Povm(std::vector<ComplexMatrix> ops) : operators(std::move(ops)) {
    validate();
  }

  static Povm unchecked(std::vector<ComplexMatrix> ops) {
    Povm p;
    p.operators = std::move(ops);
    return p;
  }

  void validate() const {
    if (operators.empty()) throw std::invalid_argument("povm: empty");
    const std::size_t d = operators.front().rows();
    ComplexMatrix sum(d, d);
    for (const auto& op : operators) {
      if (op.rows() != d || op.cols() != d)
        throw std::invalid_argument("povm: operators must share one dimension");
      if (op.hermiticity_defect() > kHermitianTol)
        throw std::invalid_argument("povm: operator not Hermitian");
      const auto sd = eig_hermitian(op);
      if (sd.eigenvalues.back() < -kHermitianTol)
        throw std::invalid_argument("povm: operator not positive semidefinite");
      sum += op;
    }
    if ((sum - ComplexMatrix::identity(d)).max_abs() > 1e-8)
      throw std::invalid_argument("povm: operators must sum to identity");
  }

  std::size_t dim() const { return operators.front().rows(); }

  static Povm computational(std::size_t d) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
      ComplexMatrix p(d, d);
      p(i, i) = 1.0;
      ops.push_back(std::move(p));
    }
    return unchecked(std::move(ops));
  }
};

/// Classical X -> Y channel induced by measuring an ensemble.
struct Channel {
  std::vector<std::vector<double>> cond;  // cond[x][y] = P(y|x)
  std::vector<double> priors;             // P(x)

  void validate() const {
    if (cond.size() != priors.size())
      throw std::invalid_argument("channel: row count must match priors");
    for (const auto& row : cond) {
      double s = 0.0;
      for (double p : row) {
        if (!(p >= -kHermitianTol))
          throw std::invalid_argument("channel: negative conditional");
        s += p;
      }
      if (std::abs(s - 1.0) > kHermitianTol)
        throw std::invalid_argument("channel: rows must sum to 1 within 1e-9");
    }
  }
};

/// rho = sum_x p_x rho_x.
inline DensityMatrix average_state(const Ensemble& e) {
  ComplexMatrix rho(e.dim(), e.dim());
  for (std::size_t k = 0; k < e.size(); ++k) {
    ComplexMatrix t = e.states[k].matrix;
    t *= Complex{e.priors[k], 0.0};
    rho += t;
  }
  return DensityMatrix::unchecked(std::move(rho));
}

/// Bob's pre-reveal view of LOCKCOM with basis choice unknown:
/// rho_x = (1/|U|) sum_r U_r |x><x| U_r^dag, uniform priors.
inline Ensemble lockcom_ensemble(std::size_t n,
                                 const std::vector<ComplexMatrix>& unitaries) {
  if (unitaries.empty())
    throw std::invalid_argument("lockcom_ensemble: need at least one unitary");
  const std::size_t d = std::size_t{1} << n;
  for (const auto& u : unitaries)
    if (u.rows() != d || u.cols() != d)
      throw std::invalid_argument("lockcom_ensemble: unitary dimension mismatch");

  const double w = 1.0 / static_cast<double>(unitaries.size());
  std::vector<DensityMatrix> states;
  states.reserve(d);
  for (std::size_t x = 0; x < d; ++x) {
    ComplexMatrix rho(d, d);
    for (const auto& u : unitaries) {
      CVector col(d);
      for (std::size_t i = 0; i < d; ++i) col[i] = u(i, x);
      ComplexMatrix t = outer(col, col);
      t *= Complex{w, 0.0};
      rho += t;
    }
    states.push_back(DensityMatrix::unchecked(std::move(rho)));
  }
  return Ensemble(n, all_bitstrings(n),
                  std::vector<double>(d, 1.0 / static_cast<double>(d)),
                  std::move(states));
}

/// Baseline protocol view: Alice sends the first beta bits in the clear, so
/// rho_x = |x_1..x_beta><x_1..x_beta| on dim 2^beta.
inline Ensemble trivial_ensemble(std::size_t n, std::size_t beta) {
  if (beta > n)
    throw std::invalid_argument("trivial_ensemble: beta must be <= n");
  const std::size_t count = std::size_t{1} << n;
  const std::size_t d = std::size_t{1} << beta;
  std::vector<DensityMatrix> states;
  states.reserve(count);
  const auto labels = all_bitstrings(n);
  for (const auto& label : labels) {
    const std::size_t prefix = bitstring_to_index(label.substr(0, beta));
    ComplexMatrix rho(d, d);
    rho(prefix, prefix) = 1.0;
    states.push_back(DensityMatrix::unchecked(std::move(rho)));
  }
  return Ensemble(n, labels,
                  std::vector<double>(count, 1.0 / static_cast<double>(count)),
                  std::move(states));
}

/// d(E): trace distance between the label-state correlation and the decoupled
/// uniform form. Computed blockwise, never materializing the 2^n * d joint
/// matrix: d(E) = sum_x (1/2) || p_x rho_x - 2^-n rho ||_1.
inline double nonuniformity(const Ensemble& e) {
  e.require_full_label_set("nonuniformity");
  const ComplexMatrix rho = average_state(e).matrix;
  const double u = 1.0 / static_cast<double>(e.size());
  double d = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    ComplexMatrix block = e.states[k].matrix;
    block *= Complex{e.priors[k], 0.0};
    ComplexMatrix mean = rho;
    mean *= Complex{u, 0.0};
    d += 0.5 * trace_norm_hermitian(block - mean);
  }
  return d;
}

/// P(y|x) = Tr(M_y rho_x). Tiny negative traces from the PSD tolerance are
/// clamped and each row renormalized.
inline Channel induced_channel(const Ensemble& e, const Povm& m) {
  if (m.dim() != e.dim())
    throw std::invalid_argument("induced_channel: dimension mismatch");
  Channel ch;
  ch.priors = e.priors;
  ch.cond.resize(e.size());
  for (std::size_t x = 0; x < e.size(); ++x) {
    auto& row = ch.cond[x];
    row.resize(m.operators.size());
    double sum = 0.0;
    for (std::size_t y = 0; y < m.operators.size(); ++y) {
      const ComplexMatrix& op = m.operators[y];
      Complex tr = 0.0;
      for (std::size_t i = 0; i < op.rows(); ++i)
        for (std::size_t j = 0; j < op.cols(); ++j)
          tr += op(i, j) * e.states[x].matrix(j, i);
      row[y] = std::max(tr.real(), 0.0);
      sum += row[y];
    }
    if (std::abs(sum - 1.0) > 1e-8)
      throw std::invalid_argument(
          "induced_channel: outcome probabilities do not sum to 1");
    for (double& p : row) p /= sum;
  }
  return ch;
}

}  // namespace qbsc
