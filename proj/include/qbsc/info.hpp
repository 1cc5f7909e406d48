#pragma once

#include <cmath>
#include <string>

#include "qbsc/ensemble.hpp"

namespace qbsc {

/// Base-2 entropy term with the 0 log 0 = 0 convention.
inline double entropy_term(double p) {
  return p > 0.0 ? -p * std::log2(p) : 0.0;
}

/// I(X;Y) = H(Y) - H(Y|X) in bits.
inline double shannon_mutual_information(const Channel& ch) {
  ch.validate();
  if (ch.cond.empty()) return 0.0;
  const std::size_t ny = ch.cond.front().size();
  std::vector<double> py(ny, 0.0);
  double hyx = 0.0;
  for (std::size_t x = 0; x < ch.cond.size(); ++x) {
    double hx = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      py[y] += ch.priors[x] * ch.cond[x][y];
      hx += entropy_term(ch.cond[x][y]);
    }
    hyx += ch.priors[x] * hx;
  }
  double hy = 0.0;
  for (double p : py) hy += entropy_term(p);
  return std::max(hy - hyx, 0.0);
}

/// S(rho) = -sum lambda log2 lambda over the support.
inline double von_neumann_entropy(const DensityMatrix& r) {
  double s = 0.0;
  for (double w : eig_hermitian(r.matrix).eigenvalues)
    if (w > kSupportCutoff) s += -w * std::log2(w);
  return s;
}

/// chi(E) = S(rho) - sum_x p_x S(rho_x).
inline double holevo_chi(const Ensemble& e) {
  double chi = von_neumann_entropy(average_state(e));
  for (std::size_t k = 0; k < e.size(); ++k)
    chi -= e.priors[k] * von_neumann_entropy(e.states[k]);
  return std::max(chi, 0.0);
}

/// Collision entropy of the label conditioned on Bob's system, computed
/// blockwise as -log2 sum_x p_x^2 Tr(rho^-1/2 rho_x rho^-1/2 rho_x) with the
/// support-restricted inverse; the joint label-state matrix never exists.
inline double h2_conditional(const Ensemble& e) {
  const ComplexMatrix r = matrix_inv_sqrt(average_state(e).matrix);
  double sum = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const ComplexMatrix a = r * e.states[k].matrix * r;
    Complex tr = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        tr += a(i, j) * e.states[k].matrix(j, i);
    sum += e.priors[k] * e.priors[k] * tr.real();
  }
  return -std::log2(sum);
}

/// xi(E) = n - H2, the guessing-probability security measure.
inline double xi(const Ensemble& e) {
  e.require_full_label_set("xi");
  return static_cast<double>(e.n) - h2_conditional(e);
}

/// Square-root measurement M_x = p_x rho^-1/2 rho_x rho^-1/2, completed on
/// the orthocomplement of supp(rho) by one reject operator that never fires
/// on ensemble states.
inline Povm pretty_good_measurement(const Ensemble& e) {
  const ComplexMatrix rho = average_state(e).matrix;
  const ComplexMatrix r = matrix_inv_sqrt(rho);
  std::vector<ComplexMatrix> ops;
  ops.reserve(e.size() + 1);
  ComplexMatrix sum(e.dim(), e.dim());
  for (std::size_t k = 0; k < e.size(); ++k) {
    ComplexMatrix m = r * e.states[k].matrix * r;
    m *= Complex{e.priors[k], 0.0};
    sum += m;
    ops.push_back(std::move(m));
  }
  const ComplexMatrix reject = ComplexMatrix::identity(e.dim()) - sum;
  if (reject.max_abs() > 1e-10) ops.push_back(reject);
  return Povm(std::move(ops));
}

/// sum_x p_x Tr(M_x rho_x) where outcome i is the guess "label i".
inline double guessing_probability(const Ensemble& e, const Povm& m) {
  if (m.dim() != e.dim())
    throw std::invalid_argument("guessing_probability: dimension mismatch");
  if (m.operators.size() < e.size())
    throw std::invalid_argument(
        "guessing_probability: POVM needs one outcome per label");
  double p = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    Complex tr = 0.0;
    const ComplexMatrix& op = m.operators[k];
    for (std::size_t i = 0; i < op.rows(); ++i)
      for (std::size_t j = 0; j < op.cols(); ++j)
        tr += op(i, j) * e.states[k].matrix(j, i);
    p += e.priors[k] * tr.real();
  }
  return p;
}

/// Optimal two-state discrimination: 1/2 + 1/2 ||p0 rho0 - p1 rho1||_1 with
/// the achieving projective measurement.
inline std::pair<double, Povm> helstrom_optimum(const Ensemble& e) {
  if (e.size() != 2)
    throw std::invalid_argument("helstrom_optimum: exactly 2 labels required");
  ComplexMatrix delta = e.states[0].matrix;
  delta *= Complex{e.priors[0], 0.0};
  ComplexMatrix t = e.states[1].matrix;
  t *= Complex{e.priors[1], 0.0};
  delta -= t;
  const SpectralDecomposition sd = eig_hermitian(delta);
  const std::size_t d = e.dim();
  ComplexMatrix m0(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (sd.eigenvalues[k] < 0.0) continue;
    CVector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = sd.eigenvectors(i, k);
    m0 += outer(v, v);
  }
  Povm povm({m0, ComplexMatrix::identity(d) - m0});
  return {guessing_probability(e, povm), std::move(povm)};
}

/// Knobs for the accessible-information search; JSON shape
/// {"restarts": int, "max_iters": int, "tol": real, "seed": int}.
struct OptimizerSettings {
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-7;
  std::uint64_t seed = 0;
};

/// Certified interval around I_acc: the lower end is witnessed by
/// best_measurement, the upper end is min(n, chi). The interval is only
/// claimed tight when the two ends meet.
struct IaccBracket {
  double lower = 0.0;
  double upper = 0.0;
  Povm best_measurement;
  std::string method_notes;
};

namespace detail {

/// One see-saw pass from random rank-1 elements: after each greedy direction
/// update the candidates are renormalized into a POVM by T^-1/2 (.) T^-1/2.
/// The elements stay rank-1 throughout, M_y = |T^-1/2 u_y|^2-weighted
/// projectors, so the loop only handles vectors; the full POVM is
/// materialized when a new best is recorded.
inline void seesaw_restart(const Ensemble& e, const OptimizerSettings& opts,
                           Rng rng, double& best, Povm& best_m,
                           std::string& best_note, int restart_index) {
  const std::size_t d = e.dim();
  const std::size_t k = std::min(d * d, std::size_t{256});
  std::vector<CVector> dirs(k);
  std::vector<double> weights(k, 1.0);
  for (auto& u : dirs) u = random_pure_state(d, rng).amplitudes;

  auto materialize = [&](const std::vector<CVector>& elems) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(k + 1);
    ComplexMatrix sum(d, d);
    for (const auto& v : elems) {
      ComplexMatrix m = outer(v, v);
      sum += m;
      ops.push_back(std::move(m));
    }
    const ComplexMatrix reject = ComplexMatrix::identity(d) - sum;
    if (reject.max_abs() > 1e-10) ops.push_back(reject);
    return Povm::unchecked(std::move(ops));
  };

  double prev = -1.0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    ComplexMatrix t(d, d);
    for (std::size_t y = 0; y < k; ++y)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          t(i, j) += weights[y] * dirs[y][i] * std::conj(dirs[y][j]);
    const ComplexMatrix tm = matrix_inv_sqrt(t);

    // elems[y] = sqrt(w_y) T^-1/2 u_y, so M_y = |elems[y]><elems[y]|.
    std::vector<CVector> elems(k);
    for (std::size_t y = 0; y < k; ++y) {
      elems[y] = tm * dirs[y];
      const double root = std::sqrt(weights[y]);
      for (Complex& z : elems[y]) z *= root;
    }

    // Channel P(y|x) = <elem_y| rho_x |elem_y> plus the reject defect,
    // folded into one extra outcome shared by all rows.
    const std::size_t nx = e.size();
    Channel ch;
    ch.priors = e.priors;
    ch.cond.assign(nx, std::vector<double>(k + 1, 0.0));
    for (std::size_t x = 0; x < nx; ++x) {
      double sum = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        const CVector rv = e.states[x].matrix * elems[y];
        const double p = std::max(inner(elems[y], rv).real(), 0.0);
        ch.cond[x][y] = p;
        sum += p;
      }
      ch.cond[x][k] = std::max(0.0, 1.0 - sum);
      const double total = sum + ch.cond[x][k];
      for (double& p : ch.cond[x]) p /= total;
    }
    const double value = shannon_mutual_information(ch);
    if (value > best) {
      best = value;
      best_m = materialize(elems);
      best_note = "seesaw restart " + std::to_string(restart_index);
    }
    if (std::abs(value - prev) < opts.tol) break;
    prev = value;

    // Greedy step: point each direction at the top eigenvector of its score
    // operator sum_x p_x [log2 post(x|y) - log2 p_x] rho_x.
    std::vector<double> py(k, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < k; ++y)
        py[y] += ch.priors[x] * ch.cond[x][y];
    for (std::size_t y = 0; y < k; ++y) {
      ComplexMatrix score(d, d);
      for (std::size_t x = 0; x < nx; ++x) {
        const double post =
            py[y] > 1e-15 ? ch.priors[x] * ch.cond[x][y] / py[y] : ch.priors[x];
        const double gain =
            std::log2(std::max(post, 1e-18)) - std::log2(ch.priors[x]);
        const Complex f{ch.priors[x] * gain, 0.0};
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            score(i, j) += f * e.states[x].matrix(i, j);
      }
      dirs[y] = dominant_eigenvector(score, 40);
      weights[y] = std::max(py[y], 1e-12);
    }
  }
}

}  // namespace detail

/// Lower bound: best I(X;Y) over the computational basis, the square-root
/// measurement, the Helstrom pair (2 labels) and seeded see-saw restarts from
/// random rank-1 POVMs. Upper bound: min(n, chi).
inline IaccBracket accessible_info_bracket(const Ensemble& e,
                                           const OptimizerSettings& opts = {}) {
  IaccBracket out;
  out.upper = std::min(static_cast<double>(e.n), holevo_chi(e));

  auto consider = [&](const Povm& m, const std::string& note) {
    const double value = shannon_mutual_information(induced_channel(e, m));
    if (out.best_measurement.operators.empty() || value > out.lower) {
      out.lower = value;
      out.best_measurement = m;
      out.method_notes = note;
    }
  };

  consider(Povm::computational(e.dim()), "computational basis");
  consider(pretty_good_measurement(e), "pretty-good measurement");
  if (e.size() == 2) consider(helstrom_optimum(e).second, "helstrom");

  for (int r = 0; r < opts.restarts; ++r)
    detail::seesaw_restart(e, opts, Rng::stream(opts.seed, r), out.lower,
                           out.best_measurement, out.method_notes, r);

  // The reported lower end is replayed through the stored measurement so the
  // pair (value, witness) is self-consistent by construction.
  out.lower =
      shannon_mutual_information(induced_channel(e, out.best_measurement));
  return out;
}

}  // namespace qbsc
