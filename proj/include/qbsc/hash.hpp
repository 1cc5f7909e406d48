#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbsc/info.hpp"

namespace qbsc {

/// Linear hash over GF(2): an s x n bit matrix applied to bit-string labels.
/// Uniformly random matrices form a two-universal family, which is all the
/// privacy-amplification bound needs.
struct Gf2Hash {
  std::size_t n = 0;
  std::size_t s = 0;
  std::vector<std::vector<std::uint8_t>> matrix;  // s rows of n bits

  Gf2Hash() = default;
  Gf2Hash(std::size_t n_, std::size_t s_,
          std::vector<std::vector<std::uint8_t>> m)
      : n(n_), s(s_), matrix(std::move(m)) {
    if (s == 0 || s > n)
      throw std::invalid_argument("gf2 hash: need 1 <= s <= n");
    if (matrix.size() != s)
      throw std::invalid_argument("gf2 hash: row count must be s");
    for (const auto& row : matrix) {
      if (row.size() != n)
        throw std::invalid_argument("gf2 hash: row length must be n");
      for (std::uint8_t b : row)
        if (b > 1) throw std::invalid_argument("gf2 hash: entries must be bits");
    }
  }

  static Gf2Hash identity(std::size_t n) {
    std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return Gf2Hash(n, n, std::move(m));
  }

  std::string apply(const std::string& x) const {
    if (x.size() != n)
      throw std::invalid_argument("gf2 hash: input length must be n");
    std::string y(s, '0');
    for (std::size_t r = 0; r < s; ++r) {
      unsigned acc = 0;
      for (std::size_t j = 0; j < n; ++j)
        acc ^= matrix[r][j] & static_cast<unsigned>(x[j] - '0');
      y[r] = static_cast<char>('0' + acc);
    }
    return y;
  }

  /// Row rank over GF(2); the hash is surjective iff this equals s.
  std::size_t rank() const {
    std::vector<std::uint64_t> rows;
    for (const auto& row : matrix) {
      std::uint64_t bits = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (row[j]) bits |= std::uint64_t{1} << j;
      rows.push_back(bits);
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
      const std::uint64_t mask = std::uint64_t{1} << col;
      std::size_t pivot = rank;
      while (pivot < rows.size() && !(rows[pivot] & mask)) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (r != rank && (rows[r] & mask)) rows[r] ^= rows[rank];
      ++rank;
    }
    return rank;
  }

  bool surjective() const { return rank() == s; }
};

inline Gf2Hash sample_hash(std::size_t n, std::size_t s, Rng& rng) {
  if (s == 0 || s > n) throw std::invalid_argument("sample_hash: need 1 <= s <= n");
  std::vector<std::vector<std::uint8_t>> m(s, std::vector<std::uint8_t>(n));
  for (auto& row : m)
    for (auto& b : row) b = rng.bit() ? 1 : 0;
  return Gf2Hash(n, s, std::move(m));
}

/// E_g = {q_y, sigma_y}: the base ensemble grouped by hash value. States are
/// normalized mixtures over the preimages; empty preimages carry q = 0 and
/// are flagged rather than given a state.
struct HashedEnsemble {
  Gf2Hash hash;
  std::vector<std::string> labels;           // all 2^s values of y
  std::vector<double> priors;                // q_y
  std::vector<DensityMatrix> states;         // sigma_y (unit trace where q>0)
  std::vector<std::vector<std::size_t>> preimages;  // indices into the base
  std::vector<bool> empty;

  std::size_t dim() const { return states.front().dim; }

  /// View as a plain ensemble over the nonempty hash values.
  Ensemble as_ensemble() const {
    std::vector<std::string> ls;
    std::vector<double> ps;
    std::vector<DensityMatrix> ss;
    for (std::size_t y = 0; y < labels.size(); ++y) {
      if (empty[y]) continue;
      ls.push_back(labels[y]);
      ps.push_back(priors[y]);
      ss.push_back(states[y]);
    }
    return Ensemble(hash.s, std::move(ls), std::move(ps), std::move(ss));
  }
};

inline HashedEnsemble hashed_ensemble(const Ensemble& e, const Gf2Hash& g) {
  e.require_full_label_set("hashed_ensemble");
  if (g.n != e.n)
    throw std::invalid_argument("hashed_ensemble: hash input width must be n");

  HashedEnsemble out;
  out.hash = g;
  out.labels = all_bitstrings(g.s);
  const std::size_t ny = out.labels.size();
  out.priors.assign(ny, 0.0);
  out.preimages.assign(ny, {});
  out.empty.assign(ny, true);

  std::vector<ComplexMatrix> sums(ny, ComplexMatrix(e.dim(), e.dim()));
  for (std::size_t x = 0; x < e.size(); ++x) {
    const std::size_t y = bitstring_to_index(g.apply(e.labels[x]));
    out.preimages[y].push_back(x);
    out.priors[y] += e.priors[x];
    ComplexMatrix t = e.states[x].matrix;
    t *= Complex{e.priors[x], 0.0};
    sums[y] += t;
    out.empty[y] = false;
  }
  out.states.reserve(ny);
  for (std::size_t y = 0; y < ny; ++y) {
    if (!out.empty[y] && out.priors[y] > 0.0) {
      ComplexMatrix m = sums[y];
      m *= Complex{1.0 / out.priors[y], 0.0};
      out.states.push_back(DensityMatrix::unchecked(std::move(m)));
    } else {
      out.states.push_back(
          DensityMatrix::unchecked(ComplexMatrix(e.dim(), e.dim())));
    }
  }
  return out;
}

/// d(E_g) computed blockwise over the hash values, using the unnormalized
/// blocks so empty preimages need no special casing:
/// sum_y (1/2) || sum_{x in g^-1(y)} p_x rho_x - 2^-s rho ||_1.
inline double hashed_nonuniformity(const Ensemble& e, const Gf2Hash& g) {
  e.require_full_label_set("hashed_nonuniformity");
  const std::size_t ny = std::size_t{1} << g.s;
  std::vector<ComplexMatrix> blocks(ny, ComplexMatrix(e.dim(), e.dim()));
  for (std::size_t x = 0; x < e.size(); ++x) {
    const std::size_t y = bitstring_to_index(g.apply(e.labels[x]));
    ComplexMatrix t = e.states[x].matrix;
    t *= Complex{e.priors[x], 0.0};
    blocks[y] += t;
  }
  ComplexMatrix mean = average_state(e).matrix;
  mean *= Complex{1.0 / static_cast<double>(ny), 0.0};
  double d = 0.0;
  for (const auto& b : blocks) d += 0.5 * trace_norm_hermitian(b - mean);
  return d;
}

/// Monte-Carlo audit of the privacy-amplification bound: the family average
/// of d(E_g) against (1/2) 2^{-(H2 - s)/2}.
struct PaAuditReport {
  std::size_t s = 0;
  std::size_t samples = 0;
  double mean_d = 0.0;
  double stderr_d = 0.0;
  double bound = 0.0;
  Gf2Hash best_hash;
  double best_d = 0.0;
  std::uint64_t seed = 0;
};

inline PaAuditReport pa_audit(const Ensemble& e, std::size_t s,
                              std::size_t samples, std::uint64_t seed) {
  e.require_full_label_set("pa_audit");
  if (samples == 0) throw std::invalid_argument("pa_audit: samples must be >= 1");

  PaAuditReport rep;
  rep.s = s;
  rep.samples = samples;
  rep.seed = seed;
  rep.bound = 0.5 * std::pow(2.0, -0.5 * (h2_conditional(e) -
                                          static_cast<double>(s)));

  double sum = 0.0, sumsq = 0.0;
  rep.best_d = HUGE_VAL;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, i);
    const Gf2Hash g = sample_hash(e.n, s, rng);
    const double d = hashed_nonuniformity(e, g);
    sum += d;
    sumsq += d * d;
    if (d < rep.best_d) {  // first minimum wins
      rep.best_d = d;
      rep.best_hash = g;
    }
  }
  rep.mean_d = sum / static_cast<double>(samples);
  const double var =
      std::max(0.0, sumsq / static_cast<double>(samples) - rep.mean_d * rep.mean_d);
  rep.stderr_d = std::sqrt(var / static_cast<double>(samples));
  return rep;
}

}  // namespace qbsc
