#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qbsc/matrix.hpp"
#include "qbsc/rng.hpp"
#include "qbsc/spectral.hpp"

namespace qbsc {

/// Unit vector in C^dim (norm checked to 1e-9).
struct PureState {
  std::size_t dim = 0;
  CVector amplitudes;

  PureState() = default;
  PureState(std::size_t d, CVector amps) : dim(d), amplitudes(std::move(amps)) {
    if (amplitudes.size() != dim)
      throw std::invalid_argument("pure state: amplitude count != dim");
    for (const Complex& z : amplitudes)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("pure state: non-finite amplitude");
    if (std::abs(vector_norm(amplitudes) - 1.0) > kHermitianTol)
      throw std::invalid_argument("pure state: norm must be 1 within 1e-9");
  }

  static PureState basis(std::size_t dim, std::size_t index) {
    return PureState(dim, basis_vector(dim, index));
  }

  ComplexMatrix projector() const { return outer(amplitudes, amplitudes); }
};

/// Hermitian, positive semidefinite, unit-trace matrix. Validation runs the
/// full spectral check; unchecked() skips it for states that are valid by
/// construction in hot loops.
struct DensityMatrix {
  std::size_t dim = 0;
  ComplexMatrix matrix;

  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix m) : dim(m.rows()), matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols())
      throw std::invalid_argument("density matrix: must be square");
    if (!matrix.all_finite())
      throw std::invalid_argument("density matrix: non-finite entry");
    if (matrix.hermiticity_defect() > kHermitianTol)
      throw std::invalid_argument(
          "density matrix: not Hermitian within 1e-9");
    if (std::abs(matrix.trace().real() - 1.0) > kHermitianTol ||
        std::abs(matrix.trace().imag()) > kHermitianTol)
      throw std::invalid_argument("density matrix: trace must be 1 within 1e-9");
    const auto sd = eig_hermitian(matrix);
    if (sd.eigenvalues.back() < -kHermitianTol)
      throw std::invalid_argument(
          "density matrix: not positive semidefinite (min eigenvalue < -1e-9)");
  }

  static DensityMatrix unchecked(ComplexMatrix m) {
    DensityMatrix r;
    r.dim = m.rows();
    r.matrix = std::move(m);
    return r;
  }

  static DensityMatrix pure(const PureState& s) {
    return unchecked(s.projector());
  }

  static DensityMatrix maximally_mixed(std::size_t d) {
    ComplexMatrix m = ComplexMatrix::identity(d);
    m *= Complex{1.0 / static_cast<double>(d), 0.0};
    return unchecked(std::move(m));
  }
};

/// delta(r, s) = (1/2) Tr |r - s|.
inline double trace_distance(const DensityMatrix& r, const DensityMatrix& s) {
  if (r.dim != s.dim)
    throw std::invalid_argument("trace_distance: dimension mismatch");
  return std::min(0.5 * trace_norm_hermitian(r.matrix - s.matrix), 1.0);
}

/// F(r, s) = Tr sqrt(sqrt(r) s sqrt(r)); |<phi|psi>| on pure inputs.
/// Evaluated as the nuclear norm of sqrt(r) sqrt(s), whose singular values
/// the one-sided SVD delivers with absolute accuracy near machine epsilon;
/// taking eigenvalue square roots of the sandwiched product would turn
/// rank-deficiency noise into errors of order sqrt(epsilon).
inline double fidelity(const DensityMatrix& r, const DensityMatrix& s) {
  if (r.dim != s.dim)
    throw std::invalid_argument("fidelity: dimension mismatch");
  const ComplexMatrix product = matrix_sqrt(r.matrix) * matrix_sqrt(s.matrix);
  double f = 0.0;
  for (double w : svd_one_sided(product).sigma) f += w;
  return std::min(f, 1.0);
}

/// Canonical purification sum_i sqrt(lambda_i) |i>|v_i> on dim^2, eigenvalues
/// descending; the second subsystem's marginal reproduces the input. The
/// eigenvector phase convention in eig_hermitian makes the output unique.
inline PureState purify(const DensityMatrix& r) {
  const std::size_t d = r.dim;
  const SpectralDecomposition sd = eig_hermitian(r.matrix);
  CVector amps(d * d, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i) {
    const double lam = std::max(sd.eigenvalues[i], 0.0);
    if (lam == 0.0) continue;
    const double root = std::sqrt(lam);
    for (std::size_t j = 0; j < d; ++j)
      amps[i * d + j] = root * sd.eigenvectors(j, i);
  }
  // Renormalize away the eigenvalue rounding so the constructor check holds.
  const double nrm = vector_norm(amps);
  for (Complex& z : amps) z /= nrm;
  return PureState(d * d, std::move(amps));
}

/// Unitary U on the first (local) factor maximizing |<phi0|(U x id)|phi1>|;
/// the maximum equals the fidelity of the second-factor marginals. Built from
/// the SVD of the local_dim x local_dim overlap matrix of the two states'
/// conditional components.
inline ComplexMatrix uhlmann_unitary(const PureState& phi0,
                                     const PureState& phi1,
                                     std::size_t local_dim) {
  if (phi0.dim != phi1.dim)
    throw std::invalid_argument("uhlmann_unitary: state dimension mismatch");
  if (local_dim == 0 || phi0.dim % local_dim != 0)
    throw std::invalid_argument(
        "uhlmann_unitary: local_dim must divide the joint dimension");
  const std::size_t env = phi0.dim / local_dim;

  // t(a, a') = <c0_a | c1_a'> over the environment components.
  ComplexMatrix t(local_dim, local_dim);
  for (std::size_t a = 0; a < local_dim; ++a)
    for (std::size_t ap = 0; ap < local_dim; ++ap) {
      Complex s = 0.0;
      for (std::size_t e = 0; e < env; ++e)
        s += std::conj(phi0.amplitudes[a * env + e]) *
             phi1.amplitudes[ap * env + e];
      t(a, ap) = s;
    }

  // <phi0|(U x id)|phi1> = Tr(U B) with B = t transposed; the polar factor
  // V W^dag of B^dag maximizes it at the nuclear norm of B.
  ComplexMatrix b(local_dim, local_dim);
  for (std::size_t i = 0; i < local_dim; ++i)
    for (std::size_t j = 0; j < local_dim; ++j) b(i, j) = t(j, i);
  const Svd svd = svd_one_sided(b);
  ComplexMatrix u(local_dim, local_dim);
  for (std::size_t i = 0; i < local_dim; ++i)
    for (std::size_t j = 0; j < local_dim; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < local_dim; ++k)
        s += svd.v(i, k) * std::conj(svd.w(j, k));
      u(i, j) = s;
    }
  return u;
}

/// Haar-random unitary: complex Gaussian (Ginibre) matrix, two passes of
/// modified Gram-Schmidt (the positive-diagonal R convention supplies the
/// phase correction that makes the distribution exactly Haar).
inline ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw std::invalid_argument("haar_unitary: dimension must be >= 1");
  ComplexMatrix z(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      z(i, j) = Complex{rng.normal(), rng.normal()};
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex ov = 0.0;
        for (std::size_t i = 0; i < d; ++i) ov += std::conj(z(i, k)) * z(i, j);
        for (std::size_t i = 0; i < d; ++i) z(i, j) -= ov * z(i, k);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < d; ++i) nrm += std::norm(z(i, j));
      nrm = std::sqrt(nrm);
      for (std::size_t i = 0; i < d; ++i) z(i, j) /= nrm;
    }
  }
  return z;
}

inline double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::identity(u.rows())).max_abs();
}

inline PureState random_pure_state(std::size_t d, Rng& rng) {
  CVector v(d);
  for (Complex& z : v) z = Complex{rng.normal(), rng.normal()};
  const double nrm = vector_norm(v);
  for (Complex& z : v) z /= nrm;
  return PureState(d, std::move(v));
}

/// Hilbert-Schmidt random density matrix: G G^dag / Tr for Ginibre G.
inline DensityMatrix random_density_matrix(std::size_t d, Rng& rng) {
  ComplexMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      g(i, j) = Complex{rng.normal(), rng.normal()};
  ComplexMatrix rho = g * g.adjoint();
  rho *= Complex{1.0 / rho.trace().real(), 0.0};
  return DensityMatrix::unchecked(std::move(rho));
}

}  // namespace qbsc
