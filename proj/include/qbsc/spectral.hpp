#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "qbsc/matrix.hpp"

namespace qbsc {

/// Inputs are accepted as Hermitian / normalized up to this tolerance.
inline constexpr double kHermitianTol = 1e-9;
/// Eigenvalues at or below this cutoff count as outside the support when
/// applying scalar functions (pseudo-inverse square roots and friends).
inline constexpr double kSupportCutoff = 1e-10;

/// Full eigensystem of a Hermitian matrix: eigenvalues descending, matching
/// eigenvectors as orthonormal columns. reconstruct() gives V diag(w) V^dag.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const {
    const std::size_t d = eigenvalues.size();
    ComplexMatrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < d; ++k)
          s += eigenvalues[k] * eigenvectors(i, k) *
               std::conj(eigenvectors(j, k));
        out(i, j) = s;
      }
    return out;
  }
};

namespace detail {

inline double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi diagonalization for Hermitian matrices. Sweeps rotate every
/// off-diagonal pair; convergence when the off-diagonal Frobenius norm drops
/// below 1e-12 relative to the matrix scale. Eigenvalues are returned in
/// descending order and each eigenvector is phased so its first component of
/// magnitude > 1e-12 is real positive, making downstream constructions
/// deterministic.
inline SpectralDecomposition eig_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("eig_hermitian: matrix must be square");
  if (m.hermiticity_defect() > kHermitianTol)
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");

  const std::size_t d = m.rows();
  // Work on the exactly-Hermitian average so rounding in the input cannot
  // push the iteration off the Hermitian manifold.
  ComplexMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(d);

  const double scale = std::max(1.0, a.frobenius_norm());
  const double tol = 1e-12 * scale;
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (detail::offdiag_norm(a) <= tol) break;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex apq = a(p, q);
        const double bmag = std::abs(apq);
        if (bmag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Complex phase = apq / bmag;

        // Real Jacobi angle for [[app, |apq|], [|apq|, aqq]], smaller root.
        const double tau = (app - aqq) / (2.0 * bmag);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) /
            (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // J is identity except J(p,p)=c, J(p,q)=-s*phase,
        // J(q,p)=s*conj(phase), J(q,q)=c; update A <- J^dag A J, V <- V J.
        const Complex spq = s * phase;
        for (std::size_t k = 0; k < d; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + std::conj(spq) * akq;
          a(k, q) = -spq * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + spq * aqk;
          a(q, k) = -std::conj(spq) * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + std::conj(spq) * vkq;
          v(k, q) = -spq * vkp + c * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors = ComplexMatrix(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues[col] = a(src, src).real();
    Complex fix = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (std::abs(v(i, src)) > 1e-12) {
        fix = std::conj(v(i, src)) / std::abs(v(i, src));
        break;
      }
    }
    for (std::size_t i = 0; i < d; ++i)
      out.eigenvectors(i, col) = fix * v(i, src);
  }
  return out;
}

/// f applied on the eigenvalues above support_cutoff; eigenvalues at or below
/// the cutoff map to 0, giving the support-restricted pseudo-function.
inline ComplexMatrix hermitian_function(const ComplexMatrix& m,
                                        const std::function<double(double)>& f,
                                        double support_cutoff = kSupportCutoff) {
  SpectralDecomposition sd = eig_hermitian(m);
  std::vector<double> w(sd.eigenvalues.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = sd.eigenvalues[k] > support_cutoff ? f(sd.eigenvalues[k]) : 0.0;
  SpectralDecomposition mapped{std::move(w), std::move(sd.eigenvectors)};
  return mapped.reconstruct();
}

namespace detail {

inline void require_psd_spectrum(const ComplexMatrix& m, const char* who) {
  SpectralDecomposition sd = eig_hermitian(m);
  if (!sd.eigenvalues.empty() && sd.eigenvalues.back() < -kHermitianTol)
    throw std::invalid_argument(std::string(who) +
                                ": matrix has a negative eigenvalue");
}

}  // namespace detail

inline ComplexMatrix matrix_sqrt(const ComplexMatrix& m,
                                 double support_cutoff = kSupportCutoff) {
  detail::require_psd_spectrum(m, "matrix_sqrt");
  return hermitian_function(
      m, [](double x) { return std::sqrt(x); }, support_cutoff);
}

/// Support-restricted inverse square root: zero on eigenvalues at or below
/// the cutoff, so singular inputs (pure-state averages) are handled.
inline ComplexMatrix matrix_inv_sqrt(const ComplexMatrix& m,
                                     double support_cutoff = kSupportCutoff) {
  detail::require_psd_spectrum(m, "matrix_inv_sqrt");
  return hermitian_function(
      m, [](double x) { return 1.0 / std::sqrt(x); }, support_cutoff);
}

/// Projector onto the eigenspaces above the support cutoff.
inline ComplexMatrix support_projector(const ComplexMatrix& m,
                                       double support_cutoff = kSupportCutoff) {
  return hermitian_function(
      m, [](double) { return 1.0; }, support_cutoff);
}

/// Sum of |eigenvalue| of a Hermitian matrix.
inline double trace_norm_hermitian(const ComplexMatrix& m) {
  double s = 0.0;
  for (double w : eig_hermitian(m).eigenvalues) s += std::abs(w);
  return s;
}

/// Singular value decomposition M = W diag(sigma) V^dag by one-sided Jacobi:
/// right rotations orthogonalize column pairs, singular values emerge as
/// column norms. Small singular values come out with absolute accuracy near
/// machine epsilon, which the two-sided eig(M^dag M) route cannot give.
struct Svd {
  ComplexMatrix w;            // left singular vectors (columns)
  std::vector<double> sigma;  // descending
  ComplexMatrix v;            // right singular vectors (columns)
};

inline Svd svd_one_sided(const ComplexMatrix& m0) {
  if (m0.rows() != m0.cols())
    throw std::invalid_argument("svd_one_sided: matrix must be square");
  const std::size_t d = m0.rows();
  ComplexMatrix m = m0;
  ComplexMatrix v = ComplexMatrix::identity(d);

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        double gpp = 0.0, gqq = 0.0;
        Complex gpq = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          gpp += std::norm(m(i, p));
          gqq += std::norm(m(i, q));
          gpq += std::conj(m(i, p)) * m(i, q);
        }
        const double bmag = std::abs(gpq);
        if (bmag <= 1e-15 * std::sqrt(gpp * gqq) || bmag == 0.0) continue;
        rotated = true;
        const Complex phase = gpq / bmag;
        const double tau = (gpp - gqq) / (2.0 * bmag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex spq = s * phase;
        for (std::size_t i = 0; i < d; ++i) {
          const Complex mp = m(i, p), mq = m(i, q);
          m(i, p) = c * mp + std::conj(spq) * mq;
          m(i, q) = -spq * mp + c * mq;
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp + std::conj(spq) * vq;
          v(i, q) = -spq * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(d);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += std::norm(m(i, j));
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

  Svd out;
  out.sigma.resize(d);
  out.w = ComplexMatrix(d, d);
  out.v = ComplexMatrix(d, d);
  std::size_t candidate = 0;
  for (std::size_t col = 0; col < d; ++col) {
    const std::size_t src = order[col];
    out.sigma[col] = norms[src];
    for (std::size_t i = 0; i < d; ++i) out.v(i, col) = v(i, src);
    if (norms[src] > 1e-300) {
      for (std::size_t i = 0; i < d; ++i) out.w(i, col) = m(i, src) / norms[src];
    } else {
      // Null column: complete the left basis by Gram-Schmidt.
      CVector cand;
      double nrm = 0.0;
      while (nrm < 0.5 && candidate < d) {
        cand = basis_vector(d, candidate++);
        for (std::size_t j = 0; j < col; ++j) {
          Complex ov = 0.0;
          for (std::size_t i = 0; i < d; ++i)
            ov += std::conj(out.w(i, j)) * cand[i];
          for (std::size_t i = 0; i < d; ++i) cand[i] -= ov * out.w(i, j);
        }
        nrm = vector_norm(cand);
      }
      if (nrm < 0.5)
        throw std::runtime_error("svd_one_sided: basis completion failed");
      for (std::size_t i = 0; i < d; ++i) out.w(i, col) = cand[i] / nrm;
    }
  }
  return out;
}

/// Eigenvector of the algebraically largest eigenvalue, by shifted power
/// iteration. Only used as an optimizer step, so approximate convergence on
/// (near-)degenerate spectra is acceptable.
inline CVector dominant_eigenvector(const ComplexMatrix& h, int iters = 60) {
  const std::size_t d = h.rows();
  // Gershgorin shift makes the target eigenvalue the largest in magnitude.
  double shift = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += std::abs(h(i, j));
    shift = std::max(shift, row);
  }
  ComplexMatrix a = h;
  for (std::size_t i = 0; i < d; ++i) a(i, i) += shift;

  CVector x(d);
  for (std::size_t i = 0; i < d; ++i)
    x[i] = Complex{1.0 + 1e-3 * static_cast<double>(i % 7), 0.0};
  double nrm = vector_norm(x);
  for (Complex& z : x) z /= nrm;
  for (int it = 0; it < iters; ++it) {
    x = a * x;
    nrm = vector_norm(x);
    if (nrm == 0.0) return basis_vector(d, 0);
    for (Complex& z : x) z /= nrm;
  }
  return x;
}

}  // namespace qbsc
