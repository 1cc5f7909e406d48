#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbsc {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix. The only matrix representation in the
/// library; dimensions stay small enough that O(d^2) storage and O(d^3)
/// products are fine everywhere.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, CVector entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
      throw std::invalid_argument("matrix: entries length must be rows*cols");
  }

  static ComplexMatrix identity(std::size_t d) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const CVector& entries() const { return entries_; }
  CVector& entries() { return entries_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : entries_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : entries_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    for (const Complex& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  /// Max entrywise deviation from the own adjoint; 0 for exactly Hermitian.
  double hermiticity_defect() const {
    if (rows_ != cols_) return HUGE_VAL;
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k)
      entries_[k] += o.entries_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k)
      entries_[k] -= o.entries_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (Complex& z : entries_) z *= s;
    return *this;
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVector entries_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
  a -= b;
  return a;
}
inline ComplexMatrix operator*(Complex s, ComplexMatrix m) {
  m *= s;
  return m;
}
inline ComplexMatrix operator*(ComplexMatrix m, Complex s) {
  m *= s;
  return m;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matrix: product shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline CVector operator*(const ComplexMatrix& m, const CVector& v) {
  if (m.cols() != v.size())
    throw std::invalid_argument("matrix: vector length mismatch");
  CVector out(m.rows(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

/// <a|b> with the first argument conjugated.
inline Complex inner(const CVector& a, const CVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("vector: length mismatch");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

inline double vector_norm(const CVector& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

/// |a><b|.
inline ComplexMatrix outer(const CVector& a, const CVector& b) {
  ComplexMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

inline CVector basis_vector(std::size_t dim, std::size_t index) {
  CVector v(dim, Complex{0.0, 0.0});
  v.at(index) = 1.0;
  return v;
}

/// Kronecker product; the first factor is the most significant one.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex f = a(ia, ja);
      if (f == Complex{0.0, 0.0}) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
    }
  return out;
}

inline CVector tensor(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i * b.size() + j] = a[i] * b[j];
  return out;
}

/// Partial trace over the subsystems NOT listed in `keep`. `dims` lists the
/// factor dimensions, most significant first, and must multiply to the matrix
/// dimension. Kept subsystems retain their relative order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m,
                                   const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("partial_trace: matrix must be square");
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (total != m.rows())
    throw std::invalid_argument(
        "partial_trace: product of dims must equal the matrix dimension");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size())
      throw std::invalid_argument("partial_trace: keep index out of range");
    kept[k] = true;
  }

  std::size_t keep_dim = 1, trace_dim = 1;
  for (std::size_t s = 0; s < dims.size(); ++s)
    (kept[s] ? keep_dim : trace_dim) *= dims[s];

  auto flat_of = [&](const std::vector<std::size_t>& d) {
    std::size_t flat = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) flat = flat * dims[s] + d[s];
    return flat;
  };

  // Enumerate kept/traced multi-indices by walking their own mixed radices.
  std::vector<std::size_t> keep_radix, trace_radix, keep_pos, trace_pos;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (kept[s]) {
      keep_radix.push_back(dims[s]);
      keep_pos.push_back(s);
    } else {
      trace_radix.push_back(dims[s]);
      trace_pos.push_back(s);
    }
  }
  auto expand = [](std::size_t flat, const std::vector<std::size_t>& radix) {
    std::vector<std::size_t> d(radix.size());
    for (std::size_t s = radix.size(); s-- > 0;) {
      d[s] = flat % radix[s];
      flat /= radix[s];
    }
    return d;
  };

  ComplexMatrix out(keep_dim, keep_dim);
  std::vector<std::size_t> row(dims.size()), col(dims.size());
  for (std::size_t i = 0; i < keep_dim; ++i) {
    const auto di = expand(i, keep_radix);
    for (std::size_t j = 0; j < keep_dim; ++j) {
      const auto dj = expand(j, keep_radix);
      Complex sum = 0.0;
      for (std::size_t t = 0; t < trace_dim; ++t) {
        const auto dt = expand(t, trace_radix);
        for (std::size_t s = 0; s < keep_pos.size(); ++s) {
          row[keep_pos[s]] = di[s];
          col[keep_pos[s]] = dj[s];
        }
        for (std::size_t s = 0; s < trace_pos.size(); ++s) {
          row[trace_pos[s]] = dt[s];
          col[trace_pos[s]] = dt[s];
        }
        sum += m(flat_of(row), flat_of(col));
      }
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace qbsc
