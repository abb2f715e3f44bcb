#pragma once

// Dense complex Hermitian linear algebra for small matrices: storage,
// validation, cyclic Jacobi eigensolver and spectral matrix functions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergo/error.hpp"

namespace ergo {

using Complex = std::complex<double>;

/// Square complex matrix, row-major.
class ComplexMatrix {
 public:
  /// Zero matrix of the given dimension.
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw DimensionMismatch("matrix dimension must be >= 1");
  }

  ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
      : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw DimensionMismatch("matrix dimension must be >= 1");
    if (data_.size() != dim * dim) {
      throw DimensionMismatch("expected " + std::to_string(dim * dim) +
                              " entries, got " + std::to_string(data_.size()));
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : ComplexMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != dim_) throw DimensionMismatch("ragged matrix literal");
      std::size_t j = 0;
      for (const auto& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// |v><v| for a column vector v.
  static ComplexMatrix outer(std::span<const Complex> v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }

  std::span<const Complex> entries() const noexcept { return data_; }

  std::vector<Complex> column(std::size_t k) const {
    std::vector<Complex> c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = (*this)(i, k);
    return c;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    const std::size_t n = a.dim_;
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_dim(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) {
      throw DimensionMismatch("dimension " + std::to_string(dim_) + " vs " +
                              std::to_string(o.dim_));
    }
  }

  std::size_t dim_;
  std::vector<Complex> data_;
};

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("max_abs_diff: dimension mismatch");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) m = std::max(m, std::abs(ea[k] - eb[k]));
  return m;
}

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  ComplexMatrix r(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return r;
}

/// Complex Hermitian matrix. Construction checks |A_ij - conj(A_ji)| <= 1e-12
/// per entry and stores the symmetrized matrix.
class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
    const std::size_t n = m_.dim();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double dev = std::abs(m_(i, j) - std::conj(m_(j, i)));
        if (!(dev <= kTolerance)) {
          throw NotHermitian("entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") deviates from hermiticity by " + std::to_string(dev));
        }
        const Complex avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
        m_(i, j) = avg;
        m_(j, i) = std::conj(avg);
      }
    }
  }

  static HermitianOperator diagonal(std::span<const double> values) {
    return HermitianOperator(ComplexMatrix::diagonal(values));
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

enum class Ordering { ascending, non_increasing };

/// Eigenvalues with orthonormal eigenvectors stored as matrix columns;
/// column k pairs with eigenvalues[k].
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
  Ordering ordering;

  std::size_t dim() const noexcept { return eigenvalues.size(); }

  std::vector<Complex> vector(std::size_t k) const { return eigenvectors.column(k); }

  /// sum_k f(lambda_k) v_k v_k^H
  template <class F>
  ComplexMatrix rebuild(F&& f) const {
    const std::size_t n = dim();
    ComplexMatrix r(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = f(eigenvalues[k]);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const Complex vi = w * eigenvectors(i, k);
        for (std::size_t j = 0; j < n; ++j) r(i, j) += vi * std::conj(eigenvectors(j, k));
      }
    }
    return r;
  }

  ComplexMatrix reconstruct() const {
    return rebuild([](double x) { return x; });
  }
};

struct JacobiOptions {
  double off_norm_threshold = 1e-13;
  int max_sweeps = 100;
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q), p < q. The rotation is
// J = diag(1, e^{-i theta}) R with R the real Jacobi rotation of the
// phase-stripped pair; A <- J^H A J and V <- V J.
inline void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace detail

/// Eigen-decomposition by cyclic complex Jacobi sweeps. Eigenvalues are
/// stable-sorted per `ordering`, ties broken by original index, so identical
/// inputs give bit-identical output.
inline SpectralDecomposition decompose(const HermitianOperator& op, Ordering ordering,
                                       const JacobiOptions& opts = {}) {
  const std::size_t n = op.dim();
  ComplexMatrix a = op.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = opts.off_norm_threshold * std::max(1.0, a.frobenius_norm());

  double off = detail::off_diagonal_norm(a);
  int sweep = 0;
  while (off >= threshold) {
    if (sweep == opts.max_sweeps) {
      throw NoConvergence("Jacobi eigensolver: no convergence after " +
                              std::to_string(opts.max_sweeps) +
                              " sweeps, off-diagonal norm " + std::to_string(off),
                          off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::rotate(a, v, p, q);
    off = detail::off_diagonal_norm(a);
    ++sweep;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (ordering == Ordering::ascending) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return a(i, i).real() < a(j, j).real();
    });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return a(i, i).real() > a(j, j).real();
    });
  }

  SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n), ordering};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// <v|A|v>, real part; A must be Hermitian.
inline double expectation(const ComplexMatrix& a, std::span<const Complex> v) {
  if (v.size() != a.dim()) throw DimensionMismatch("expectation: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) row += a(i, j) * v[j];
    s += std::conj(v[i]) * row;
  }
  return s.real();
}

/// Diagonal of `a` in the eigenbasis of `basis`: <b_k|a|b_k>.
inline std::vector<double> diagonal_in_basis(const ComplexMatrix& a,
                                             const SpectralDecomposition& basis) {
  std::vector<double> d(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k) d[k] = expectation(a, basis.vector(k));
  return d;
}

/// tr(a b) for Hermitian a, b.
inline double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("trace_product: dimension " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
  }
  const std::size_t n = a.dim();
  Complex t = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += a(i, j) * b(j, i);
  const double scale =
      std::max(1.0, a.matrix().frobenius_norm() * b.matrix().frobenius_norm());
  if (std::abs(t.imag()) > 1e-12 * scale) {
    throw DomainError("trace_product: imaginary residual " + std::to_string(t.imag()));
  }
  return t.real();
}

/// Eigenvalues at or below this are indistinguishable from zero for the
/// Jacobi solver's backward error.
inline double eigenvalue_noise_floor(std::span<const double> eigenvalues) {
  double m = 0.0;
  for (double x : eigenvalues) m = std::max(m, std::abs(x));
  return 64.0 * std::numeric_limits<double>::epsilon() * m;
}

/// Square root of a positive semidefinite operator. Negative eigenvalues and
/// eigenvalues below the noise floor map to zero.
inline HermitianOperator psd_sqrt(const SpectralDecomposition& spectrum) {
  const double floor = eigenvalue_noise_floor(spectrum.eigenvalues);
  return HermitianOperator(
      spectrum.rebuild([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; }));
}

inline HermitianOperator psd_sqrt(const HermitianOperator& op) {
  return psd_sqrt(decompose(op, Ordering::non_increasing));
}

/// Singular values of a square matrix, non-increasing. Taken from the
/// Hermitian dilation [[0, A], [A^H, 0]] whose spectrum is {+-sigma_k}, which
/// keeps the absolute error of small singular values at machine precision.
inline std::vector<double> singular_values(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix dil(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dil(i, n + j) = a(i, j);
      dil(n + j, i) = std::conj(a(i, j));
    }
  const auto spec = decompose(HermitianOperator(std::move(dil)), Ordering::non_increasing);
  std::vector<double> sv(n);
  for (std::size_t k = 0; k < n; ++k) {
    // pair the k-th largest with the k-th smallest (its mirror) to cancel rounding
    sv[k] = std::max(0.0, 0.5 * (spec.eigenvalues[k] - spec.eigenvalues[2 * n - 1 - k]));
  }
  return sv;
}

/// Unit-trace positive semidefinite Hermitian operator. Keeps its
/// non-increasing spectral decomposition. Eigenvalues in [-1e-10, 0) are
/// clipped to zero and the spectrum renormalized; the stored matrix is then
/// rebuilt from the cleaned spectrum.
class DensityMatrix {
 public:
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kNegativeTolerance = 1e-10;

  explicit DensityMatrix(HermitianOperator op)
      : op_(std::move(op)), spectrum_(decompose(op_, Ordering::non_increasing)) {
    const double tr = op_.matrix().trace().real();
    if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
      throw InvalidState("density matrix trace " + std::to_string(tr) + " differs from 1");
    }
    bool clipped = false;
    for (double& p : spectrum_.eigenvalues) {
      if (p < -kNegativeTolerance) {
        throw InvalidState("density matrix has negative eigenvalue " + std::to_string(p));
      }
      if (p < 0.0) {
        p = 0.0;
        clipped = true;
      }
    }
    if (clipped) {
      const double sum =
          std::accumulate(spectrum_.eigenvalues.begin(), spectrum_.eigenvalues.end(), 0.0);
      for (double& p : spectrum_.eigenvalues) p /= sum;
      op_ = HermitianOperator(spectrum_.reconstruct());
    }
  }

  explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(HermitianOperator(std::move(m))) {}

  static DensityMatrix diagonal(std::span<const double> populations) {
    return DensityMatrix(ComplexMatrix::diagonal(populations));
  }

  /// |psi><psi| for a (not necessarily normalized) nonzero vector.
  static DensityMatrix pure(std::span<const Complex> psi) {
    double norm2 = 0.0;
    for (const auto& c : psi) norm2 += std::norm(c);
    if (!(norm2 > 0.0)) throw DomainError("pure state vector has zero norm");
    ComplexMatrix m = ComplexMatrix::outer(psi);
    m *= 1.0 / norm2;
    return DensityMatrix(std::move(m));
  }

  const HermitianOperator& op() const noexcept { return op_; }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  std::size_t dim() const noexcept { return op_.dim(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return op_(i, j); }

  /// Non-increasing, clipped spectrum p_1 >= p_2 >= ...
  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }

 private:
  HermitianOperator op_;
  SpectralDecomposition spectrum_;
};

/// Principal square root of a density matrix.
inline HermitianOperator matrix_sqrt(const DensityMatrix& rho) { return psd_sqrt(rho.spectrum()); }

}  // namespace ergo
