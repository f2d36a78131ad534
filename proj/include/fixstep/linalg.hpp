#pragma once

// Dense linear algebra for the small symmetric problems handled by fixstep:
// vectors, square matrices, certified SPD matrices, a cyclic Jacobi
// eigensolver and a Cholesky solver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fixstep/errors.hpp"

namespace fixstep {

/// Absolute-plus-relative tolerance: |err| <= atol + rtol * |scale|.
struct Tolerance {
  double atol = 1e-12;
  double rtol = 1e-10;

  bool accepts(double err, double scale) const noexcept {
    return std::abs(err) <= atol + rtol * std::abs(scale);
  }
};

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

}  // namespace detail

/// Dense real vector of fixed dimension n >= 1 with finite entries.
class Vector {
 public:
  explicit Vector(std::size_t n, double fill = 0.0) : coords_(n, fill) { validate(); }
  explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) { validate(); }
  Vector(std::initializer_list<double> coords) : coords_(coords) { validate(); }

  static Vector zeros(std::size_t n) { return Vector(n, 0.0); }

  static Vector unit(std::size_t n, std::size_t i) {
    Vector e(n, 0.0);
    e.coords_.at(i) = 1.0;
    return e;
  }

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& values() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  double squared_norm() const noexcept {
    return std::inner_product(coords_.begin(), coords_.end(), coords_.begin(), 0.0);
  }
  double norm() const noexcept { return std::sqrt(squared_norm()); }

  Vector normalized() const {
    const double n = norm();
    if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
    return *this / n;
  }

  friend Vector operator+(const Vector& a, const Vector& b) {
    detail::require_same_size(a.size(), b.size(), "vector add");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return Vector(std::move(out));
  }
  friend Vector operator-(const Vector& a, const Vector& b) {
    detail::require_same_size(a.size(), b.size(), "vector subtract");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return Vector(std::move(out));
  }
  friend Vector operator-(const Vector& a) { return -1.0 * a; }
  friend Vector operator*(double s, const Vector& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
    return Vector(std::move(out));
  }
  friend Vector operator*(const Vector& a, double s) { return s * a; }
  friend Vector operator/(const Vector& a, double s) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] / s;
    return Vector(std::move(out));
  }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  void validate() const {
    if (coords_.empty()) throw InvalidArgument("vector dimension must be >= 1");
    for (double v : coords_) {
      if (!std::isfinite(v)) throw InvalidArgument("vector entries must be finite");
    }
  }

  std::vector<double> coords_;
};

/// a - s*b without the temporary for s*b.
inline Vector axpy_neg(const Vector& a, double s, const Vector& b) {
  detail::require_same_size(a.size(), b.size(), "axpy");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - s * b[i];
  return Vector(std::move(out));
}

/// Euclidean inner product.
inline double inner(const Vector& x, const Vector& y) {
  detail::require_same_size(x.size(), y.size(), "inner");
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

/// Square dense matrix, row-major.
class Matrix {
 public:
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {
    if (n == 0) throw InvalidArgument("matrix dimension must be >= 1");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const Vector& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require_same_size(rows[i].size(), rows.size(), "matrix row");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  bool is_symmetric() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool is_finite() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
  }

  double frobenius_norm() const noexcept {
    return std::sqrt(std::inner_product(a_.begin(), a_.end(), a_.begin(), 0.0));
  }

  /// Copy of the upper triangle mirrored into the lower one.
  Matrix symmetrized_upper() const {
    Matrix m(*this);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) m(j, i) = m(i, j);
    return m;
  }

  Matrix transposed() const {
    Matrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Vector column(std::size_t j) const {
    std::vector<double> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return Vector(std::move(c));
  }

  friend Vector operator*(const Matrix& m, const Vector& x) {
    detail::require_same_size(m.size(), x.size(), "matrix-vector product");
    std::vector<double> out(m.n_, 0.0);
    for (std::size_t i = 0; i < m.n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m.n_; ++j) s += m(i, j) * x[j];
      out[i] = s;
    }
    return Vector(std::move(out));
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    detail::require_same_size(a.size(), b.size(), "matrix product");
    Matrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        const double aik = a(i, k);
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator*(double s, const Matrix& a) {
    Matrix c(a);
    for (double& v : c.a_) v *= s;
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    detail::require_same_size(a.size(), b.size(), "matrix add");
    Matrix c(a);
    for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] += b.a_[k];
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    detail::require_same_size(a.size(), b.size(), "matrix subtract");
    Matrix c(a);
    for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] -= b.a_[k];
    return c;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// base + scale * r r^T. Entries are formed as base(i,j) + scale*r_i*r_j, so a
/// symmetric base stays exactly symmetric.
inline Matrix rank_one_update(const Matrix& base, const Vector& r, double scale) {
  detail::require_same_size(base.size(), r.size(), "rank_one_update");
  Matrix m(base);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) m(i, j) += scale * (r[i] * r[j]);
  return m;
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]

  Vector vector(std::size_t k) const { return vectors.column(k); }
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm drops
/// to `off_tol * ||M||_F`, giving up after `max_sweeps`.
inline EigenDecomposition symmetric_eigen(const Matrix& m, double off_tol = 1e-14,
                                          int max_sweeps = 100) {
  if (!m.is_finite()) throw InvalidArgument("symmetric_eigen: non-finite entries");
  if (!m.is_symmetric()) throw InvalidArgument("symmetric_eigen: matrix is not symmetric");

  const std::size_t n = m.size();
  Matrix a(m);
  Matrix v = Matrix::identity(n);
  const double scale = m.frobenius_norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    if (off_norm() <= off_tol * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && off_norm() > off_tol * scale) {
    throw ConvergenceFailure("symmetric_eigen: no convergence within " +
                             std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition out{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Lower Cholesky factor, or nullopt when a pivot is not positive (or NaN).
inline std::optional<Matrix> cholesky(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

namespace detail {

inline Vector cholesky_solve(const Matrix& l, const Vector& b) {
  const std::size_t n = l.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * y[k];
    y[i] = s / l(i, i);
  }
  return Vector(std::move(y));
}

}  // namespace detail

/// Symmetric positive definite matrix, certified at construction.
///
/// Construction requires exact symmetry, a successful Cholesky factorization
/// and a strictly positive smallest eigenvalue. The factor and the extreme
/// eigenvalues are computed once and never change afterwards.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m) : m_(std::move(m)), chol_(m_.size()) {
    if (!m_.is_finite()) throw NotSpd("matrix has non-finite entries");
    if (!m_.is_symmetric()) throw NotSpd("matrix is not symmetric");
    auto l = cholesky(m_);
    if (!l) throw NotSpd("Cholesky factorization hit a non-positive pivot");
    chol_ = std::move(*l);
    const auto eig = symmetric_eigen(m_);
    lambda_min_ = eig.values.front();
    lambda_max_ = eig.values.back();
    if (!(lambda_min_ > 0.0)) throw NotSpd("smallest eigenvalue is not positive");
  }

  static SpdMatrix identity(std::size_t n) { return SpdMatrix(Matrix::identity(n)); }
  static SpdMatrix diagonal(const Vector& d) { return SpdMatrix(Matrix::diagonal(d)); }

  std::size_t size() const noexcept { return m_.size(); }
  const Matrix& matrix() const noexcept { return m_; }
  const Matrix& cholesky_factor() const noexcept { return chol_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

  double lambda_min() const noexcept { return lambda_min_; }
  double lambda_max() const noexcept { return lambda_max_; }
  double condition_number() const noexcept { return lambda_max_ / lambda_min_; }

  friend Vector operator*(const SpdMatrix& a, const Vector& x) { return a.m_ * x; }

 private:
  Matrix m_;
  Matrix chol_;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
};

/// <x, A y>.
inline double weighted_inner(const Vector& x, const Vector& y, const SpdMatrix& a) {
  detail::require_same_size(x.size(), a.size(), "weighted_inner");
  return inner(x, a * y);
}

inline Matrix rank_one_update(const SpdMatrix& base, const Vector& r, double scale) {
  return rank_one_update(base.matrix(), r, scale);
}

inline Vector solve_spd(const SpdMatrix& a, const Vector& b) {
  detail::require_same_size(a.size(), b.size(), "solve_spd");
  return detail::cholesky_solve(a.cholesky_factor(), b);
}

/// Factor-and-solve for an uncertified matrix; throws NotSpd on a bad pivot.
inline Vector solve_spd(const Matrix& a, const Vector& b) {
  detail::require_same_size(a.size(), b.size(), "solve_spd");
  if (!a.is_symmetric()) throw NotSpd("matrix is not symmetric");
  auto l = cholesky(a);
  if (!l) throw NotSpd("Cholesky factorization hit a non-positive pivot");
  return detail::cholesky_solve(*l, b);
}

}  // namespace fixstep
