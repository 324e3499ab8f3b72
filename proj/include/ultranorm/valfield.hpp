#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ultranorm/error.hpp"
#include "ultranorm/rational.hpp"

namespace ultranorm {

using Vector = std::vector<Rat>;

/// The rationals with either a p-adic or the trivial valuation. The absolute
/// value is normalized as |x| = exp(-val(x)), so |p| = e^-1 and every log of
/// an absolute value is an exact rational.
class FieldSpec {
 public:
  enum class Kind { padic, trivial };

  static FieldSpec padic(long p) {
    if (!is_prime(p)) throw Error(ErrorCode::invalid_argument, std::to_string(p) + " is not prime");
    return FieldSpec(Kind::padic, p);
  }
  static FieldSpec trivial() { return FieldSpec(Kind::trivial, 0); }

  Kind kind() const { return kind_; }
  long prime() const { return prime_; }
  bool is_trivial() const { return kind_ == Kind::trivial; }

  ExtRat val(const Rat& a) const {
    if (a == 0) return ExtRat::infinity();
    if (kind_ == Kind::trivial) return ExtRat(0L);
    return ExtRat(Rat(order(a.get_num()) - order(a.get_den())));
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind_ == b.kind_ && a.prime_ == b.prime_;
  }

  std::string describe() const {
    return kind_ == Kind::trivial ? std::string("trivial") : "p-adic(" + std::to_string(prime_) + ")";
  }

  static bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

 private:
  FieldSpec(Kind kind, long p) : kind_(kind), prime_(p) {}

  long order(const Int& n) const {
    if (n == 0) return 0;
    Int rest;
    Int p(prime_);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
  }

  Kind kind_;
  long prime_;
};

/// Valuation of a scalar. +inf exactly for zero.
inline ExtRat val(const FieldSpec& spec, const Rat& a) { return spec.val(a); }

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_columns(const std::vector<Vector>& columns) {
    if (columns.empty()) return Matrix();
    Matrix m(columns.front().size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != m.rows_)
        throw Error(ErrorCode::dimension_mismatch, "ragged column list");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_column(std::size_t j, const Vector& v) {
    if (v.size() != rows_) throw Error(ErrorCode::dimension_mismatch, "column length");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  friend Vector operator*(const Matrix& m, const Vector& v) {
    if (v.size() != m.cols_) throw Error(ErrorCode::dimension_mismatch, "matrix-vector product");
    Vector out(m.rows_);
    for (std::size_t i = 0; i < m.rows_; ++i) {
      Rat acc = 0;
      for (std::size_t j = 0; j < m.cols_; ++j)
        if (sgn(v[j]) != 0) acc += m(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::dimension_mismatch, "matrix product");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (sgn(a(i, k)) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

namespace detail {

// Gauss-Jordan on [m | rhs]; returns the determinant of m and leaves rhs
// replaced by m^-1 rhs when m is invertible.
inline Rat eliminate(Matrix m, Matrix* rhs) {
  if (!m.is_square()) throw Error(ErrorCode::dimension_mismatch, "square matrix expected");
  const std::size_t n = m.rows();
  Rat det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(m(pivot, col)) == 0) ++pivot;
    if (pivot == n) return Rat(0);
    if (pivot != col) {
      det = -det;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      if (rhs)
        for (std::size_t j = 0; j < rhs->cols(); ++j) std::swap((*rhs)(pivot, j), (*rhs)(col, j));
    }
    const Rat p = m(col, col);
    det *= p;
    const Rat inv = 1 / p;
    for (std::size_t j = col; j < n; ++j) m(col, j) *= inv;
    if (rhs)
      for (std::size_t j = 0; j < rhs->cols(); ++j) (*rhs)(col, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(m(i, col)) == 0) continue;
      const Rat f = m(i, col);
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
      if (rhs)
        for (std::size_t j = 0; j < rhs->cols(); ++j) (*rhs)(i, j) -= f * (*rhs)(col, j);
    }
  }
  return det;
}

}  // namespace detail

inline Rat det(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::dimension_mismatch, "det of a non-square matrix");
  if (m.rows() == 0) return Rat(1);
  return detail::eliminate(m, nullptr);
}

/// Returns a with B a = x.
inline Vector solve(const Matrix& b, const Vector& x) {
  if (!b.is_square() || b.rows() != x.size())
    throw Error(ErrorCode::dimension_mismatch, "solve: shape mismatch");
  Matrix rhs(x.size(), 1);
  rhs.set_column(0, x);
  if (detail::eliminate(b, &rhs) == 0) throw Error(ErrorCode::singular_matrix, "solve: singular matrix");
  return rhs.column(0);
}

inline Matrix inverse(const Matrix& b) {
  if (!b.is_square()) throw Error(ErrorCode::dimension_mismatch, "inverse of a non-square matrix");
  Matrix rhs = Matrix::identity(b.rows());
  if (detail::eliminate(b, &rhs) == 0) throw Error(ErrorCode::singular_matrix, "inverse: singular matrix");
  return rhs;
}

}  // namespace ultranorm
