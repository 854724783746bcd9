#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qcrys {

using Rational = mpq_class;

/// Dense row-major matrix over Q. Shapes with a zero dimension are valid and
/// model maps to or from the zero space.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw InputError("matrix-shape", "ragged matrix literal");
      std::size_t j = 0;
      for (long x : row) m(i, j++) = x;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Rational trace() const {
    require_square("trace");
    Rational s = 0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
  }

  Matrix column(std::size_t c) const {
    Matrix out(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, c);
    return out;
  }

  Matrix columns(std::size_t first, std::size_t count) const {
    Matrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
  }

  Matrix row_block(std::size_t first, std::size_t count) const {
    Matrix out(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw InputError("matrix-shape", "product of " + a.shape() + " and " + b.shape());
    }
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (sgn(x) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(k, j);
      }
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.require_same_shape(b, "sum");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.require_same_shape(b, "difference");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }

  friend Matrix operator*(const Rational& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  Matrix& operator+=(const Matrix& b) { return *this = *this + b; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << ']';
  }

 private:
  void require_square(const char* what) const {
    if (rows_ != cols_) throw InputError("matrix-shape", std::string(what) + " of non-square " + shape());
  }
  void require_same_shape(const Matrix& b, const char* what) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) {
      throw InputError("matrix-shape", std::string(what) + " of " + shape() + " and " + b.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// [a | b]; row counts must agree.
inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InputError("matrix-shape", "hstack of " + a.shape() + " and " + b.shape());
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

/// [a ; b]; column counts must agree.
inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw InputError("matrix-shape", "vstack of " + a.shape() + " and " + b.shape());
  Matrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

/// Reduced row echelon form. Pivot columns are appended to `pivots` when given.
inline Matrix rref(Matrix m, std::vector<std::size_t>* pivots = nullptr) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && sgn(m(p, col)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      const Rational factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
    }
    if (pivots) pivots->push_back(col);
    ++row;
  }
  return m;
}

inline std::size_t rank(const Matrix& m) {
  std::vector<std::size_t> pivots;
  rref(m, &pivots);
  return pivots.size();
}

/// Basis of {x : m x = 0} as the columns of the result (cols() x nullity).
inline Matrix kernel_basis(const Matrix& m) {
  std::vector<std::size_t> pivots;
  const Matrix r = rref(m, &pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);

  Matrix basis(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    basis(f, k) = 1;
    for (std::size_t r_idx = 0; r_idx < pivots.size(); ++r_idx) basis(pivots[r_idx], k) = -r(r_idx, f);
  }
  return basis;
}

/// Linearly independent columns of `m` spanning its column space, chosen
/// greedily left to right.
inline Matrix column_space_basis(const Matrix& m) {
  std::vector<std::size_t> pivots;
  rref(m, &pivots);
  Matrix out(m.rows(), pivots.size());
  for (std::size_t k = 0; k < pivots.size(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = m(i, pivots[k]);
  return out;
}

/// Rows spanning the annihilator {y : y m = 0}.
inline Matrix left_annihilator(const Matrix& m) { return kernel_basis(m.transpose()).transpose(); }

/// Basis (columns) of span(a) ∩ span(b), for column-independent a.
inline Matrix intersect_spans(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0 || b.cols() == 0) return Matrix(a.rows(), 0);
  // a x = b y  <=>  [a | -b] (x; y) = 0
  const Matrix k = kernel_basis(hstack(a, Rational(-1) * b));
  return column_space_basis(a * k.row_block(0, a.cols()));
}

/// Completes the independent columns of `partial` to a basis of a subspace of
/// dimension `target` by appending standard basis vectors e_0, e_1, ... in order.
inline Matrix complete_with_standard(const Matrix& partial, std::size_t target) {
  Matrix basis = partial;
  std::size_t r = rank(basis);
  for (std::size_t k = 0; k < basis.rows() && r < target; ++k) {
    Matrix e(basis.rows(), 1);
    e(k, 0) = 1;
    Matrix candidate = hstack(basis, e);
    if (rank(candidate) > r) {
      basis = std::move(candidate);
      ++r;
    }
  }
  if (r != target) throw InputError("subspace-dimension", "cannot complete to requested dimension");
  return basis;
}

inline Rational determinant(Matrix m) {
  if (m.rows() != m.cols()) throw InputError("matrix-shape", "determinant of " + m.shape());
  Rational det = 1;
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && sgn(m(p, col)) == 0) ++p;
    if (p == n) return 0;
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (sgn(m(i, col)) == 0) continue;
      const Rational factor = m(i, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(i, j) -= factor * m(col, j);
    }
  }
  return det;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("matrix-shape", "inverse of " + m.shape());
  const std::size_t n = m.rows();
  std::vector<std::size_t> pivots;
  const Matrix r = rref(hstack(m, Matrix::identity(n)), &pivots);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  return r.columns(n, n);
}

/// Unique x with p x = b, for p of full column rank. Throws when b is not in
/// the column space of p.
inline Matrix solve_in_basis(const Matrix& p, const Matrix& b) {
  if (p.rows() != b.rows()) throw InputError("matrix-shape", "solve " + p.shape() + " against " + b.shape());
  std::vector<std::size_t> pivots;
  const Matrix r = rref(hstack(p, b), &pivots);
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    if (pivots[k] != k) throw InputError("not-in-span", "right-hand side outside column space");
  }
  if (pivots.size() != p.cols()) throw InputError("not-in-span", "right-hand side outside column space");
  Matrix x(p.cols(), b.cols());
  for (std::size_t i = 0; i < p.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = r(i, p.cols() + j);
  return x;
}

}  // namespace qcrys
