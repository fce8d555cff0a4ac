#pragma once

// Small dense exact matrices: determinants, inverses, Hermite and Smith
// forms, LLL on Gram matrices, LDL and inertia of symmetric forms.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fbm/rational.hpp"

namespace fbm::la {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using ZMatrix = Matrix<Integer>;
using QMatrix = Matrix<Rational>;

QMatrix to_rational(const ZMatrix& m);
// Throws InputError if an entry is not integral.
ZMatrix to_integer(const QMatrix& m);
QMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
ZMatrix from_int_rows(const std::vector<std::vector<long>>& rows);
bool is_symmetric(const QMatrix& m);
std::string to_string(const QMatrix& m);

Rational determinant(const QMatrix& m);
// Throws InputError if singular.
QMatrix inverse(const QMatrix& m);
// Row vector times matrix.
std::vector<Rational> row_times(const std::vector<Rational>& v, const QMatrix& m);

// Row-style Hermite normal form; zero rows dropped. Rows are a basis of the
// Z-span of the input rows.
ZMatrix hermite_basis(const ZMatrix& generators);

struct SmithForm {
  ZMatrix u, v;            // unimodular, u * a * v = diag(d)
  std::vector<Integer> d;  // nonnegative, d[i] | d[i+1], zeros last
};
SmithForm smith_form(const ZMatrix& a);

// LLL with delta = 3/4 on a positive definite Gram matrix. reduced = t g t^T
// where the rows of t are the reduced basis in terms of the old one.
struct LllResult {
  ZMatrix t;
  QMatrix reduced;
};
LllResult lll_gram(const QMatrix& gram);

// g = l diag(d) l^T with l unit lower triangular. Throws InputError unless g
// is positive definite.
struct Ldl {
  QMatrix l;
  std::vector<Rational> d;
};
Ldl ldl_positive(const QMatrix& g);

struct Inertia {
  int positive = 0, negative = 0, zero = 0;
};
Inertia inertia(const QMatrix& symmetric);

// For a nonzero integer row w, a unimodular u with w * u = (g, 0, ..., 0),
// g = gcd(w) > 0.
ZMatrix column_reduction(const std::vector<Integer>& w, Integer* gcd_out = nullptr);

// Unimodular inverse of an integer matrix with determinant +-1.
ZMatrix unimodular_inverse(const ZMatrix& m);

}  // namespace fbm::la
