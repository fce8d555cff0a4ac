#include "fbm/linalg.hpp"

#include <sstream>

#include "fbm/errors.hpp"

namespace fbm::la {

QMatrix to_rational(const ZMatrix& m) {
  QMatrix q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = Rational(m(i, j));
  return q;
}

ZMatrix to_integer(const QMatrix& m) {
  ZMatrix z(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j))) throw InputError("matrix entry is not an integer");
      z(i, j) = m(i, j).get_num();
    }
  return z;
}

QMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
  QMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw InputError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ZMatrix from_int_rows(const std::vector<std::vector<long>>& rows) {
  ZMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw InputError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool is_symmetric(const QMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

std::string to_string(const QMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << fbm::to_string(m(i, j));
    os << '\n';
  }
  return os.str();
}

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of a non-square matrix");
  QMatrix a = m;
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      a.swap_rows(p, c);
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      Rational f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  QMatrix a = m;
  QMatrix inv = QMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw InputError("matrix is singular");
    a.swap_rows(p, c);
    inv.swap_rows(p, c);
    Rational piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rational f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

std::vector<Rational> row_times(const std::vector<Rational>& v, const QMatrix& m) {
  if (v.size() != m.rows()) throw InputError("dimension mismatch");
  std::vector<Rational> out(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

namespace {

void row_axpy(ZMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}

void col_axpy(ZMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

ZMatrix hermite_basis(const ZMatrix& generators) {
  ZMatrix a = generators;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // Euclid on column c among rows r..end.
    while (true) {
      std::size_t best = rows;
      for (std::size_t i = r; i < rows; ++i)
        if (a(i, c) != 0 && (best == rows || abs(a(i, c)) < abs(a(best, c)))) best = i;
      if (best == rows) break;
      a.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (a(i, c) == 0) continue;
        row_axpy(a, i, r, -floor_div(a(i, c), a(r, c)));
        if (a(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0)
      for (std::size_t j = 0; j < cols; ++j) a(r, j) = -a(r, j);
    for (std::size_t i = 0; i < r; ++i) row_axpy(a, i, r, -floor_div(a(i, c), a(r, c)));
    ++r;
  }
  ZMatrix out(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
  return out;
}

SmithForm smith_form(const ZMatrix& input) {
  ZMatrix a = input;
  const std::size_t m = a.rows(), n = a.cols();
  ZMatrix u = ZMatrix::identity(m), v = ZMatrix::identity(n);
  const std::size_t k = std::min(m, n);
  for (std::size_t t = 0; t < k; ++t) {
    while (true) {
      // Smallest nonzero entry of the remaining block to the pivot.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a(i, j) != 0 && (pi == m || abs(a(i, j)) < abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) break;
      a.swap_rows(t, pi);
      u.swap_rows(t, pi);
      a.swap_cols(t, pj);
      v.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = floor_div(a(i, t), a(t, t));
        row_axpy(a, i, t, -q);
        row_axpy(u, i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = floor_div(a(t, j), a(t, t));
        col_axpy(a, j, t, -q);
        col_axpy(v, j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into the pivot row.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            row_axpy(a, t, i, 1);
            row_axpy(u, t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) a(t, j) = -a(t, j);
      for (std::size_t j = 0; j < m; ++j) u(t, j) = -u(t, j);
    }
  }
  SmithForm s{u, v, {}};
  for (std::size_t i = 0; i < k; ++i) s.d.push_back(a(i, i));
  return s;
}

namespace {

// Gram-Schmidt coefficients of rows from `from` on, given the Gram matrix.
void gram_schmidt(const QMatrix& g, QMatrix& mu, std::vector<Rational>& b, std::size_t from) {
  const std::size_t n = g.rows();
  for (std::size_t i = from; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * b[k];
      mu(i, j) = s / b[j];
    }
    Rational s = g(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * b[k];
    b[i] = s;
    if (b[i] <= 0) throw InputError("Gram matrix is not positive definite");
  }
}

Integer round_half_down(const Rational& r) {
  // Nearest integer, ties toward -infinity.
  return ceil_of(r - make_rational(1, 2));
}

}  // namespace

LllResult lll_gram(const QMatrix& gram) {
  const std::size_t n = gram.rows();
  QMatrix g = gram;
  ZMatrix t = ZMatrix::identity(n);
  if (n == 0) return {t, g};
  QMatrix mu(n, n);
  std::vector<Rational> b(n);
  gram_schmidt(g, mu, b, 0);
  const Rational delta = make_rational(99, 100);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      Integer q = round_half_down(mu(k, jj));
      if (q == 0) continue;
      Rational qr(q);
      // b_k -= q b_j
      for (std::size_t c = 0; c < n; ++c) t(k, c) -= q * t(jj, c);
      const Rational gkk = g(k, k) - 2 * qr * g(k, jj) + qr * qr * g(jj, jj);
      for (std::size_t c = 0; c < n; ++c) {
        if (c == k) continue;
        g(k, c) -= qr * g(jj, c);
        g(c, k) = g(k, c);
      }
      g(k, k) = gkk;
      mu(k, jj) -= qr;
      for (std::size_t i = 0; i < jj; ++i) mu(k, i) -= qr * mu(jj, i);
    }
    if (b[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * b[k - 1]) {
      t.swap_rows(k, k - 1);
      g.swap_rows(k, k - 1);
      g.swap_cols(k, k - 1);
      gram_schmidt(g, mu, b, k - 1);
      k = k > 1 ? k - 1 : 1;
    } else {
      ++k;
    }
  }
  return {t, g};
}

Ldl ldl_positive(const QMatrix& g) {
  const std::size_t n = g.rows();
  Ldl r{QMatrix::identity(n), std::vector<Rational>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= r.l(i, k) * r.l(j, k) * r.d[k];
      r.l(i, j) = s / r.d[j];
    }
    Rational s = g(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= r.l(i, k) * r.l(i, k) * r.d[k];
    if (s <= 0) throw InputError("form is not positive definite");
    r.d[i] = s;
  }
  return r;
}

Inertia inertia(const QMatrix& symmetric) {
  if (!is_symmetric(symmetric)) throw InputError("inertia needs a symmetric matrix");
  QMatrix a = symmetric;
  const std::size_t n = a.rows();
  Inertia in;
  std::size_t t = 0;
  while (t < n) {
    std::size_t p = t;
    while (p < n && a(p, p) == 0) ++p;
    if (p == n) {
      // Zero diagonal: find an off-diagonal entry and add that row/column.
      std::size_t pi = n, pj = n;
      for (std::size_t i = t; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a(i, j) != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) break;
      for (std::size_t c = 0; c < n; ++c) a(pi, c) += a(pj, c);
      for (std::size_t r = 0; r < n; ++r) a(r, pi) += a(r, pj);
      p = pi;
    }
    a.swap_rows(t, p);
    a.swap_cols(t, p);
    const Rational piv = a(t, t);
    (piv > 0 ? in.positive : in.negative) += 1;
    for (std::size_t r = t + 1; r < n; ++r) {
      if (a(r, t) == 0) continue;
      Rational f = a(r, t) / piv;
      for (std::size_t c = t; c < n; ++c) a(r, c) -= f * a(t, c);
    }
    for (std::size_t c = t + 1; c < n; ++c) a(t, c) = 0;
    for (std::size_t r = t + 1; r < n; ++r)
      for (std::size_t c = t + 1; c < r; ++c) a(c, r) = a(r, c);
    ++t;
  }
  in.zero = static_cast<int>(n) - in.positive - in.negative;
  return in;
}

ZMatrix column_reduction(const std::vector<Integer>& w_in, Integer* gcd_out) {
  const std::size_t n = w_in.size();
  std::vector<Integer> w = w_in;
  ZMatrix u = ZMatrix::identity(n);
  std::size_t first = 0;
  while (first < n && w[first] == 0) ++first;
  if (first == n) throw InputError("column reduction of the zero vector");
  if (first != 0) {
    std::swap(w[0], w[first]);
    u.swap_cols(0, first);
  }
  for (std::size_t j = 1; j < n; ++j) {
    if (w[j] == 0) continue;
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), w[0].get_mpz_t(), w[j].get_mpz_t());
    const Integer a = w[0] / g, b = w[j] / g;
    // Columns (c0, cj) <- (s c0 + t cj, -b c0 + a cj); determinant s a + t b = 1.
    for (std::size_t i = 0; i < n; ++i) {
      Integer c0 = u(i, 0), cj = u(i, j);
      u(i, 0) = s * c0 + t * cj;
      u(i, j) = -b * c0 + a * cj;
    }
    w[0] = g;
    w[j] = 0;
  }
  if (w[0] < 0) {
    for (std::size_t i = 0; i < n; ++i) u(i, 0) = -u(i, 0);
    w[0] = -w[0];
  }
  if (gcd_out) *gcd_out = w[0];
  return u;
}

ZMatrix unimodular_inverse(const ZMatrix& m) {
  Rational d = determinant(to_rational(m));
  if (d != 1 && d != -1) throw InputError("matrix is not unimodular");
  return to_integer(inverse(to_rational(m)));
}

}  // namespace fbm::la
