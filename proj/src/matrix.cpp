#include "pit/matrix.hpp"

#include <algorithm>

#include "pit/errors.hpp"

namespace pit {

Matrix Matrix::identity(std::size_t w) {
  Matrix m(w, w);
  for (std::size_t i = 0; i < w; ++i) m(i, i) = 1;
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data.begin(), data.end(), [](Scalar v) { return v == 0; });
}

Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b) {
  Matrix r = a;
  mat_add_into(f, r, b);
  return r;
}

void mat_add_into(const Field& f, Matrix& acc, const Matrix& a) {
  if (acc.rows != a.rows || acc.cols != a.cols) throw StructuralError("matrix shape mismatch in addition");
  for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] = f.add(acc.data[i], a.data[i]);
}

void mat_axpy(const Field& f, Matrix& acc, Scalar c, const Matrix& a) {
  if (acc.rows != a.rows || acc.cols != a.cols) throw StructuralError("matrix shape mismatch in addition");
  for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] = f.add(acc.data[i], f.mul(c, a.data[i]));
}

Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw StructuralError("matrix shape mismatch in product");
  Matrix r(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      Scalar x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) r(i, j) = f.add(r(i, j), f.mul(x, b(k, j)));
    }
  }
  return r;
}

Matrix mat_scale(const Field& f, const Matrix& a, Scalar c) {
  Matrix r = a;
  for (auto& v : r.data) v = f.mul(v, c);
  return r;
}

Scalar determinant(const Field& f, Matrix m) {
  if (m.rows != m.cols) throw StructuralError("determinant of a non-square matrix");
  std::size_t n = m.rows;
  Scalar det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = f.neg(det);
    }
    det = f.mul(det, m(c, c));
    Scalar inv = f.inv(m(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      Scalar factor = f.mul(m(r, c), inv);
      if (factor == 0) continue;
      for (std::size_t j = c; j < n; ++j) m(r, j) = f.sub(m(r, j), f.mul(factor, m(c, j)));
    }
  }
  return det;
}

}  // namespace pit
