#pragma once

#include <cstddef>
#include <vector>

#include "pit/field.hpp"

namespace pit {

// Dense row-major matrix of residues.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  static Matrix identity(std::size_t w);

  Scalar& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Scalar operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool is_zero() const;
  auto operator<=>(const Matrix&) const = default;
};

Matrix mat_add(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b);
Matrix mat_scale(const Field& f, const Matrix& a, Scalar c);
void mat_add_into(const Field& f, Matrix& acc, const Matrix& a);
// acc += c * a
void mat_axpy(const Field& f, Matrix& acc, Scalar c, const Matrix& a);

Scalar determinant(const Field& f, Matrix m);

}  // namespace pit
