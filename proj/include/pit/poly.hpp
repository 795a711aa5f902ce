#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "pit/field.hpp"
#include "pit/matrix.hpp"

namespace pit {

// Dense exponent list over the ambient variables; std::vector's ordering is
// the lexicographic term order used everywhere.
using ExponentVector = std::vector<std::uint32_t>;

std::size_t support_size(const ExponentVector& e);
std::uint64_t total_degree(const ExponentVector& e);
ExponentVector monomial_mul(const ExponentVector& a, const ExponentVector& b);
// Exponents of the variables in `vars` kept, the rest zeroed.
ExponentVector restrict_to(const ExponentVector& e, const std::vector<std::size_t>& vars);

// Every monomial over `vars` with individual degree <= delta and support <= max_support.
std::vector<ExponentVector> enumerate_monomials(std::size_t n, const std::vector<std::size_t>& vars,
                                                std::uint32_t delta, std::size_t max_support);

class ScalarPoly {
 public:
  using TermMap = std::map<ExponentVector, Scalar>;

  ScalarPoly(Field f, std::size_t n) : field_(f), n_(n) {}
  static ScalarPoly constant(Field f, std::size_t n, Scalar c);
  static ScalarPoly monomial(Field f, std::size_t n, const ExponentVector& e, Scalar c = 1);
  static ScalarPoly variable(Field f, std::size_t n, std::size_t i);

  const Field& field() const { return field_; }
  std::size_t n() const { return n_; }
  const TermMap& terms() const { return terms_; }

  // Accumulates c into the coefficient of e; zero results are dropped.
  void add_term(const ExponentVector& e, Scalar c);
  Scalar coeff(const ExponentVector& e) const;

  bool is_zero() const { return terms_.empty(); }
  std::size_t sparsity() const { return terms_.size(); }
  std::size_t max_support() const;
  std::uint32_t max_individual_degree() const;
  std::uint64_t max_total_degree() const;
  // Variables with a nonzero exponent in some term, ascending.
  std::vector<std::size_t> variables() const;

  bool operator==(const ScalarPoly& o) const { return field_ == o.field_ && n_ == o.n_ && terms_ == o.terms_; }

 private:
  Field field_;
  std::size_t n_;
  TermMap terms_;
};

class MatPoly {
 public:
  using TermMap = std::map<ExponentVector, Matrix>;

  MatPoly(Field f, std::size_t n, std::size_t w) : field_(f), n_(n), w_(w) {}
  static MatPoly constant(Field f, std::size_t n, const Matrix& m);
  static MatPoly identity(Field f, std::size_t n, std::size_t w);
  // Square grid of scalar polynomials into a matrix polynomial.
  static MatPoly from_grid(const std::vector<std::vector<ScalarPoly>>& grid);

  const Field& field() const { return field_; }
  std::size_t n() const { return n_; }
  std::size_t width() const { return w_; }
  const TermMap& terms() const { return terms_; }

  void add_term(const ExponentVector& e, const Matrix& m);
  ScalarPoly entry(std::size_t i, std::size_t j) const;
  std::vector<std::vector<ScalarPoly>> grid() const;

  bool is_zero() const { return terms_.empty(); }
  std::size_t sparsity() const { return terms_.size(); }
  std::size_t max_support() const;
  std::uint32_t max_individual_degree() const;
  std::vector<std::size_t> variables() const;

  bool operator==(const MatPoly& o) const {
    return field_ == o.field_ && n_ == o.n_ && w_ == o.w_ && terms_ == o.terms_;
  }

 private:
  Field field_;
  std::size_t n_;
  std::size_t w_;
  TermMap terms_;
};

// Univariate polynomial in t, ascending coefficients, trailing zeros trimmed.
struct UniPoly {
  Field field;
  std::vector<Scalar> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  // Degree of the lowest nonzero term; requires !is_zero().
  std::size_t lowest_degree() const;
  Scalar eval(Scalar t) const;
  void trim();
};

ScalarPoly poly_add(const ScalarPoly& a, const ScalarPoly& b);
ScalarPoly poly_sub(const ScalarPoly& a, const ScalarPoly& b);
ScalarPoly poly_mul(const ScalarPoly& a, const ScalarPoly& b);
ScalarPoly poly_scale(const ScalarPoly& a, Scalar c);
MatPoly poly_add(const MatPoly& a, const MatPoly& b);
MatPoly poly_mul(const MatPoly& a, const MatPoly& b);
MatPoly poly_scale(const MatPoly& a, Scalar c);

Scalar eval_poly(const ScalarPoly& f, const std::vector<Scalar>& point);
Matrix eval_poly(const MatPoly& f, const std::vector<Scalar>& point);

// x_i -> x_i + offsets[i].
ScalarPoly shift(const ScalarPoly& f, const std::vector<Scalar>& offsets);
MatPoly shift(const MatPoly& f, const std::vector<Scalar>& offsets);

struct DetOptions {
  std::size_t max_width = 4;
  std::size_t term_ceiling = 1000000;
};

// Symbolic determinant by cofactor expansion along the first row.
ScalarPoly det_poly(const std::vector<std::vector<ScalarPoly>>& grid, const DetOptions& opts = {});

}  // namespace pit
