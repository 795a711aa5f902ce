#pragma once

#include <cstddef>
#include <vector>

#include "pit/field.hpp"

namespace pit {

// Dimension of the span of equal-length vectors. Ragged input is a structural error.
std::size_t rank_over_field(const Field& f, const std::vector<std::vector<Scalar>>& vectors);

// Incrementally grown span, kept in reduced echelon form.
class Span {
 public:
  Span(const Field& f, std::size_t dim) : f_(f), dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  bool contains(const std::vector<Scalar>& v) const;
  // Adds v if independent; returns whether it was added.
  bool insert(const std::vector<Scalar>& v);

 private:
  std::vector<Scalar> reduce(std::vector<Scalar> v) const;

  Field f_;
  std::size_t dim_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace pit
