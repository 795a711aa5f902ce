#include "pit/linalg.hpp"

#include "pit/errors.hpp"

namespace pit {

std::size_t rank_over_field(const Field& f, const std::vector<std::vector<Scalar>>& vectors) {
  if (vectors.empty()) return 0;
  std::size_t k = vectors.front().size();
  Span span(f, k);
  for (const auto& v : vectors) {
    if (v.size() != k) throw StructuralError("ragged vectors in rank computation");
    span.insert(v);
  }
  return span.rank();
}

std::vector<Scalar> Span::reduce(std::vector<Scalar> v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Scalar c = v[pivots_[r]];
    if (c == 0) continue;
    const auto& row = rows_[r];
    for (std::size_t j = pivots_[r]; j < dim_; ++j) {
      if (row[j]) v[j] = f_.sub(v[j], f_.mul(c, row[j]));
    }
  }
  return v;
}

bool Span::contains(const std::vector<Scalar>& v) const {
  if (v.size() != dim_) throw StructuralError("vector length does not match span dimension");
  auto red = reduce(v);
  for (Scalar x : red) {
    if (x) return false;
  }
  return true;
}

bool Span::insert(const std::vector<Scalar>& v) {
  if (v.size() != dim_) throw StructuralError("vector length does not match span dimension");
  auto red = reduce(v);
  std::size_t piv = 0;
  while (piv < dim_ && red[piv] == 0) ++piv;
  if (piv == dim_) return false;
  Scalar inv = f_.inv(red[piv]);
  for (std::size_t j = piv; j < dim_; ++j) red[j] = f_.mul(red[j], inv);
  // Keep existing rows reduced against the new pivot.
  for (auto& row : rows_) {
    Scalar c = row[piv];
    if (c == 0) continue;
    for (std::size_t j = piv; j < dim_; ++j) {
      if (red[j]) row[j] = f_.sub(row[j], f_.mul(c, red[j]));
    }
  }
  rows_.push_back(std::move(red));
  pivots_.push_back(piv);
  return true;
}

}  // namespace pit
