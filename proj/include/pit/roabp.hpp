#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pit/poly.hpp"
#include "pit/weight.hpp"

namespace pit {

// A boundary vector of scalar polynomials over its own (possibly empty) block.
struct Boundary {
  std::vector<std::size_t> block;
  std::vector<ScalarPoly> vec;
};

// left^T * D_1 * ... * D_d * right, each D_i supported on its own block.
// Parameter variables may occur anywhere; they are never isolated and are
// treated as part of the coefficients by the isolation machinery.
class Roabp {
 public:
  Roabp(Field f, std::size_t n, std::size_t w, std::vector<std::vector<std::size_t>> blocks,
        std::vector<MatPoly> layers, Boundary left, Boundary right, std::vector<std::size_t> params = {});

  static Roabp with_constant_boundaries(Field f, std::size_t n, std::vector<std::vector<std::size_t>> blocks,
                                        std::vector<MatPoly> layers, const std::vector<Scalar>& s,
                                        const std::vector<Scalar>& t);

  const Field& field() const { return field_; }
  std::size_t n() const { return n_; }
  std::size_t width() const { return w_; }
  std::size_t depth() const { return layers_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  const std::vector<MatPoly>& layers() const { return layers_; }
  const Boundary& left() const { return left_; }
  const Boundary& right() const { return right_; }
  const std::vector<std::size_t>& params() const { return params_; }

  std::uint32_t degree_bound() const;
  // Over interior layers and the distinct monomials of each boundary vector.
  std::size_t sparsity_bound() const;
  std::size_t support_bound() const;

  bool operator==(const Roabp& o) const;

 private:
  Field field_;
  std::size_t n_;
  std::size_t w_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<MatPoly> layers_;
  Boundary left_, right_;
  std::vector<std::size_t> params_;
};

// A boundary vector as a w x w matrix polynomial: row 0 (left) or column 0 (right).
MatPoly boundary_as_row(const Roabp& r);
MatPoly boundary_as_column(const Roabp& r);

struct Provenance {
  std::string generator;
  std::vector<std::pair<std::string, std::string>> params;
};

// Ordered point list. Large generators are lazy: points are produced on demand
// from their index, so sets beyond memory can still be swept and streamed.
class PointSet {
 public:
  using Generator = std::function<void(std::uint64_t, std::vector<Scalar>&)>;

  PointSet(std::size_t n, Provenance prov) : n_(n), prov_(std::move(prov)) {}
  static PointSet lazy(std::size_t n, std::uint64_t count, Generator gen, Provenance prov);

  std::size_t n() const { return n_; }
  std::uint64_t size() const { return gen_ ? count_ : points_.size(); }
  bool is_lazy() const { return static_cast<bool>(gen_); }
  std::vector<Scalar> at(std::uint64_t i) const;
  void at(std::uint64_t i, std::vector<Scalar>& out) const;
  void push_back(std::vector<Scalar> p);

  const Provenance& provenance() const { return prov_; }
  Provenance& provenance() { return prov_; }

 private:
  std::size_t n_;
  Provenance prov_;
  std::vector<std::vector<Scalar>> points_;
  std::uint64_t count_ = 0;
  Generator gen_;
};

Scalar evaluate(const Roabp& r, const std::vector<Scalar>& point);

struct Expansion {
  MatPoly matrix_part;
  ScalarPoly scalar_part;
};

inline constexpr std::uint64_t kDefaultCeiling = 1000000;

// Brute-force oracle. Throws CapabilityError when the product of layer
// sparsities exceeds the ceiling.
Expansion expand(const Roabp& r, std::uint64_t ceiling = kDefaultCeiling);

// C(t^{w(x_1)}, ..., t^{w(x_n)}) by substituting layer by layer.
UniPoly weighted_substitute(const Roabp& r, const WeightFn& wfn, std::uint64_t max_degree = 100000000);

}  // namespace pit
