#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pit/isolate.hpp"
#include "pit/roabp.hpp"

namespace pit {

struct LinearForm {
  Scalar constant = 0;
  std::map<std::size_t, Scalar> coeffs;  // zero coefficients are not stored

  std::vector<std::size_t> variables() const;
  bool is_constant() const { return coeffs.empty(); }
  bool operator==(const LinearForm&) const = default;
};

struct Gate {
  Scalar scale = 0;
  std::vector<LinearForm> forms;
  bool operator==(const Gate&) const = default;
};

// sum_i a_i prod_j l_ij. Construction checks that the forms of a gate use
// disjoint variables.
class Depth3Circuit {
 public:
  Depth3Circuit(Field f, std::size_t n, std::vector<Gate> gates);

  const Field& field() const { return field_; }
  std::size_t n() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t k() const { return gates_.size(); }

  bool operator==(const Depth3Circuit& o) const {
    return field_ == o.field_ && n_ == o.n_ && gates_ == o.gates_;
  }

 private:
  Field field_;
  std::size_t n_;
  std::vector<Gate> gates_;
};

ScalarPoly expand(const Depth3Circuit& c);
Scalar evaluate(const Depth3Circuit& c, const std::vector<Scalar>& point);

// Colors sorted internally and ordered by their smallest variable.
struct Partition {
  std::vector<std::vector<std::size_t>> colors;
  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition&) const = default;
};

// Validates an exact cover of `universe` and canonicalizes.
Partition make_partition(std::vector<std::vector<std::size_t>> colors, const std::vector<std::size_t>& universe);
// Colors of the gate's non-constant forms, plus a singleton for every variable
// of `universe` the gate does not mention; forms are intersected with `universe`.
Partition gate_partition(const Gate& g, const std::vector<std::size_t>& universe);
Partition gate_partition(const Gate& g, std::size_t n);
Partition restrict_partition(const Partition& p, const std::vector<std::size_t>& subset);

// Classes of P_j's colors (as color indices) under reachability through the
// colors of P_1..P_{j-1}. j is 1-based.
std::vector<std::vector<std::size_t>> friendly_neighborhoods(const std::vector<Partition>& seq, std::size_t j);
std::size_t compute_distance(const std::vector<Partition>& seq);

struct GateOrder {
  std::vector<std::size_t> order;
  std::size_t distance = 0;
};
// Minimum over all gate orderings (k <= 6), first minimum in lexicographic order.
GateOrder best_gate_order(const Depth3Circuit& c, std::size_t max_k = 6);

// Refined partitions P'_i (unions of friendly neighborhoods) and a total order
// in which every color of every P'_i is contiguous.
struct RespectingOrder {
  std::vector<Partition> refined;
  std::vector<std::size_t> order;
};
RespectingOrder respecting_order(const std::vector<Partition>& seq);

Roabp sparse_to_roabp(const ScalarPoly& f, const std::vector<std::size_t>& order);

struct ReductionOptions {
  // Variables outside the base set, carried symbolically in the coefficients.
  std::vector<std::size_t> params;
  // Merge consecutive single-variable layers inside each color of P'_1.
  bool group_by_color = true;
  // If set, the reduction fails unless the gate order achieves this distance.
  std::optional<std::size_t> require_distance;
};

struct Reduction {
  Roabp roabp;
  std::size_t distance = 0;
  std::size_t width_bound = 0;  // sum over gates of max_j sp(Q_ij)
  RespectingOrder order;
};

Reduction circuit_to_roabp(const Depth3Circuit& c, const std::vector<std::size_t>& gate_order,
                           const ReductionOptions& opts = {});

struct BaseSet {
  std::vector<std::size_t> variables;
  std::vector<std::size_t> order;  // permutation of BaseSetDecomposition::partitions
  std::size_t distance = 0;
};

struct BaseSetDecomposition {
  std::vector<Partition> partitions;  // distinct input partitions
  std::vector<BaseSet> sets;
  double epsilon = 1;
  double cap = 1;  // 2^{c-1} n^{1-epsilon}
};

BaseSetDecomposition decompose_base_sets(const std::vector<Partition>& partitions);

struct SumSmlOptions {
  std::uint64_t ceiling = 10000000;
  std::uint64_t c0 = 4;
};

struct SumSmlResult {
  bool nonzero = false;
  std::optional<std::vector<Scalar>> witness;
  std::uint64_t evaluations = 0;
  std::uint64_t sweep_size = 0;
  std::vector<std::uint64_t> base_set_sizes;  // |H_B| per base set
  BaseSetDecomposition decomposition;
};

SumSmlResult sum_sml_whitebox_test(const Depth3Circuit& c, const SumSmlOptions& opts = {});

}  // namespace pit
