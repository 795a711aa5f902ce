#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "pit/isolate.hpp"
#include "pit/roabp.hpp"

namespace pit {

enum class Concentration { Support, Block };

struct RankPair {
  std::size_t low = 0;
  std::size_t full = 0;
  bool concentrated() const { return low == full; }
};

// Blocks of r in layer order: x_0, x_1..x_d, x_{d+1}.
std::vector<std::vector<std::size_t>> layer_blocks(const Roabp& r);
std::size_t block_support(const ExponentVector& e, const std::vector<std::vector<std::size_t>>& blocks);

// low counts coefficients with supp(e) < bound (or bs(e) < bound in block mode).
RankPair concentration_rank(const MatPoly& D, const std::vector<std::vector<std::size_t>>* blocks, std::size_t bound,
                            Concentration mode);
RankPair concentration_rank(const ScalarPoly& C, const std::vector<std::vector<std::size_t>>* blocks,
                            std::size_t bound, Concentration mode);

inline constexpr std::size_t kUnboundedSupport = std::numeric_limits<std::size_t>::max();

// 1 + 2 min(ceil(log2(w^2 s)), mu).
std::size_t ell_parameter(std::size_t w, std::size_t s, std::size_t mu);

struct ShiftMap {
  std::vector<std::uint64_t> exponents;  // x_i -> x_i + t^{a_i}
  std::uint64_t prime = 0;
  std::uint64_t cutoff = 0;
};

struct ShiftResult {
  ShiftMap map;
  Scalar t0 = 0;
  std::vector<Scalar> offsets;  // t0^{a_i}
  std::size_t ell = 0;
  std::uint64_t pairs = 0;
};

struct ShiftOptions {
  std::uint64_t c0 = 4;
  std::uint64_t ceiling = kDefaultCeiling;
  std::uint64_t t0_tries = 256;
};

ShiftResult find_concentrating_shift(const Roabp& r, const ShiftOptions& opts = {});

// Zero outside some min(ell - 1, n)-subset, values in {1, ..., delta + 1} inside it.
PointSet low_support_hitting_set(const Field& f, std::size_t n, std::uint32_t delta, std::size_t ell);

struct InvertibleOptions {
  std::uint64_t c0 = 4;
  std::uint64_t max_points = 200000000;
};

PointSet invertible_hitting_set(const Roabp& r, Mode mode, const InvertibleOptions& opts = {});

struct Width2Factorization {
  ScalarPoly alpha;
  std::vector<Roabp> chain;
  std::vector<std::size_t> singular;  // 0-based indices of the split layers
  bool zero = false;                  // some layer vanishes, so C = 0
};

Width2Factorization factorize_width2(const Roabp& r);

// Degree-(h-1) vector interpolant through the anchors at the given nodes.
class LagrangeCurve {
 public:
  LagrangeCurve(const Field& f, std::vector<std::vector<Scalar>> anchors, std::vector<Scalar> nodes);

  std::size_t size() const { return anchors_.size(); }
  const std::vector<Scalar>& nodes() const { return nodes_; }
  const std::vector<std::vector<Scalar>>& anchors() const { return anchors_; }
  std::vector<Scalar> operator()(Scalar u) const;
  void eval(Scalar u, std::vector<Scalar>& out) const;

 private:
  Field f_;
  std::vector<std::vector<Scalar>> anchors_;
  std::vector<Scalar> nodes_;
  std::vector<Scalar> bary_;  // barycentric weights
  bool consecutive_ = false;
};

LagrangeCurve lagrange_curve(const Field& f, const PointSet& h, const std::vector<Scalar>& nodes);

// Sum over layers and boundaries of the largest total degree of an entry.
std::uint64_t total_degree_bound(const Roabp& r);

// Curve through H = concatenated invertible sets of the chain, u = 0 .. (d+2) Delta |H|.
PointSet width2_hitting_set(const Roabp& r, Mode mode, const InvertibleOptions& opts = {});

}  // namespace pit
