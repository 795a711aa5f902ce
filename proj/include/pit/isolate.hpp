#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pit/kron.hpp"
#include "pit/roabp.hpp"

namespace pit {

struct GreedyItem {
  std::uint64_t weight = 0;
  ExponentVector monomial;
  Matrix coeff;
};

// Indices of the minimum-weight basis, in ascending weight order.
std::vector<std::size_t> greedy_basis(const Field& f, const std::vector<GreedyItem>& items);
// Same scan over already-flattened coefficient vectors.
std::vector<std::size_t> greedy_basis_vectors(const Field& f, const std::vector<std::uint64_t>& weights,
                                              const std::vector<std::vector<Scalar>>& vectors);

// combined(x) = sum_r rounds[r](x) * prod_{r' > r} radix[r'].
// Blackbox members use one base for every radix; the whitebox construction
// sizes each radix to the round it precedes.
struct LayeredWeight {
  std::vector<WeightFn> rounds;
  std::vector<std::size_t> round_index;  // pairing round each entry belongs to
  std::vector<std::uint64_t> radix;      // radix[0] is unused and set to 1
  std::uint64_t base = 0;                // the common radix, or 0 when radices differ
  WeightFn combined;
};

struct IsolationBlock {
  std::vector<std::size_t> factors;  // factor indices spanned
  std::vector<ExponentVector> monomials;
  std::vector<std::size_t> survivors;  // indices into monomials, ascending weight
  std::size_t rank = 0;
};

struct IsolationRound {
  bool skipped = false;  // the earlier rounds already separate every block
  std::uint64_t prime = 0;
  std::uint64_t cutoff = 0;
  std::uint64_t pairs = 0;
  std::vector<IsolationBlock> blocks;
};

struct IsolationTrace {
  std::vector<IsolationRound> rounds;
  std::vector<ExponentVector> isolated;  // S
};

struct IsolationOptions {
  std::vector<std::size_t> params;
  std::uint64_t c0 = 4;
  bool self_check = true;
  std::uint64_t ceiling = kDefaultCeiling;
};

struct IsolationResult {
  LayeredWeight weight;
  IsolationTrace trace;
  // Sums over factors of the largest and smallest combined monomial weight.
  std::uint64_t weight_max = 0;
  std::uint64_t weight_min = 0;
};

IsolationResult construct_isolating_weights(const std::vector<MatPoly>& factors, const IsolationOptions& opts = {});

// Parameters-only family: the cartesian product of per-round prime candidates.
class CandidateWeights {
 public:
  CandidateWeights(std::size_t n, std::size_t d, std::size_t s, std::size_t w, std::uint32_t delta,
                   std::uint64_t c0 = 4);

  std::size_t round_count() const { return primes_.size(); }
  const std::vector<std::uint64_t>& round_primes(std::size_t r) const { return primes_[r]; }
  std::uint64_t size() const { return size_; }
  // Member with the given per-round prime indices.
  LayeredWeight member(const std::vector<std::size_t>& choice) const;
  LayeredWeight at(std::uint64_t index) const;

 private:
  std::size_t n_;
  std::uint32_t delta_;
  std::vector<std::vector<std::uint64_t>> primes_;
  std::uint64_t size_ = 1;
};

CandidateWeights enumerate_candidate_weights(std::size_t n, std::size_t d, std::size_t s, std::size_t w,
                                             std::uint32_t delta, std::uint64_t c0 = 4);

// Recomputes the greedy basis under wfn and checks both clauses of the definition.
// Parameter variables are folded into the coefficients.
bool is_basis_isolating(const WeightFn& wfn, const MatPoly& D, const std::vector<std::size_t>& params = {});
// The isolated set S found by the same scan (empty if not isolating).
std::vector<ExponentVector> isolated_basis(const WeightFn& wfn, const MatPoly& D,
                                           const std::vector<std::size_t>& params = {});

enum class Mode { Whitebox, Blackbox };

struct HittingOptions {
  std::uint64_t c0 = 4;
  std::uint64_t max_points = 50000000;
};

// Factors isolated for r: folded boundaries (when they carry non-parameter
// variables) around the interior layers.
std::vector<MatPoly> isolation_factors(const Roabp& r);

PointSet roabp_hitting_set(const Roabp& r, Mode mode, const HittingOptions& opts = {});

}  // namespace pit
