#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pit/poly.hpp"
#include "pit/weight.hpp"

namespace pit {

struct MonomialPair {
  ExponentVector a, b;
};

class PairSet {
 public:
  PairSet(std::size_t n, std::uint32_t delta) : n_(n), delta_(delta) {}

  // Rejects equal monomials and exponents above delta.
  void add(const ExponentVector& a, const ExponentVector& b);

  std::size_t n() const { return n_; }
  std::uint32_t delta() const { return delta_; }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<MonomialPair>& pairs() const { return pairs_; }

 private:
  std::size_t n_;
  std::uint32_t delta_;
  std::vector<MonomialPair> pairs_;
};

// x_i -> (delta+1)^{i-1}.
WeightFn naive_kronecker(std::size_t n, std::uint32_t delta);

// x_i -> (delta+1)^{i-1} mod p, with a zero residue replaced by p.
WeightFn prime_weight(std::size_t n, std::uint32_t delta, std::uint64_t p);

// floor(N log2 N) with N = c0 * n * pairs * ceil(log2(delta + 2)).
std::uint64_t kron_cutoff(std::size_t n, std::uint32_t delta, std::uint64_t pairs, std::uint64_t c0 = 4);

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

bool separates(const WeightFn& w, const PairSet& a);
// True iff w is injective on every group (all pairs inside a group separated).
bool separates_groups(const WeightFn& w, const std::vector<std::vector<ExponentVector>>& groups);

struct SeparatorFamily {
  std::uint64_t cutoff = 0;
  std::vector<std::uint64_t> primes;
  std::vector<WeightFn> candidates;
  std::optional<std::size_t> first_verified;
};

// Every prime candidate up to the cutoff, plus the index of the first that
// separates all of A.
SeparatorFamily separating_weights(std::size_t n, std::uint32_t delta, const PairSet& a, std::uint64_t c0 = 4);

struct Separator {
  WeightFn weight;
  std::uint64_t prime = 0;
  std::uint64_t cutoff = 0;
};

// First verified candidate only; throws InternalError if none lies within the cutoff.
Separator first_separating_weight(std::size_t n, std::uint32_t delta, const PairSet& a, std::uint64_t c0 = 4);
Separator first_separating_weight(std::size_t n, std::uint32_t delta,
                                  const std::vector<std::vector<ExponentVector>>& groups, std::uint64_t c0 = 4);

// Number of unordered pairs inside the groups.
std::uint64_t group_pair_count(const std::vector<std::vector<ExponentVector>>& groups);

}  // namespace pit
