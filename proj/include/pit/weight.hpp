#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pit/poly.hpp"

namespace pit {

// Positive integer weight per ambient variable, extended additively to monomials.
class WeightFn {
 public:
  WeightFn() = default;
  explicit WeightFn(std::vector<std::uint64_t> weights);

  std::size_t n() const { return w_.size(); }
  std::uint64_t operator[](std::size_t i) const { return w_[i]; }
  const std::vector<std::uint64_t>& weights() const { return w_; }
  std::uint64_t max_weight() const { return max_; }

  // Throws CapabilityError if the sum leaves 63 bits.
  std::uint64_t weight(const ExponentVector& e) const;

  bool operator==(const WeightFn& o) const { return w_ == o.w_; }

 private:
  std::vector<std::uint64_t> w_;
  std::uint64_t max_ = 0;
};

}  // namespace pit
