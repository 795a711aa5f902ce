#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pit/field.hpp"

namespace pit {

// Counter-based stream: the i-th draw is splitmix64(seed + (i + 1) * 0x9e3779b97f4a7c15),
// so a (seed, index) pair always yields the same value.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next();
  // Uniform in [0, bound) by rejection; bound >= 1.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  Scalar scalar(const Field& f) { return below(f.modulus()); }
  Scalar nonzero(const Field& f) { return 1 + below(f.modulus() - 1); }
  bool coin() { return next() & 1; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Independent sub-seed for the i-th item of a campaign.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace pit
