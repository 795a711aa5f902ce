#include "pit/rng.hpp"

#include "pit/errors.hpp"

namespace pit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::next() {
  ++counter_;
  return splitmix64(seed_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw PreconditionError("empty sampling range");
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t x = next();
    if (x < limit) return x % bound;
  }
}

}  // namespace pit
