#include "pit/weight.hpp"

#include <algorithm>
#include <limits>

#include "pit/errors.hpp"

namespace pit {

WeightFn::WeightFn(std::vector<std::uint64_t> weights) : w_(std::move(weights)) {
  for (auto x : w_) {
    if (x == 0) throw PreconditionError("weights must be positive");
    max_ = std::max(max_, x);
  }
}

std::uint64_t WeightFn::weight(const ExponentVector& e) const {
  if (e.size() != w_.size()) throw StructuralError("monomial length does not match weight function");
  unsigned __int128 s = 0;
  for (std::size_t i = 0; i < e.size(); ++i) s += static_cast<unsigned __int128>(e[i]) * w_[i];
  if (s > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
    throw CapabilityError("monomial weight overflows 63 bits");
  return static_cast<std::uint64_t>(s);
}

}  // namespace pit
