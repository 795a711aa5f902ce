#include "pit/kron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pit/errors.hpp"

namespace pit {

void PairSet::add(const ExponentVector& a, const ExponentVector& b) {
  if (a.size() != n_ || b.size() != n_) throw StructuralError("pair monomial length does not match n");
  if (a == b) throw StructuralError("pair of identical monomials");
  for (std::size_t i = 0; i < n_; ++i)
    if (a[i] > delta_ || b[i] > delta_)
      throw StructuralError("pair monomial exceeds individual degree " + std::to_string(delta_));
  pairs_.push_back({a, b});
}

WeightFn naive_kronecker(std::size_t n, std::uint32_t delta) {
  if (n == 0) throw PreconditionError("naive Kronecker map needs n >= 1");
  std::vector<std::uint64_t> w(n);
  unsigned __int128 cur = 1;
  const unsigned __int128 limit = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < n; ++i) {
    // The largest monomial weight is delta * sum of weights; keep it in range too.
    if (cur > limit || cur * (static_cast<unsigned __int128>(delta) + 1) > limit)
      throw CapabilityError("naive Kronecker weights overflow 63 bits at n=" + std::to_string(n) +
                            ", delta=" + std::to_string(delta));
    w[i] = static_cast<std::uint64_t>(cur);
    cur *= static_cast<unsigned __int128>(delta) + 1;
  }
  return WeightFn(std::move(w));
}

WeightFn prime_weight(std::size_t n, std::uint32_t delta, std::uint64_t p) {
  std::vector<std::uint64_t> w(n);
  std::uint64_t cur = 1 % p;
  std::uint64_t base = (static_cast<std::uint64_t>(delta) + 1) % p;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = cur == 0 ? p : cur;
    cur = static_cast<std::uint64_t>(static_cast<unsigned __int128>(cur) * base % p);
  }
  return WeightFn(std::move(w));
}

std::uint64_t kron_cutoff(std::size_t n, std::uint32_t delta, std::uint64_t pairs, std::uint64_t c0) {
  std::uint64_t lg = 0;
  while ((std::uint64_t{1} << lg) < static_cast<std::uint64_t>(delta) + 2) ++lg;
  long double N = static_cast<long double>(c0) * n * pairs * lg;
  if (N < 2) return 2;
  return static_cast<std::uint64_t>(std::floor(N * std::log2(N)));
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  if (bound > (std::uint64_t{1} << 32)) throw CapabilityError("prime sieve bound " + std::to_string(bound) + " too large");
  std::vector<bool> composite(bound + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

bool separates(const WeightFn& w, const PairSet& a) {
  for (const auto& pr : a.pairs())
    if (w.weight(pr.a) == w.weight(pr.b)) return false;
  return true;
}

bool separates_groups(const WeightFn& w, const std::vector<std::vector<ExponentVector>>& groups) {
  std::vector<std::uint64_t> ws;
  for (const auto& g : groups) {
    ws.clear();
    for (const auto& e : g) ws.push_back(w.weight(e));
    std::sort(ws.begin(), ws.end());
    if (std::adjacent_find(ws.begin(), ws.end()) != ws.end()) return false;
  }
  return true;
}

std::uint64_t group_pair_count(const std::vector<std::vector<ExponentVector>>& groups) {
  std::uint64_t c = 0;
  for (const auto& g : groups) c += static_cast<std::uint64_t>(g.size()) * (g.size() - 1) / 2;
  return c;
}

SeparatorFamily separating_weights(std::size_t n, std::uint32_t delta, const PairSet& a, std::uint64_t c0) {
  if (a.size() == 0) throw PreconditionError("separating weights need a nonempty pair set");
  SeparatorFamily fam;
  fam.cutoff = kron_cutoff(n, delta, a.size(), c0);
  fam.primes = primes_up_to(fam.cutoff);
  for (std::size_t i = 0; i < fam.primes.size(); ++i) {
    fam.candidates.push_back(prime_weight(n, delta, fam.primes[i]));
    if (!fam.first_verified && separates(fam.candidates.back(), a)) fam.first_verified = i;
  }
  if (!fam.first_verified)
    throw InternalError("no separating prime up to cutoff " + std::to_string(fam.cutoff));
  return fam;
}

namespace {

template <class Check>
Separator search(std::size_t n, std::uint32_t delta, std::uint64_t pairs, std::uint64_t c0, Check check) {
  Separator s;
  s.cutoff = kron_cutoff(n, delta, std::max<std::uint64_t>(pairs, 1), c0);
  for (std::uint64_t p = 2; p <= s.cutoff; ++p) {
    if (!is_prime(p)) continue;
    WeightFn w = prime_weight(n, delta, p);
    if (check(w)) {
      s.weight = std::move(w);
      s.prime = p;
      return s;
    }
  }
  throw InternalError("no separating prime up to cutoff " + std::to_string(s.cutoff));
}

}  // namespace

Separator first_separating_weight(std::size_t n, std::uint32_t delta, const PairSet& a, std::uint64_t c0) {
  if (a.size() == 0) throw PreconditionError("separating weights need a nonempty pair set");
  return search(n, delta, a.size(), c0, [&](const WeightFn& w) { return separates(w, a); });
}

Separator first_separating_weight(std::size_t n, std::uint32_t delta,
                                  const std::vector<std::vector<ExponentVector>>& groups, std::uint64_t c0) {
  return search(n, delta, group_pair_count(groups), c0,
                [&](const WeightFn& w) { return separates_groups(w, groups); });
}

}  // namespace pit
