#include "pit/field.hpp"

#include <string>

#include "pit/errors.hpp"

namespace pit {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Field::Field(std::uint64_t p) : p_(p) {
  if (p <= 2 || p >= (std::uint64_t{1} << 62) || !is_prime(p)) {
    throw StructuralError("modulus must be an odd prime below 2^62, got " + std::to_string(p));
  }
}

Scalar Field::from_signed(std::int64_t v) const {
  std::int64_t m = static_cast<std::int64_t>(p_);
  std::int64_t r = v % m;
  return static_cast<Scalar>(r < 0 ? r + m : r);
}

Scalar Field::pow(Scalar a, std::uint64_t e) const { return powmod(a, e, p_); }

Scalar Field::inv(Scalar a) const {
  if (a % p_ == 0) throw PreconditionError("inverse of zero");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a % p_);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return from_signed(t);
}

std::vector<Scalar> batch_inverse(const Field& f, const std::vector<Scalar>& xs) {
  std::vector<Scalar> prefix(xs.size());
  Scalar acc = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    prefix[i] = acc;
    acc = f.mul(acc, xs[i]);
  }
  Scalar inv = f.inv(acc);
  std::vector<Scalar> out(xs.size());
  for (std::size_t i = xs.size(); i-- > 0;) {
    out[i] = f.mul(inv, prefix[i]);
    inv = f.mul(inv, xs[i]);
  }
  return out;
}

}  // namespace pit
