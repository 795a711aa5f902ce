#pragma once

#include <cstdint>
#include <vector>

namespace pit {

using Scalar = std::uint64_t;

// Prime field GF(p). Values are canonical residues in [0, p).
class Field {
 public:
  explicit Field(std::uint64_t p = 10007);

  std::uint64_t modulus() const { return p_; }

  Scalar reduce(std::uint64_t v) const { return v % p_; }
  Scalar from_signed(std::int64_t v) const;
  Scalar add(Scalar a, Scalar b) const {
    Scalar s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : a + p_ - b; }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const {
    return static_cast<Scalar>(static_cast<unsigned __int128>(a) * b % p_);
  }
  Scalar pow(Scalar a, std::uint64_t e) const;
  // Throws PreconditionError on zero.
  Scalar inv(Scalar a) const;

  bool operator==(const Field& o) const { return p_ == o.p_; }

 private:
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

// Inverts all entries at once; every entry must be nonzero.
std::vector<Scalar> batch_inverse(const Field& f, const std::vector<Scalar>& xs);

}  // namespace pit
