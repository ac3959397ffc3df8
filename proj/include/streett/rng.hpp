#pragma once
// Counter-based pseudo-random stream.  Draw i of stream (seed, stream) is a
// pure bit-mix of the triple, so trajectories can be generated independently,
// in any order, with identical results across runs and platforms.

#include <cstdint>

#include "streett/rational.hpp"

namespace streett {

namespace detail {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline const mpz_class& two_pow_64() {
  static const mpz_class v = mpz_class(1) << 64;
  return v;
}

}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(detail::mix64(seed ^ detail::mix64(~stream))) {}

  std::uint64_t next_u64() {
    return detail::mix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_);
  }

  // Uniform draw in [0,1) with 64 bits of resolution, exact as a rational.
  Probability next_unit() {
    mpz_class num = mpz_class(static_cast<unsigned long>(next_u64()));
    Rational q(num, detail::two_pow_64());
    q.canonicalize();
    return q;
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace streett
