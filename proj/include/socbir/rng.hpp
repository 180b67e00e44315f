// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "socbir/common.hpp"

namespace socbir {

// Seeded ChaCha20 random stream. One instance per client build so packages
// are reproducible under a fixed seed; `from_entropy` feeds it from the OS
// for production use.
//
// `at(domain, index)` reads the stream at an absolute position without
// disturbing the sequential cursor, which lets kernels draw the random for
// vector component i from thread i directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  static Rng from_entropy();

  std::uint64_t next_u64();
  // Uniform in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound);
  // Uniform element of Z*_kp (invertible mod kp), sequential.
  Bigint unit_mod(const Bigint& kp);
  // Same distribution, addressed by (domain, index): reproducible random
  // access for parallel encryption loops.
  Bigint unit_at(std::uint64_t domain, std::uint64_t index, const Bigint& kp) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<unsigned char, 64> block(std::uint64_t domain, std::uint64_t index) const;

  std::uint64_t seed_ = 0;
  std::array<unsigned char, 32> key_{};
  std::uint64_t cursor_ = 0;
};

}  // namespace socbir
