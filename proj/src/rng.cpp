// SPDX-License-Identifier: Apache-2.0
#include "socbir/rng.hpp"

#include <cstring>
#include <random>

#include <sodium.h>

namespace socbir {

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t s = seed;
  for (int i = 0; i < 4; ++i) {
    std::uint64_t w = splitmix64(s);
    std::memcpy(key_.data() + 8 * i, &w, 8);
  }
}

Rng Rng::from_entropy() {
  std::random_device rd;
  std::uint64_t seed = (std::uint64_t(rd()) << 32) ^ rd();
  return Rng(seed);
}

std::array<unsigned char, 64> Rng::block(std::uint64_t domain,
                                         std::uint64_t index) const {
  // One full ChaCha20 block (64 bytes) per draw, addressed by the block
  // counter. Zero bytes XOR keystream = keystream.
  std::array<unsigned char, 64> out{};
  unsigned char nonce[crypto_stream_chacha20_NONCEBYTES] = {0};
  std::memcpy(nonce, &domain, sizeof domain);
  crypto_stream_chacha20_xor_ic(out.data(), out.data(), out.size(), nonce,
                                index, key_.data());
  return out;
}

std::uint64_t Rng::next_u64() {
  auto b = block(/*domain=*/0, cursor_++);
  std::uint64_t v;
  std::memcpy(&v, b.data(), 8);
  return v;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw exactly uniform.
  std::uint64_t zone = bound * ((~std::uint64_t(0)) / bound);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < zone) return v % bound;
  }
}

namespace {
Bigint unit_from_block(const std::array<unsigned char, 64>& b, const Bigint& kp) {
  // 512 source bits; for the key sizes this artifact targets the mod bias
  // is negligible.
  Bigint x;
  mpz_import(x.get_mpz_t(), b.size(), 1, 1, 0, 0, b.data());
  Bigint r = x % (kp - 1) + 1;  // in [1, kp-1]
  // Multiples of p or q are the only non-units; step past them deterministically.
  while (gcd(r, kp) != 1) {
    r += 1;
    if (r >= kp) r = 1;
  }
  return r;
}
}  // namespace

Bigint Rng::unit_mod(const Bigint& kp) {
  return unit_from_block(block(0, cursor_++), kp);
}

Bigint Rng::unit_at(std::uint64_t domain, std::uint64_t index, const Bigint& kp) const {
  if (domain == 0) throw Error(ErrorKind::usage, "rng domain 0 is reserved");
  return unit_from_block(block(domain, index), kp);
}

}  // namespace socbir
