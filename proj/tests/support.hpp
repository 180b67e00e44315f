// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "socbir/grid.hpp"
#include "socbir/paillier.hpp"

namespace socbir::test {

// Independent modular exponentiation: plain square-and-multiply, no GMP
// powm, so library results are checked against a second route.
inline Bigint naive_powm(Bigint base, Bigint exp, const Bigint& mod) {
  Bigint acc = 1;
  base %= mod;
  while (exp > 0) {
    if (mpz_odd_p(exp.get_mpz_t())) acc = acc * base % mod;
    base = base * base % mod;
    exp /= 2;
  }
  return acc;
}

// Inverse by exhaustive search; only sane for tiny moduli.
inline Bigint brute_inverse(const Bigint& a, const Bigint& mod) {
  for (Bigint x = 1; x < mod; ++x)
    if (a * x % mod == 1) return x;
  return 0;
}

// Hand-rolled extended Euclid, independent of mpz_invert.
inline Bigint egcd_inverse(const Bigint& a, const Bigint& mod) {
  Bigint old_r = a % mod, r = mod;
  if (sgn(old_r) < 0) old_r += mod;
  Bigint old_s = 1, s = 0;
  while (r != 0) {
    Bigint q = old_r / r;
    Bigint tr = old_r - q * r;
    old_r = r;
    r = tr;
    Bigint ts = old_s - q * s;
    old_s = s;
    s = ts;
  }
  if (old_r != 1) return 0;  // not invertible
  Bigint inv = old_s % mod;
  if (sgn(inv) < 0) inv += mod;
  return inv;
}

inline Keypair tiny_key() { return keypair_from_primes(11, 13); }  // Kp = 143
inline Keypair other_tiny_key() { return keypair_from_primes(13, 23); }  // Kp = 299

// All invertible residues mod kp.
inline std::vector<Bigint> units(const Bigint& kp) {
  std::vector<Bigint> out;
  for (Bigint r = 1; r < kp; ++r)
    if (gcd(r, kp) == 1) out.push_back(r);
  return out;
}

inline Grid<Bigint> random_image(Rng& rng, int rows, int cols, int lo = 0,
                                 int hi = 255) {
  Grid<Bigint> img(rows, cols);
  for (auto& p : img.cells)
    p = lo + static_cast<long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  return img;
}

}  // namespace socbir::test
