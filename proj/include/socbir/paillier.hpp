// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "socbir/common.hpp"
#include "socbir/rng.hpp"

namespace socbir {

// Fast-variant Paillier with the generator fixed to 1+Kp, so encryption is
// c = (1 + m*Kp) * r^Kp mod Kp^2. Plaintexts use signed encoding: residues
// above (Kp-1)/2 decode as negatives.
//
// Keys and ciphertexts are immutable values; every operation here is a pure
// function and safe to call concurrently.

struct PublicKey {
  Bigint modulus;          // Kp = p*q
  Bigint modulus_squared;  // Kp^2
  std::string key_id;      // lowercase hex of Kp

  // Largest encodable magnitude, (Kp-1)/2.
  Bigint signed_bound() const { return (modulus - 1) / 2; }
};

struct PrivateKey {
  PublicKey pub;
  Bigint lambda;      // Ks = (p-1)(q-1)
  Bigint lambda_inv;  // Ks^-1 mod Kp
};

struct Keypair {
  PublicKey pub;
  PrivateKey sec;
};

// Client-side record of the encryption random, kept mod Kp: r^Kp mod Kp^2
// depends only on r mod Kp.
struct TrackedRandom {
  Bigint value;
  bool operator==(const TrackedRandom& o) const { return value == o.value; }
};

struct Ciphertext {
  Bigint value;  // element of Z*_{Kp^2}
  std::string key_id;
  bool operator==(const Ciphertext& o) const {
    return value == o.value && key_id == o.key_id;
  }
};

// Kp gets exactly `bit_length` bits; requires bit_length >= 8. Enforces
// p != q and gcd(Kp, Ks) = 1, which is the generator-validity condition
// for g = 1+Kp.
Keypair keygen(unsigned bit_length, Rng& rng);
Keypair keypair_from_primes(const Bigint& p, const Bigint& q);

// Signed encoding between [-(Kp-1)/2, (Kp-1)/2] and Z_Kp.
Bigint encode_signed(const Bigint& v, const PublicKey& pk);
Bigint decode_signed(const Bigint& residue, const PublicKey& pk);

Ciphertext encrypt(const Bigint& m, const TrackedRandom& r, const PublicKey& pk);
Bigint decrypt(const Ciphertext& c, const PrivateKey& sk);

// E[m1,r1]*E[m2,r2] = E[m1+m2, r1*r2]; plaintext wraparound past the signed
// bound is the caller's responsibility.
Ciphertext hom_add(const Ciphertext& a, const Ciphertext& b, const PublicKey& pk);
// E[m,r]^s = E[s*m, r^s]; negative s goes through the modular inverse.
Ciphertext hom_scale(const Ciphertext& c, const Bigint& s, const PublicKey& pk);

// Client-side mirrors of how randoms evolve under the two operators above.
TrackedRandom random_mul(const TrackedRandom& a, const TrackedRandom& b,
                         const PublicKey& pk);
TrackedRandom random_pow(const TrackedRandom& r, const Bigint& s,
                         const PublicKey& pk);

TrackedRandom draw_random(Rng& rng, const PublicKey& pk);

}  // namespace socbir
