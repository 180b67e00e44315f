// SPDX-License-Identifier: Apache-2.0
#include "socbir/compare.hpp"

#include "socbir/counters.hpp"

namespace socbir {

Bigint encrypted_diff(const Ciphertext& reference, const Ciphertext& subject,
                      const PublicKey& pk) {
  if (reference.key_id != subject.key_id || reference.key_id != pk.key_id)
    throw KeyMismatchError("pair not under the given key");

  ops::add_inv();
  Bigint inv;
  if (mpz_invert(inv.get_mpz_t(), subject.value.get_mpz_t(),
                 pk.modulus_squared.get_mpz_t()) == 0)
    throw MalformedCiphertextError("subject not invertible");

  ops::add_mul();
  Bigint ratio = reference.value * inv % pk.modulus_squared;

  // With matching randoms the ratio is g^(T-m) = 1 + ((T-m) mod Kp)*Kp.
  // A mismatched random leaves a unit factor that breaks the 1 + k*Kp
  // shape, which the divisibility test catches exactly.
  ops::add_leval();
  Bigint num = ratio - 1;
  if (num % pk.modulus != 0)
    throw RandomMismatchError("randoms of the pair differ");
  return decode_signed(num / pk.modulus, pk);
}

Bigint encrypted_diff(const MatchedPair& pair, const PublicKey& pk) {
  return encrypted_diff(pair.reference, pair.subject, pk);
}

Bigint cross_key_diff(const Bigint& d1, const Bigint& d2) { return d2 - d1; }

Bigint hsu_iterative_diff(const Ciphertext& reference, const Ciphertext& subject,
                          const PublicKey& pk, unsigned long max_iter) {
  if (reference.key_id != subject.key_id || reference.key_id != pk.key_id)
    throw KeyMismatchError("pair not under the given key");
  Bigint g = 1 + pk.modulus;
  Bigint walk = subject.value;
  for (unsigned long inc = 0; inc <= max_iter; ++inc) {
    ops::add_cmp();
    if (walk == reference.value) return Bigint(inc);
    ops::add_mul();
    walk = walk * g % pk.modulus_squared;
  }
  throw ComparisonRangeError("difference not found within max_iter steps");
}

}  // namespace socbir
