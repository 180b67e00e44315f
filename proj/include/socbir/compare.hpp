// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "socbir/paillier.hpp"

namespace socbir {

// Matched-random comparison: both ciphertexts carry the same key AND the
// same random value. That equality is a client-side promise the server
// cannot inspect; encrypted_diff detects violations and raises instead of
// returning noise.
struct MatchedPair {
  Ciphertext reference;  // encrypts T with random r
  Ciphertext subject;    // encrypts m with the same r
};

// Recovers T - m from the pair alone: no private key is ever involved (the
// signature has no PrivateKey parameter, deliberately). Exactly one modular
// inversion, one modular multiplication and one L-evaluation per call.
Bigint encrypted_diff(const MatchedPair& pair, const PublicKey& pk);
Bigint encrypted_diff(const Ciphertext& reference, const Ciphertext& subject,
                      const PublicKey& pk);

// Two users, two keys, one agreed reference value P: given d1 = P - m1 and
// d2 = P - m2, the difference m1 - m2 = d2 - d1.
Bigint cross_key_diff(const Bigint& d1, const Bigint& d2);

// Iterative comparison: multiply the subject by g = 1+Kp until it matches
// the reference, returning the step count. Kept as the independent oracle
// for encrypted_diff; requires 0 <= T - m <= max_iter.
Bigint hsu_iterative_diff(const Ciphertext& reference, const Ciphertext& subject,
                          const PublicKey& pk, unsigned long max_iter);

}  // namespace socbir
