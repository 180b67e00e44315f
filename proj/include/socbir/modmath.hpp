// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "socbir/common.hpp"
#include "socbir/counters.hpp"

namespace socbir {

// Counted modular primitives. Every modular operation in the pipeline goes
// through these so the complexity assertions can read the tallies.

inline Bigint mulm(const Bigint& a, const Bigint& b, const Bigint& mod) {
  ops::add_mul();
  return a * b % mod;
}

inline Bigint powm(const Bigint& base, const Bigint& exp, const Bigint& mod) {
  ops::add_exp();
  Bigint out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

inline Bigint invm(const Bigint& a, const Bigint& mod) {
  ops::add_inv();
  Bigint out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw MalformedCiphertextError("value not invertible modulo " + to_hex(mod));
  return out;
}

inline Bigint powm_signed(const Bigint& base, long exp, const Bigint& mod) {
  if (exp >= 0) return powm(base, Bigint(exp), mod);
  return powm(invm(base, mod), Bigint(-exp), mod);
}

}  // namespace socbir
