// SPDX-License-Identifier: Apache-2.0
#include "socbir/paillier.hpp"

#include "socbir/counters.hpp"
#include "socbir/modmath.hpp"

namespace socbir {

namespace {

Bigint random_prime(unsigned bits, Rng& rng) {
  // Random odd of exactly `bits` bits, bumped to the next prime.
  for (int attempt = 0; attempt < 4096; ++attempt) {
    Bigint lo = Bigint(1) << (bits - 1);
    Bigint x = lo + rng.below(1ULL << std::min(bits - 1, 63u));
    if (bits > 64) {
      for (unsigned filled = 63; filled < bits - 1; filled += 63)
        x ^= Bigint(rng.next_u64() >> 1) << filled;
      x |= lo;
    }
    Bigint p;
    mpz_nextprime(p.get_mpz_t(), x.get_mpz_t());
    if (mpz_sizeinbase(p.get_mpz_t(), 2) == bits) return p;
  }
  throw KeygenError("no prime of requested width found");
}

}  // namespace

Keypair keypair_from_primes(const Bigint& p, const Bigint& q) {
  if (p == q) throw KeygenError("p and q must be distinct");
  if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0 ||
      mpz_probab_prime_p(q.get_mpz_t(), 30) == 0)
    throw KeygenError("factors must be prime");
  Bigint kp = p * q;
  Bigint ks = (p - 1) * (q - 1);
  if (gcd(kp, ks) != 1)
    throw KeygenError("gcd(Kp, Ks) != 1; generator 1+Kp would be invalid");
  PublicKey pub{kp, kp * kp, to_hex(kp)};
  Bigint ks_inv;
  if (mpz_invert(ks_inv.get_mpz_t(), ks.get_mpz_t(), kp.get_mpz_t()) == 0)
    throw KeygenError("Ks not invertible mod Kp");
  return Keypair{pub, PrivateKey{pub, ks, ks_inv}};
}

Keypair keygen(unsigned bit_length, Rng& rng) {
  if (bit_length < 8) throw KeygenError("key must be at least 8 bits");
  unsigned pbits = (bit_length + 1) / 2;
  unsigned qbits = bit_length - pbits + 1;
  for (int attempt = 0; attempt < 4096; ++attempt) {
    Bigint p = random_prime(pbits, rng);
    Bigint q = random_prime(qbits, rng);
    if (p == q) continue;
    Bigint kp = p * q;
    if (mpz_sizeinbase(kp.get_mpz_t(), 2) != bit_length) continue;
    if (gcd(kp, (p - 1) * (q - 1)) != 1) continue;
    return keypair_from_primes(p, q);
  }
  throw KeygenError("prime search exhausted its retry budget");
}

Bigint encode_signed(const Bigint& v, const PublicKey& pk) {
  if (abs(v) > pk.signed_bound())
    throw PlaintextOverflowError("|" + v.get_str() + "| exceeds (Kp-1)/2 = " +
                                 pk.signed_bound().get_str());
  Bigint r = v % pk.modulus;
  if (sgn(r) < 0) r += pk.modulus;
  return r;
}

Bigint decode_signed(const Bigint& residue, const PublicKey& pk) {
  if (sgn(residue) < 0 || residue >= pk.modulus)
    throw PlaintextOverflowError("residue outside Z_Kp");
  if (residue > pk.signed_bound()) return residue - pk.modulus;
  return residue;
}

Ciphertext encrypt(const Bigint& m, const TrackedRandom& r, const PublicKey& pk) {
  if (sgn(r.value) <= 0 || r.value >= pk.modulus || gcd(r.value, pk.modulus) != 1)
    throw InvalidRandomError("random must lie in Z*_Kp");
  ops::add_enc();
  Bigint g_m = (1 + encode_signed(m, pk) * pk.modulus) % pk.modulus_squared;
  Bigint rn = powm(r.value, pk.modulus, pk.modulus_squared);
  return Ciphertext{mulm(g_m, rn, pk.modulus_squared), pk.key_id};
}

Bigint decrypt(const Ciphertext& c, const PrivateKey& sk) {
  const PublicKey& pk = sk.pub;
  if (c.key_id != pk.key_id) throw KeyMismatchError("ciphertext under a different key");
  if (sgn(c.value) <= 0 || c.value >= pk.modulus_squared ||
      gcd(c.value, pk.modulus) != 1)
    throw MalformedCiphertextError("ciphertext outside Z*_{Kp^2}");
  ops::add_dec();
  Bigint u = powm(c.value, sk.lambda, pk.modulus_squared);
  Bigint num = u - 1;
  if (num % pk.modulus != 0)
    throw MalformedCiphertextError("c^Ks is not 1 mod Kp");
  ops::add_leval();
  Bigint l = num / pk.modulus;
  return decode_signed(mulm(l, sk.lambda_inv, pk.modulus), pk);
}

Ciphertext hom_add(const Ciphertext& a, const Ciphertext& b, const PublicKey& pk) {
  if (a.key_id != b.key_id || a.key_id != pk.key_id)
    throw KeyMismatchError("operands encrypted under different keys");
  return Ciphertext{mulm(a.value, b.value, pk.modulus_squared), pk.key_id};
}

Ciphertext hom_scale(const Ciphertext& c, const Bigint& s, const PublicKey& pk) {
  if (c.key_id != pk.key_id) throw KeyMismatchError("ciphertext under a different key");
  if (gcd(c.value, pk.modulus) != 1)
    throw MalformedCiphertextError("ciphertext not invertible");
  if (sgn(s) >= 0) return Ciphertext{powm(c.value, s, pk.modulus_squared), pk.key_id};
  Bigint inv = invm(c.value, pk.modulus_squared);
  return Ciphertext{powm(inv, -s, pk.modulus_squared), pk.key_id};
}

TrackedRandom random_mul(const TrackedRandom& a, const TrackedRandom& b,
                         const PublicKey& pk) {
  if (gcd(a.value, pk.modulus) != 1 || gcd(b.value, pk.modulus) != 1)
    throw InvalidRandomError("operand not in Z*_Kp");
  return TrackedRandom{a.value * b.value % pk.modulus};
}

TrackedRandom random_pow(const TrackedRandom& r, const Bigint& s,
                         const PublicKey& pk) {
  if (gcd(r.value, pk.modulus) != 1)
    throw InvalidRandomError("operand not in Z*_Kp");
  Bigint out;
  if (sgn(s) >= 0) {
    mpz_powm(out.get_mpz_t(), r.value.get_mpz_t(), s.get_mpz_t(),
             pk.modulus.get_mpz_t());
  } else {
    Bigint inv;
    mpz_invert(inv.get_mpz_t(), r.value.get_mpz_t(), pk.modulus.get_mpz_t());
    Bigint e = -s;
    mpz_powm(out.get_mpz_t(), inv.get_mpz_t(), e.get_mpz_t(),
             pk.modulus.get_mpz_t());
  }
  return TrackedRandom{out};
}

TrackedRandom draw_random(Rng& rng, const PublicKey& pk) {
  return TrackedRandom{rng.unit_mod(pk.modulus)};
}

}  // namespace socbir
