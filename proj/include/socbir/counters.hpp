// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace socbir::ops {

// Global tallies of modular-arithmetic work. Thread-safe; kernels running
// under OpenMP bump them with relaxed atomics. Tests and the query path
// read them as snapshot deltas.
struct Counters {
  std::uint64_t mul = 0;    // modular multiplications (a squaring counts as one)
  std::uint64_t exp = 0;    // modular exponentiations
  std::uint64_t inv = 0;    // modular inversions
  std::uint64_t leval = 0;  // L-function evaluations, L(u) = (u-1)/Kp
  std::uint64_t cmp = 0;    // encrypted-domain comparisons (argmin steps)
  std::uint64_t enc = 0;    // encryptions
  std::uint64_t dec = 0;    // decryptions

  Counters operator-(const Counters& o) const {
    return {mul - o.mul, exp - o.exp,   inv - o.inv, leval - o.leval,
            cmp - o.cmp, enc - o.enc, dec - o.dec};
  }
  std::uint64_t modular_total() const { return mul + exp + inv + leval; }
};

void add_mul(std::uint64_t n = 1);
void add_exp(std::uint64_t n = 1);
void add_inv(std::uint64_t n = 1);
void add_leval(std::uint64_t n = 1);
void add_cmp(std::uint64_t n = 1);
void add_enc(std::uint64_t n = 1);
void add_dec(std::uint64_t n = 1);

Counters snapshot();
void reset();

}  // namespace socbir::ops
