// SPDX-License-Identifier: Apache-2.0
#include "socbir/counters.hpp"

#include <atomic>

namespace socbir::ops {

namespace {
std::atomic<std::uint64_t> g_mul{0}, g_exp{0}, g_inv{0}, g_leval{0}, g_cmp{0},
    g_enc{0}, g_dec{0};

inline void bump(std::atomic<std::uint64_t>& c, std::uint64_t n) {
  c.fetch_add(n, std::memory_order_relaxed);
}
}  // namespace

void add_mul(std::uint64_t n) { bump(g_mul, n); }
void add_exp(std::uint64_t n) { bump(g_exp, n); }
void add_inv(std::uint64_t n) { bump(g_inv, n); }
void add_leval(std::uint64_t n) { bump(g_leval, n); }
void add_cmp(std::uint64_t n) { bump(g_cmp, n); }
void add_enc(std::uint64_t n) { bump(g_enc, n); }
void add_dec(std::uint64_t n) { bump(g_dec, n); }

Counters snapshot() {
  return {g_mul.load(),   g_exp.load(), g_inv.load(), g_leval.load(),
          g_cmp.load(), g_enc.load(), g_dec.load()};
}

void reset() {
  g_mul = 0;
  g_exp = 0;
  g_inv = 0;
  g_leval = 0;
  g_cmp = 0;
  g_enc = 0;
  g_dec = 0;
}

}  // namespace socbir::ops
