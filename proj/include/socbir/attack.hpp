// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "socbir/histogram.hpp"

namespace socbir {

// Reconstruction attack against stored coefficients.
//
// leaky: the insecure clear-histogram variant — the attacker knows the true
// class of every detail coefficient and that classes are ordered, so each
// coefficient becomes its class center.
//
// secure: the attacker only sees noisy class indices. The best ordered-grid
// assumption maps index l to an affine position in the noisy dynamic; the
// per-coefficient shifts turn that into noise.
//
// The approximation band is unknown in both modes and is filled with a
// constant.
enum class AttackMode { leaky, secure };
AttackMode attack_mode_from_name(const std::string& s);

struct AttackOutcome {
  Grid<Bigint> reconstruction;
  double correlation;  // Pearson against the original
};

AttackOutcome attack_demo(const Grid<Bigint>& image, const SignatureLayout& layout,
                          AttackMode mode, std::uint64_t seed);

double pearson(const Grid<Bigint>& a, const Grid<Bigint>& b);

}  // namespace socbir
