// SPDX-License-Identifier: Apache-2.0
#include "socbir/attack.hpp"

#include <cmath>

#include "socbir/rng.hpp"

namespace socbir {

AttackMode attack_mode_from_name(const std::string& s) {
  if (s == "leaky") return AttackMode::leaky;
  if (s == "secure") return AttackMode::secure;
  throw Error(ErrorKind::usage, "unknown attack mode " + s);
}

namespace {

Bigint halve_rounded(const Bigint& doubled) {
  Bigint mag = (abs(doubled) + 1) / 2;
  return sgn(doubled) < 0 ? Bigint(-mag) : mag;
}

}  // namespace

AttackOutcome attack_demo(const Grid<Bigint>& image, const SignatureLayout& layout,
                          AttackMode mode, std::uint64_t seed) {
  ClearPyramid pyr = dwt2_clear(image, layout.filters, layout.levels);
  if (pyr.details.empty())
    throw Error(ErrorKind::usage, "attack demo needs at least one detail level");
  Rng rng(seed);

  for (auto& lvl : pyr.details)
    for (auto& sub : lvl) {
      const BandLayout& bl = layout.band(sub.level, sub.band);
      for (auto& c : sub.grid.cells) {
        const int k = bl.class_of(c);
        if (mode == AttackMode::leaky) {
          c = halve_rounded(bl.center_doubled(k));
        } else {
          // What the server sees: l = k + nu, nu uniform on [0, K'-K].
          const int l = k + static_cast<int>(rng.below(bl.noise_span() + 1));
          // Ordered-grid guess centered on the noisy window.
          Bigint guess = bl.c_min + l * bl.delta - (bl.noise_span() / 2) * bl.delta;
          c = guess + halve_rounded(bl.delta);
        }
      }
    }
  // Approximation stays unknown to the attacker.
  for (auto& c : pyr.approx.grid.cells) c = 0;

  AttackOutcome out{idwt2_clear_rounded(pyr, layout.filters), 0.0};
  out.correlation = pearson(out.reconstruction, image);
  return out;
}

double pearson(const Grid<Bigint>& a, const Grid<Bigint>& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw Error(ErrorKind::usage, "grids of different shape");
  const std::size_t n = a.size();
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a.cells[i].get_d();
    mb += b.cells[i].get_d();
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a.cells[i].get_d() - ma;
    double db = b.cells[i].get_d() - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace socbir
