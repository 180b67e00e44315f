// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "socbir/grid.hpp"
#include "socbir/paillier.hpp"

namespace socbir {

// Separable 2D DWT with integer filters, stride-2 subsampling and periodic
// boundary extension. The same integer filters drive the clear reference
// transform, the transform over ciphertexts, and the client-side recursion
// of Paillier randoms, so clear and encrypted pipelines agree exactly.

struct FilterPair {
  std::vector<long> low;   // H = [Q*h]
  std::vector<long> high;  // G = [Q*g]
  long scale = 1;          // Q
  std::string name;

  bool operator==(const FilterPair&) const = default;
};

// Round-half-away-from-zero quantization of real filter taps.
FilterPair expand_filters(const std::vector<double>& h, const std::vector<double>& g,
                          long q, const std::string& name = "custom");

// Orthonormal Haar (1/sqrt2, 1/sqrt2) at scale q; q=4 gives H=(3,3), G=(3,-3).
FilterPair haar_filters(long q = 4);
// Averaging Haar (1/2, 1/2) at scale q; q=4 gives H=(2,2), G=(2,-2).
FilterPair haar_half_filters(long q = 4);

// Band naming: first letter = filter along rows, second = along columns.
// HH is the approximation; HG, GH, GG are the detail bands.
enum class BandTag { HG, GH, GG, HH };
const char* band_name(BandTag b);
BandTag band_from_name(const std::string& name);

struct Subband {
  int level = 0;
  BandTag band = BandTag::HH;
  Grid<Bigint> grid;
};

struct EncSubband {
  int level = 0;
  BandTag band = BandTag::HH;
  Grid<Ciphertext> grid;
};

struct RandSubband {
  int level = 0;
  BandTag band = BandTag::HH;
  Grid<TrackedRandom> grid;
};

// Decomposition down to level d: three detail bands per level plus the final
// approximation. d = 0 keeps the raw image as the level-0 approximation.
template <typename SubbandT>
struct Pyramid {
  int levels = 0;
  std::vector<std::array<SubbandT, 3>> details;  // HG, GH, GG per level 1..d
  SubbandT approx;                               // level d

  // Signature ordering: levels ascending, approximation last.
  std::vector<const SubbandT*> signature_bands() const {
    std::vector<const SubbandT*> out;
    for (const auto& lvl : details)
      for (const auto& b : lvl) out.push_back(&b);
    out.push_back(&approx);
    return out;
  }
};

using ClearPyramid = Pyramid<Subband>;
using EncPyramid = Pyramid<EncSubband>;
using RandPyramid = Pyramid<RandSubband>;

// Exact integer analysis; rejects dimensions that do not halve evenly.
ClearPyramid dwt2_clear(const Grid<Bigint>& image, const FilterPair& f, int levels);

// Same transform over ciphertexts: products of powers mod Kp^2. Decrypting
// any output equals the clear transform exactly. OpenMP over coefficients.
EncPyramid dwt2_encrypted(const Grid<Ciphertext>& image, const FilterPair& f,
                          int levels, const PublicKey& pk);
// Serial reference evaluating the direct (non-separable) product form.
EncPyramid dwt2_encrypted_reference(const Grid<Ciphertext>& image,
                                    const FilterPair& f, int levels,
                                    const PublicKey& pk);

// Client-side recursion of the per-coefficient randoms across levels; the
// level-0 base case is the grid of pixel-encryption randoms.
RandPyramid random_recursion(const Grid<TrackedRandom>& pixel_randoms,
                             const FilterPair& f, int levels, const PublicKey& pk);
RandPyramid random_recursion_reference(const Grid<TrackedRandom>& pixel_randoms,
                                       const FilterPair& f, int levels,
                                       const PublicKey& pk);

// Exact rational inverse (carries the Q^2 gain); throws if the band set is
// inconsistent with an integer preimage.
Grid<Bigint> idwt2_clear(const ClearPyramid& pyr, const FilterPair& f);
// Same synthesis but rounds non-integer results to nearest; used by the
// reconstruction-attack demo where coefficients are forged.
Grid<Bigint> idwt2_clear_rounded(const ClearPyramid& pyr, const FilterPair& f);

// Inclusive value range a band can reach for pixels in [pixel_lo, pixel_hi],
// by interval propagation through the filter stages.
struct ValueRange {
  Bigint lo, hi;
  Bigint span() const { return hi - lo + 1; }
};
ValueRange band_range(const FilterPair& f, int level, BandTag band,
                      const Bigint& pixel_lo, const Bigint& pixel_hi);

// Amplitude gain of a band relative to pixel scale: product of sum(|taps|)
// over the 1D stages feeding it. Scales histogram class widths so class
// counts stay comparable across levels.
Bigint band_gain(const FilterPair& f, int level, BandTag band);

}  // namespace socbir
