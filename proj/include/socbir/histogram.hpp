// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "socbir/compare.hpp"
#include "socbir/wavelet.hpp"

namespace socbir {

// Histogram geometry for one sub-band. Classes are half-open intervals
// [c_min + k*delta, c_min + (k+1)*delta), k in [0, K); the bounds are
// normalized so c_max = c_min + K*delta - 1. The class of a coefficient by
// this floor rule coincides with the nearest-center rule with ties broken
// toward the higher index.
struct BandLayout {
  int level = 0;
  BandTag band = BandTag::HH;
  Bigint c_min, c_max;
  Bigint delta;
  int classes = 0;        // K
  int noisy_classes = 0;  // K', >= 2K

  int class_of(const Bigint& c) const;
  // Class centers sit on half-integers when delta is odd, so they are
  // handled doubled end to end: 2*T_k = 2*c_min + 2*k*delta + delta.
  Bigint center_doubled(int k) const;
  // Doubled placeholder values for paper-mode slots outside the valid
  // window. Strictly farther from any in-dynamic coefficient than every
  // true center, so they can never win the argmin.
  Bigint dummy_doubled(int slot) const;
  // Noise shifts are drawn uniformly from [0, noise_span()].
  int noise_span() const { return noisy_classes - classes; }

  bool operator==(const BandLayout&) const = default;
};

// Full signature configuration: filters, depth, one BandLayout per
// signature band (levels ascending, approximation last), the uniform
// (K, K') pair, and the identifier of the shared reference seed. Two
// packages are comparable iff their fingerprints match.
struct SignatureLayout {
  FilterPair filters;
  int levels = 0;
  int classes = 0;
  int noisy_classes = 0;
  long ref_cap = 7;  // reference values p_k are drawn from [1, ref_cap]
  std::string seed_id;
  std::vector<BandLayout> bands;

  std::string fingerprint() const;
  const BandLayout& band(int level, BandTag tag) const;
};

struct BandKey {
  int level;
  BandTag tag;
};
// Signature band order for depth d: (1,HG),(1,GH),(1,GG),...,(d,GG),(d,HH);
// depth 0 is the single raw-pixel band (0,HH).
std::vector<BandKey> signature_band_keys(int levels);

// Per-band coefficient ranges for pixels in [pixel_lo, pixel_hi].
std::vector<ValueRange> theoretical_ranges(const FilterPair& f, int levels,
                                           const Bigint& pixel_lo,
                                           const Bigint& pixel_hi);

// Layout with a given class count: delta_b = ceil(span_b / K) per band.
SignatureLayout layout_from_classes(const FilterPair& f, int levels,
                                    const std::vector<ValueRange>& ranges,
                                    int classes, int noisy_classes,
                                    const std::string& seed_id, long ref_cap = 7);
// Layout from a pixel-scale class width: delta_b = delta * band_gain(b), so
// a single delta spans all levels; K is the largest per-band requirement
// and K' = kprime_factor * K.
SignatureLayout layout_from_delta(const FilterPair& f, int levels,
                                  const std::vector<ValueRange>& ranges,
                                  const Bigint& delta, int kprime_factor,
                                  const std::string& seed_id, long ref_cap = 7);

// Shared-secret reference value p_k for (band, level, class), derived from
// the seed both users agreed on. The server only ever sees p_k*N - H(k)
// differences, never p_k itself.
long derive_reference_value(std::uint64_t ref_seed, const SignatureLayout& layout,
                            int level, BandTag tag, int k);

// Exact class counts of a sub-band (the clear-domain reference path).
std::vector<long long> clear_histogram(const Subband& band, const BandLayout& layout);

// Noisy class index of one encrypted coefficient, without decryption.
//
// Paper mode: K' doubled centers, all encrypted under the square of the
// coefficient's random; slot l holds 2*T_{l-nu} inside the valid window and
// a dummy elsewhere. The argmin over |center_l - 2c| lands on k + nu.
int noisy_class_paper_mode(const Ciphertext& coeff,
                           std::span<const Ciphertext> centers,
                           const BandLayout& layout, const PublicKey& pk);
// Compact mode: one threshold Theta = c_min - nu*delta encrypted under the
// coefficient's own random; l = floor((c - Theta)/delta) = k + nu.
int noisy_class_compact_mode(const Ciphertext& coeff, const Ciphertext& theta,
                             const BandLayout& layout, const PublicKey& pk);

struct NoisyHistogram {
  std::vector<long long> counts;  // per noisy class, sums to the band size
  std::vector<int> selectors;     // per-coefficient hot index l(x,y)
};
NoisyHistogram build_noisy_histogram(const std::vector<int>& indices,
                                     int noisy_classes);

// Product over coefficients of the selector-indexed component of each
// K'-wide ciphertext vector. With mapping vectors this de-noises the class-k
// cardinality; with reference vectors it accumulates E[p_k * N].
Ciphertext pir_product(const std::vector<int>& selectors,
                       std::span<const Ciphertext> block, int noisy_classes,
                       const PublicKey& pk);
Ciphertext pir_product_reference(const std::vector<int>& selectors,
                                 std::span<const Ciphertext> block,
                                 int noisy_classes, const PublicKey& pk);

inline Ciphertext secure_cardinality(const std::vector<int>& selectors,
                                     std::span<const Ciphertext> mapping_block,
                                     int noisy_classes, const PublicKey& pk) {
  return pir_product(selectors, mapping_block, noisy_classes, pk);
}
inline Ciphertext reference_sum(const std::vector<int>& selectors,
                                std::span<const Ciphertext> reference_block,
                                int noisy_classes, const PublicKey& pk) {
  return pir_product(selectors, reference_block, noisy_classes, pk);
}

// Encrypted histogram of one band: K encrypted cardinalities plus the K
// encrypted reference sums that make cross-key differencing possible.
struct EncryptedHistogram {
  int level = 0;
  BandTag band = BandTag::HH;
  std::vector<Ciphertext> cardinalities;
  std::vector<Ciphertext> reference_sums;
};

}  // namespace socbir
