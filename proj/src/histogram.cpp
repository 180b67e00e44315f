// SPDX-License-Identifier: Apache-2.0
#include "socbir/histogram.hpp"

#include <sstream>

#include "socbir/modmath.hpp"
#include "socbir/parallel.hpp"

namespace socbir {

int BandLayout::class_of(const Bigint& c) const {
  if (c < c_min || c > c_max)
    throw DynamicBoundError("coefficient " + c.get_str() + " outside [" +
                            c_min.get_str() + ", " + c_max.get_str() + "]");
  Bigint k = (c - c_min) / delta;
  return static_cast<int>(k.get_si());
}

Bigint BandLayout::center_doubled(int k) const {
  return 2 * c_min + 2 * k * delta + delta;
}

Bigint BandLayout::dummy_doubled(int slot) const {
  return 2 * (c_max + classes * delta + 1 + slot);
}

std::vector<BandKey> signature_band_keys(int levels) {
  if (levels < 0) throw GeometryError("negative level count");
  std::vector<BandKey> keys;
  if (levels == 0) {
    keys.push_back({0, BandTag::HH});
    return keys;
  }
  for (int d = 1; d <= levels; ++d) {
    keys.push_back({d, BandTag::HG});
    keys.push_back({d, BandTag::GH});
    keys.push_back({d, BandTag::GG});
  }
  keys.push_back({levels, BandTag::HH});
  return keys;
}

std::vector<ValueRange> theoretical_ranges(const FilterPair& f, int levels,
                                           const Bigint& pixel_lo,
                                           const Bigint& pixel_hi) {
  std::vector<ValueRange> out;
  for (const auto& key : signature_band_keys(levels))
    out.push_back(band_range(f, key.level, key.tag, pixel_lo, pixel_hi));
  return out;
}

namespace {

Bigint ceil_div(const Bigint& a, const Bigint& b) {
  Bigint q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void check_counts(int classes, int noisy_classes) {
  if (classes < 1) throw Error(ErrorKind::usage, "need at least one class");
  if (noisy_classes < 2 * classes)
    throw Error(ErrorKind::usage, "noisy class count must be at least 2K");
}

SignatureLayout finish_layout(const FilterPair& f, int levels,
                              const std::vector<ValueRange>& ranges,
                              const std::vector<Bigint>& deltas, int classes,
                              int noisy_classes, const std::string& seed_id,
                              long ref_cap) {
  check_counts(classes, noisy_classes);
  if (ref_cap < 1) throw Error(ErrorKind::usage, "reference cap must be >= 1");
  auto keys = signature_band_keys(levels);
  SignatureLayout layout{f, levels, classes, noisy_classes, ref_cap, seed_id, {}};
  for (std::size_t i = 0; i < keys.size(); ++i) {
    BandLayout b;
    b.level = keys[i].level;
    b.band = keys[i].tag;
    b.c_min = ranges[i].lo;
    b.delta = deltas[i];
    b.classes = classes;
    b.noisy_classes = noisy_classes;
    b.c_max = b.c_min + classes * b.delta - 1;
    if (b.c_max < ranges[i].hi)
      throw Error(ErrorKind::usage, "layout does not cover the band dynamic");
    layout.bands.push_back(std::move(b));
  }
  return layout;
}

}  // namespace

SignatureLayout layout_from_classes(const FilterPair& f, int levels,
                                    const std::vector<ValueRange>& ranges,
                                    int classes, int noisy_classes,
                                    const std::string& seed_id, long ref_cap) {
  check_counts(classes, noisy_classes);
  auto keys = signature_band_keys(levels);
  if (ranges.size() != keys.size())
    throw Error(ErrorKind::usage, "one value range per signature band required");
  std::vector<Bigint> deltas;
  for (const auto& r : ranges) deltas.push_back(ceil_div(r.span(), Bigint(classes)));
  return finish_layout(f, levels, ranges, deltas, classes, noisy_classes, seed_id,
                       ref_cap);
}

SignatureLayout layout_from_delta(const FilterPair& f, int levels,
                                  const std::vector<ValueRange>& ranges,
                                  const Bigint& delta, int kprime_factor,
                                  const std::string& seed_id, long ref_cap) {
  if (delta < 1) throw Error(ErrorKind::usage, "delta must be >= 1");
  if (kprime_factor < 2)
    throw Error(ErrorKind::usage, "noisy factor must be >= 2");
  auto keys = signature_band_keys(levels);
  if (ranges.size() != keys.size())
    throw Error(ErrorKind::usage, "one value range per signature band required");
  std::vector<Bigint> deltas;
  Bigint classes_needed = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    Bigint db = delta * band_gain(f, keys[i].level, keys[i].tag);
    deltas.push_back(db);
    classes_needed = std::max(classes_needed, ceil_div(ranges[i].span(), db));
  }
  if (!classes_needed.fits_sint_p())
    throw Error(ErrorKind::usage, "class count overflows");
  int classes = static_cast<int>(classes_needed.get_si());
  return finish_layout(f, levels, ranges, deltas, classes, kprime_factor * classes,
                       seed_id, ref_cap);
}

std::string SignatureLayout::fingerprint() const {
  std::ostringstream os;
  os << "socbir-layout/1|filter:" << filters.scale;
  for (long t : filters.low) os << ',' << t;
  os << ';';
  for (long t : filters.high) os << ',' << t;
  os << "|d:" << levels << "|K:" << classes << "|K':" << noisy_classes
     << "|cap:" << ref_cap << "|seed:" << seed_id;
  for (const auto& b : bands)
    os << '|' << b.level << ' ' << band_name(b.band) << ' ' << b.c_min.get_str()
       << ' ' << b.delta.get_str();
  return fnv1a_hex(os.str());
}

const BandLayout& SignatureLayout::band(int level, BandTag tag) const {
  for (const auto& b : bands)
    if (b.level == level && b.band == tag) return b;
  throw Error(ErrorKind::usage, "band not part of the signature");
}

long derive_reference_value(std::uint64_t ref_seed, const SignatureLayout& layout,
                            int level, BandTag tag, int k) {
  std::ostringstream os;
  os << layout.fingerprint() << '|' << level << '|' << band_name(tag) << '|' << k;
  std::uint64_t h = fnv1a(os.str(), 0x9e3779b97f4a7c15ULL ^ ref_seed);
  // Mix once more so consecutive k do not differ in just a few bits.
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return 1 + static_cast<long>(h % static_cast<std::uint64_t>(layout.ref_cap));
}

std::vector<long long> clear_histogram(const Subband& band, const BandLayout& layout) {
  if (band.level != layout.level || band.band != layout.band)
    throw Error(ErrorKind::usage, "layout is for a different band");
  std::vector<long long> counts(layout.classes, 0);
  for (const auto& c : band.grid.cells) counts[layout.class_of(c)]++;
  return counts;
}

int noisy_class_paper_mode(const Ciphertext& coeff,
                           std::span<const Ciphertext> centers,
                           const BandLayout& layout, const PublicKey& pk) {
  if (static_cast<int>(centers.size()) != layout.noisy_classes)
    throw MalformedPackageError("center block must have K' entries");
  Ciphertext doubled = hom_scale(coeff, 2, pk);
  int best = -1;
  Bigint best_abs;
  for (int l = 0; l < layout.noisy_classes; ++l) {
    Bigint d = abs(encrypted_diff(centers[l], doubled, pk));
    ops::add_cmp();
    if (best < 0 || d <= best_abs) {  // ties resolve to the higher index
      best = l;
      best_abs = d;
    }
  }
  return best;
}

int noisy_class_compact_mode(const Ciphertext& coeff, const Ciphertext& theta,
                             const BandLayout& layout, const PublicKey& pk) {
  Bigint d = encrypted_diff(coeff, theta, pk);
  if (sgn(d) < 0)
    throw MalformedPackageError("coefficient below its package threshold");
  Bigint l = d / layout.delta;
  if (l >= layout.noisy_classes)
    throw MalformedPackageError("noisy index beyond K'");
  return static_cast<int>(l.get_si());
}

NoisyHistogram build_noisy_histogram(const std::vector<int>& indices,
                                     int noisy_classes) {
  NoisyHistogram h;
  h.counts.assign(noisy_classes, 0);
  h.selectors = indices;
  for (int l : indices) {
    if (l < 0 || l >= noisy_classes)
      throw MalformedPackageError("noisy index out of range");
    h.counts[l]++;
  }
  return h;
}

Ciphertext pir_product_reference(const std::vector<int>& selectors,
                                 std::span<const Ciphertext> block,
                                 int noisy_classes, const PublicKey& pk) {
  const std::size_t n = selectors.size();
  if (n == 0) throw MalformedPackageError("empty selector set");
  if (block.size() != n * static_cast<std::size_t>(noisy_classes))
    throw MalformedPackageError("vector block size is not N*K'");
  Bigint acc = block[selectors[0]].value;
  for (std::size_t i = 1; i < n; ++i) {
    const Ciphertext& pick = block[i * noisy_classes + selectors[i]];
    if (pick.key_id != pk.key_id) throw KeyMismatchError("mixed keys in block");
    acc = mulm(acc, pick.value, pk.modulus_squared);
  }
  return Ciphertext{acc, pk.key_id};
}

Ciphertext pir_product(const std::vector<int>& selectors,
                       std::span<const Ciphertext> block, int noisy_classes,
                       const PublicKey& pk) {
  const std::size_t n = selectors.size();
  if (n == 0) throw MalformedPackageError("empty selector set");
  if (block.size() != n * static_cast<std::size_t>(noisy_classes))
    throw MalformedPackageError("vector block size is not N*K'");
  // Fixed chunking keeps the partial products independent of the thread
  // count; the fold order does not matter in an abelian group anyway.
  const std::size_t chunk = 64;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<Bigint> partial(nchunks, Bigint(1));
  parallel_for(static_cast<long long>(nchunks), [&](long long ci) {
    const std::size_t lo = ci * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    Bigint acc = 1;
    for (std::size_t i = lo; i < hi; ++i) {
      const Ciphertext& pick = block[i * noisy_classes + selectors[i]];
      if (pick.key_id != pk.key_id) throw KeyMismatchError("mixed keys in block");
      acc = mulm(acc, pick.value, pk.modulus_squared);
    }
    partial[ci] = acc;
  });
  Bigint acc = partial[0];
  for (std::size_t ci = 1; ci < nchunks; ++ci)
    acc = mulm(acc, partial[ci], pk.modulus_squared);
  return Ciphertext{acc, pk.key_id};
}

}  // namespace socbir
