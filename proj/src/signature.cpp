// SPDX-License-Identifier: Apache-2.0
#include "socbir/signature.hpp"

#include <algorithm>

#include "socbir/parallel.hpp"

namespace socbir {

ClearSignature compute_clear_signature(const Grid<Bigint>& image,
                                       const SignatureLayout& layout) {
  ClearSignature sig;
  sig.fingerprint = layout.fingerprint();
  sig.rows = image.rows;
  sig.cols = image.cols;
  ClearPyramid pyr = dwt2_clear(image, layout.filters, layout.levels);
  auto bands = pyr.signature_bands();
  for (std::size_t i = 0; i < bands.size(); ++i)
    sig.bands.push_back(clear_histogram(*bands[i], layout.bands[i]));
  return sig;
}

long long l1_clear(const std::vector<long long>& h1,
                   const std::vector<long long>& h2) {
  if (h1.size() != h2.size())
    throw Error(ErrorKind::usage, "histograms have different class counts");
  long long d = 0;
  for (std::size_t k = 0; k < h1.size(); ++k)
    d += h1[k] > h2[k] ? h1[k] - h2[k] : h2[k] - h1[k];
  return d;
}

long long l1_clear(const ClearSignature& s1, const ClearSignature& s2) {
  if (s1.fingerprint != s2.fingerprint || s1.rows != s2.rows || s1.cols != s2.cols)
    throw FingerprintMismatchError("clear signatures are not comparable");
  long long d = 0;
  for (std::size_t b = 0; b < s1.bands.size(); ++b)
    d += l1_clear(s1.bands[b], s2.bands[b]);
  return d;
}

Bigint encrypted_class_diff(const EncryptedHistogram& h1, const PublicKey& pk1,
                            const EncryptedHistogram& h2, const PublicKey& pk2,
                            int k) {
  // d_u = (p_k * N) - H_u(k), each under its own key against the same
  // agreed reference sum; the cardinality difference survives the key change.
  Bigint d1 = encrypted_diff(h1.reference_sums[k], h1.cardinalities[k], pk1);
  Bigint d2 = encrypted_diff(h2.reference_sums[k], h2.cardinalities[k], pk2);
  return cross_key_diff(d1, d2);
}

unsigned long long encrypted_l1(const EncryptedSignature& s1,
                                const EncryptedSignature& s2) {
  if (s1.fingerprint != s2.fingerprint)
    throw FingerprintMismatchError("signatures built under different specs");
  if (s1.rows != s2.rows || s1.cols != s2.cols)
    throw FingerprintMismatchError("signatures of images with different dimensions");
  if (s1.bands.size() != s2.bands.size())
    throw MalformedPackageError("band count mismatch");
  Bigint total = 0;
  for (std::size_t b = 0; b < s1.bands.size(); ++b) {
    const auto& h1 = s1.bands[b];
    const auto& h2 = s2.bands[b];
    if (h1.cardinalities.size() != h2.cardinalities.size())
      throw MalformedPackageError("class count mismatch");
    for (std::size_t k = 0; k < h1.cardinalities.size(); ++k)
      total += abs(encrypted_class_diff(h1, s1.pk, h2, s2.pk, static_cast<int>(k)));
  }
  return total.get_ui();
}

std::vector<RankedResult> rank_top_k(const EncryptedSignature& query,
                                     const std::vector<SignatureEntry>& database,
                                     int k) {
  if (k < 1) throw Error(ErrorKind::usage, "k must be >= 1");
  std::vector<RankedResult> out(database.size());
  parallel_for(static_cast<long long>(database.size()), [&](long long i) {
    out[i] = RankedResult{database[i].id, encrypted_l1(query, *database[i].sig), 0};
  });
  std::sort(out.begin(), out.end(), [](const RankedResult& a, const RankedResult& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  if (static_cast<int>(out.size()) > k) out.resize(k);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i + 1);
  return out;
}

}  // namespace socbir
