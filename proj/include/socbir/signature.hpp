// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "socbir/histogram.hpp"

namespace socbir {

// Per-image encrypted signature: one encrypted histogram per signature band,
// canonical order (levels ascending, approximation last). Self-contained:
// carries the public key so cross-key distances need nothing else.
struct EncryptedSignature {
  std::string fingerprint;
  int rows = 0, cols = 0;
  PublicKey pk;
  std::vector<EncryptedHistogram> bands;
};

// The clear-domain counterpart, used by the reference pipeline and oracles.
struct ClearSignature {
  std::string fingerprint;
  int rows = 0, cols = 0;
  std::vector<std::vector<long long>> bands;
};

ClearSignature compute_clear_signature(const Grid<Bigint>& image,
                                       const SignatureLayout& layout);

long long l1_clear(const std::vector<long long>& h1, const std::vector<long long>& h2);
long long l1_clear(const ClearSignature& s1, const ClearSignature& s2);

// Clear cardinality difference H1(k) - H2(k) between two encrypted
// histograms under (possibly) different keys, via the shared reference sums.
// No private key exists anywhere on this path.
Bigint encrypted_class_diff(const EncryptedHistogram& h1, const PublicKey& pk1,
                            const EncryptedHistogram& h2, const PublicKey& pk2,
                            int k);

// L1 distance between two encrypted signatures; equals l1_clear of the
// underlying clear signatures exactly.
unsigned long long encrypted_l1(const EncryptedSignature& s1,
                                const EncryptedSignature& s2);

struct RankedResult {
  std::string id;
  unsigned long long distance = 0;
  int rank = 0;
};

struct SignatureEntry {
  std::string id;
  const EncryptedSignature* sig = nullptr;
};

// Top-k by ascending encrypted L1; ties break on id ascending, so rankings
// are deterministic. Distance evaluations run in parallel.
std::vector<RankedResult> rank_top_k(const EncryptedSignature& query,
                                     const std::vector<SignatureEntry>& database,
                                     int k);

}  // namespace socbir
