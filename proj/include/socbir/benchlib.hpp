// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "socbir/corpus.hpp"
#include "socbir/package.hpp"

namespace socbir {

// Clear-vs-encrypted retrieval benchmark over the (delta, d) grid. Each grid
// point runs both pipelines end to end on the same corpus and records mean
// precision at `top_k` plus whether the rankings agree image for image.
struct BenchConfig {
  CorpusParams corpus;
  std::vector<long> deltas = {1, 2, 4, 8, 16, 32, 64};
  std::vector<int> depths = {0, 1, 2};
  std::uint64_t seed = 7;
  PackageMode mode = PackageMode::paper;
  int top_k = 5;
  int kprime_factor = 2;
  // Key sizes per depth: 16-bit keys cover d <= 1; d = 2 needs 32 bits of
  // headroom for the coefficient dynamics.
  unsigned bits_for_depth(int d) const { return d <= 1 ? 16 : 32; }
};

struct BenchRow {
  long delta = 0;
  int depth = 0;
  int classes = 0;
  int noisy_classes = 0;
  unsigned key_bits = 0;
  double precision_clear = 0;
  double precision_encrypted = 0;
  bool rankings_equal = false;
  unsigned long long payload_per_image = 0;
  double seconds = 0;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
  bool all_rankings_equal() const {
    for (const auto& r : rows)
      if (!r.rankings_equal) return false;
    return true;
  }
};

BenchReport run_bench(const BenchConfig& config);

// Deterministic apart from the trailing seconds column.
std::string bench_csv(const BenchReport& report);

// Clear-pipeline ranking with the same deterministic tie-break as the
// encrypted path.
std::vector<std::string> rank_clear(const ClearSignature& query,
                                    const std::vector<std::string>& ids,
                                    const std::vector<ClearSignature>& sigs, int k);

}  // namespace socbir
