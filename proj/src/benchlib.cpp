// SPDX-License-Identifier: Apache-2.0
#include "socbir/benchlib.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "socbir/server.hpp"

namespace socbir {

std::vector<std::string> rank_clear(const ClearSignature& query,
                                    const std::vector<std::string>& ids,
                                    const std::vector<ClearSignature>& sigs, int k) {
  struct Row {
    long long distance;
    std::string id;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < sigs.size(); ++i)
    rows.push_back({l1_clear(query, sigs[i]), ids[i]});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  if (static_cast<int>(rows.size()) > k) rows.resize(k);
  std::vector<std::string> out;
  for (const auto& r : rows) out.push_back(r.id);
  return out;
}

namespace {

double precision_at_k(const std::vector<std::string>& ranked,
                      const SyntheticCorpus& corpus, int query_label) {
  if (ranked.empty()) return 0;
  int hits = 0;
  for (const auto& id : ranked)
    for (const auto& e : corpus.database)
      if (e.id == id && e.label == query_label) ++hits;
  return static_cast<double>(hits) / static_cast<double>(ranked.size());
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  const FilterPair filters = haar_filters(4);
  SyntheticCorpus corpus = make_corpus(config.corpus, config.seed);
  const std::string seed_id = fnv1a_hex("refseed:" + std::to_string(config.seed));
  const std::uint64_t ref_seed = config.seed ^ 0x5eed0f5eed0f5eedULL;

  BenchReport report;
  report.seed = config.seed;

  for (int d : config.depths) {
    const auto ranges = corpus_band_ranges(corpus, filters, d);
    for (long delta : config.deltas) {
      const auto t0 = std::chrono::steady_clock::now();
      SignatureLayout layout = layout_from_delta(filters, d, ranges, Bigint(delta),
                                                 config.kprime_factor, seed_id);
      BenchRow row;
      row.delta = delta;
      row.depth = d;
      row.classes = layout.classes;
      row.noisy_classes = layout.noisy_classes;
      row.key_bits = config.bits_for_depth(d);
      row.payload_per_image =
          payload_count(config.corpus.size, config.corpus.size, layout.classes,
                        layout.noisy_classes, d, config.mode);

      // Clear pipeline.
      std::vector<std::string> db_ids;
      std::vector<ClearSignature> db_clear;
      for (const auto& e : corpus.database) {
        db_ids.push_back(e.id);
        db_clear.push_back(compute_clear_signature(e.image, layout));
      }

      // Encrypted pipeline: every image under its own key, signatures
      // computed by the server role from packages alone.
      Rng rng(config.seed ^ fnv1a("bench-point|" + std::to_string(delta) + "|" +
                                  std::to_string(d)));
      std::vector<EncryptedSignature> db_enc;
      for (const auto& e : corpus.database) {
        Keypair keys = keygen(row.key_bits, rng);
        BuiltPackage built = build_package(e.id, e.image, keys, layout, config.mode,
                                           ref_seed, rng);
        db_enc.push_back(Service::compute_signature(built.package));
      }
      std::vector<SignatureEntry> db_entries;
      for (std::size_t i = 0; i < db_enc.size(); ++i)
        db_entries.push_back({db_ids[i], &db_enc[i]});

      bool all_equal = true;
      double prec_cd = 0, prec_ed = 0;
      for (const auto& q : corpus.queries) {
        ClearSignature qsig_clear = compute_clear_signature(q.image, layout);
        auto cd = rank_clear(qsig_clear, db_ids, db_clear, config.top_k);

        Keypair keys = keygen(row.key_bits, rng);
        BuiltPackage built = build_package(q.id, q.image, keys, layout, config.mode,
                                           ref_seed, rng);
        EncryptedSignature qsig = Service::compute_signature(built.package);
        auto ranked = rank_top_k(qsig, db_entries, config.top_k);
        std::vector<std::string> ed;
        for (const auto& r : ranked) ed.push_back(r.id);

        if (cd != ed) all_equal = false;
        prec_cd += precision_at_k(cd, corpus, q.label);
        prec_ed += precision_at_k(ed, corpus, q.label);
      }
      const double nq = static_cast<double>(corpus.queries.size());
      row.precision_clear = prec_cd / nq;
      row.precision_encrypted = prec_ed / nq;
      row.rankings_equal = all_equal;
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "delta,d,K,Kprime,key_bits,precision_cd,precision_ed,rankings_equal,"
        "payload_per_image,seconds\n";
  for (const auto& r : report.rows) {
    os << r.delta << ',' << r.depth << ',' << r.classes << ',' << r.noisy_classes
       << ',' << r.key_bits << ',';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.precision_clear,
                  r.precision_encrypted);
    os << buf << ',' << (r.rankings_equal ? 1 : 0) << ',' << r.payload_per_image
       << ',';
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
    os << buf << '\n';
  }
  return os.str();
}

}  // namespace socbir
