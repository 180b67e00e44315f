// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "socbir/histogram.hpp"

namespace socbir {

struct LabeledImage {
  std::string id;
  int label = 0;
  Grid<Bigint> image;
};

// Band-limited integer texture families; class signatures separate on
// wavelet sub-band histograms (stripe orientation and period decide where
// the energy lands). Amplitudes are kept moderate so desk-scale keys cover
// the coefficient dynamics.
struct CorpusParams {
  int size = 32;
  int num_classes = 5;
  int db_per_class = 4;
  int query_per_class = 2;
  int base = 128;
  int amplitude = 12;
  int jitter = 2;
};

struct SyntheticCorpus {
  CorpusParams params;
  std::uint64_t seed = 0;
  std::vector<LabeledImage> database;
  std::vector<LabeledImage> queries;
};

SyntheticCorpus make_corpus(const CorpusParams& params, std::uint64_t seed);

// Face-like grayscale test target for the reconstruction-attack demo.
Grid<Bigint> face_image(int size);

// Tight per-band coefficient bounds measured over a set of images; the
// corpus publishes these as part of its shared retrieval configuration.
std::vector<ValueRange> measured_band_ranges(
    const std::vector<const Grid<Bigint>*>& images, const FilterPair& f,
    int levels);
std::vector<ValueRange> corpus_band_ranges(const SyntheticCorpus& corpus,
                                           const FilterPair& f, int levels);

// Binary PGM (P5), 8-bit.
void write_pgm(const std::filesystem::path& path, const Grid<Bigint>& image);
Grid<Bigint> read_pgm(const std::filesystem::path& path);

}  // namespace socbir
