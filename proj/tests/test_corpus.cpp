// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "socbir/attack.hpp"
#include "socbir/corpus.hpp"
#include "support.hpp"

using namespace socbir;
using namespace socbir::test;

TEST_CASE("corpus generation is deterministic and labeled") {
  CorpusParams params;
  SyntheticCorpus a = make_corpus(params, 7);
  SyntheticCorpus b = make_corpus(params, 7);
  SyntheticCorpus c = make_corpus(params, 8);
  REQUIRE(a.database.size() == 20);
  REQUIRE(a.queries.size() == 10);
  for (std::size_t i = 0; i < a.database.size(); ++i) {
    CHECK(a.database[i].image == b.database[i].image);
    CHECK(a.database[i].id == b.database[i].id);
  }
  bool any_diff = false;
  for (std::size_t i = 0; i < a.database.size(); ++i)
    if (!(a.database[i].image == c.database[i].image)) any_diff = true;
  CHECK(any_diff);
  for (const auto& e : a.database) {
    CHECK(e.label >= 0);
    CHECK(e.label < params.num_classes);
    for (const auto& p : e.image.cells) {
      CHECK(p >= 0);
      CHECK(p <= 255);
    }
  }
  CorpusParams bad;
  bad.num_classes = 1;
  CHECK_THROWS_AS(make_corpus(bad, 1), Error);
}

TEST_CASE("pgm roundtrip") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "socbir-pgm-test.pgm";
  Rng rng(3);
  Grid<Bigint> img = random_image(rng, 12, 16);
  write_pgm(p, img);
  CHECK(read_pgm(p) == img);
  fs::remove(p);
}

TEST_CASE("measured ranges cover the corpus") {
  SyntheticCorpus corpus = make_corpus(CorpusParams{}, 5);
  FilterPair f = haar_filters(4);
  auto ranges = corpus_band_ranges(corpus, f, 2);
  REQUIRE(ranges.size() == 7);
  for (const auto& e : corpus.queries) {
    ClearPyramid pyr = dwt2_clear(e.image, f, 2);
    auto bands = pyr.signature_bands();
    for (std::size_t i = 0; i < bands.size(); ++i)
      for (const auto& c : bands[i]->grid.cells) {
        CHECK(c >= ranges[i].lo);
        CHECK(c <= ranges[i].hi);
      }
  }
}

namespace {

// Symmetric layout with an odd class count, so zero sits exactly on the
// center of the middle class.
SignatureLayout attack_layout(const FilterPair& f, int levels, long delta,
                              int classes) {
  SignatureLayout ly;
  ly.filters = f;
  ly.levels = levels;
  ly.classes = classes;
  ly.noisy_classes = 2 * classes;
  ly.seed_id = "attack";
  for (const auto& key : signature_band_keys(levels)) {
    BandLayout b;
    b.level = key.level;
    b.band = key.tag;
    b.delta = delta * band_gain(f, key.level, key.tag);
    b.classes = classes;
    b.noisy_classes = 2 * classes;
    b.c_min = -(Bigint(classes) * b.delta) / 2;
    b.c_max = b.c_min + classes * b.delta - 1;
    ly.bands.push_back(b);
  }
  return ly;
}

}  // namespace

TEST_CASE("reconstruction attack separation") {
  FilterPair f = haar_filters(4);
  Grid<Bigint> face = face_image(32);
  // delta = 32, d = 2; class count sized to the face's detail dynamic
  SignatureLayout layout = attack_layout(f, 2, 32, 21);
  AttackOutcome leaky = attack_demo(face, layout, AttackMode::leaky, 4);
  AttackOutcome secure = attack_demo(face, layout, AttackMode::secure, 4);
  CHECK(leaky.correlation > secure.correlation + 0.3);
  CHECK(leaky.correlation > 0.4);

  SUBCASE("secure correlation is indistinguishable from permuted baselines") {
    Rng rng(17);
    Grid<Bigint> shuffled = secure.reconstruction;
    int at_least_as_extreme = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      // Fisher-Yates with the seeded stream
      for (std::size_t i = shuffled.size() - 1; i > 0; --i)
        std::swap(shuffled.cells[i], shuffled.cells[rng.below(i + 1)]);
      if (std::abs(pearson(shuffled, face)) >= std::abs(secure.correlation))
        ++at_least_as_extreme;
    }
    double p_value = static_cast<double>(at_least_as_extreme) / trials;
    CHECK(p_value > 0.05);
  }
}

TEST_CASE("constant image reconstructs flat in leaky mode") {
  FilterPair f = haar_filters(4);
  Grid<Bigint> img(16, 16);
  for (auto& p : img.cells) p = 90;
  SignatureLayout layout = attack_layout(f, 2, 32, 5);
  AttackOutcome leaky = attack_demo(img, layout, AttackMode::leaky, 9);
  for (const auto& c : leaky.reconstruction.cells)
    CHECK(c == leaky.reconstruction.cells[0]);
  // constant original has zero variance; correlation degenerates to 0
  CHECK(leaky.correlation == 0.0);
}
