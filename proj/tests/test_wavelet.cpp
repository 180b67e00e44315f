// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "socbir/wavelet.hpp"
#include "support.hpp"

using namespace socbir;
using namespace socbir::test;

namespace {

Grid<Ciphertext> encrypt_grid(const Grid<Bigint>& img,
                              const Grid<TrackedRandom>& rands,
                              const PublicKey& pk) {
  Grid<Ciphertext> out(img.rows, img.cols);
  for (std::size_t i = 0; i < img.size(); ++i)
    out.cells[i] = encrypt(img.cells[i], rands.cells[i], pk);
  return out;
}

Grid<TrackedRandom> draw_grid(Rng& rng, int rows, int cols, const PublicKey& pk) {
  Grid<TrackedRandom> out(rows, cols);
  for (auto& r : out.cells) r = draw_random(rng, pk);
  return out;
}

Grid<Bigint> decrypt_grid(const Grid<Ciphertext>& enc, const PrivateKey& sk) {
  Grid<Bigint> out(enc.rows, enc.cols);
  for (std::size_t i = 0; i < enc.size(); ++i)
    out.cells[i] = decrypt(enc.cells[i], sk);
  return out;
}

}  // namespace

TEST_CASE("filter expansion") {
  const double s = 0.7071;
  FilterPair f = expand_filters({s, s}, {s, -s}, 4);
  CHECK(f.low == std::vector<long>{3, 3});
  CHECK(f.high == std::vector<long>{3, -3});
  FilterPair half = expand_filters({0.5, 0.5}, {0.5, -0.5}, 4);
  CHECK(half.low == std::vector<long>{2, 2});
  CHECK(half.high == std::vector<long>{2, -2});
  CHECK(haar_filters(4).low == std::vector<long>{3, 3});
  CHECK(haar_half_filters(4).high == std::vector<long>{2, -2});
  CHECK_THROWS_AS(expand_filters({0.1}, {0.5}, 1), DegenerateFilterError);
  CHECK_THROWS_AS(expand_filters({}, {0.5}, 4), DegenerateFilterError);
}

TEST_CASE("clear transform of a constant image") {
  FilterPair f = haar_half_filters(4);  // H=(2,2)
  Grid<Bigint> img(4, 4);
  for (auto& p : img.cells) p = 9;
  ClearPyramid pyr = dwt2_clear(img, f, 1);
  for (const auto& c : pyr.approx.grid.cells) CHECK(c == 16 * 9);
  for (const auto& sub : pyr.details[0])
    for (const auto& c : sub.grid.cells) CHECK(c == 0);
}

TEST_CASE("clear transform of the 2x2 example") {
  FilterPair f = haar_half_filters(4);
  Grid<Bigint> img(2, 2);
  img.at(0, 0) = 1;
  img.at(0, 1) = 3;
  img.at(1, 0) = 5;
  img.at(1, 1) = 7;
  ClearPyramid pyr = dwt2_clear(img, f, 1);
  CHECK(pyr.approx.grid.at(0, 0) == 64);  // 4 * (1+3+5+7)
}

TEST_CASE("geometry errors") {
  FilterPair f = haar_filters(4);
  Grid<Bigint> img(6, 6);
  CHECK_THROWS_AS(dwt2_clear(img, f, 2), GeometryError);  // 3x3 at level 2
  Grid<Bigint> odd(5, 4);
  CHECK_THROWS_AS(dwt2_clear(odd, f, 1), GeometryError);
}

TEST_CASE("inverse transform") {
  Rng rng(3);
  for (const FilterPair& f : {haar_filters(4), haar_half_filters(4)}) {
    SUBCASE("roundtrip on random images") {
      for (int trial = 0; trial < 4; ++trial) {
        Grid<Bigint> img = random_image(rng, 8, 8);
        for (int levels : {1, 2, 3})
          CHECK(idwt2_clear(dwt2_clear(img, f, levels), f) == img);
      }
    }
    SUBCASE("constant approximation with zero details") {
      Grid<Bigint> img(4, 4);
      for (auto& p : img.cells) p = 50;
      ClearPyramid pyr = dwt2_clear(img, f, 2);
      Grid<Bigint> back = idwt2_clear(pyr, f);
      for (const auto& p : back.cells) CHECK(p == 50);
    }
  }
}

TEST_CASE("band ranges contain every observed coefficient") {
  Rng rng(17);
  FilterPair f = haar_filters(4);
  for (int trial = 0; trial < 5; ++trial) {
    Grid<Bigint> img = random_image(rng, 8, 8);
    ClearPyramid pyr = dwt2_clear(img, f, 2);
    auto bands = pyr.signature_bands();
    for (const Subband* sub : bands) {
      ValueRange r = band_range(f, sub->level, sub->band, 0, 255);
      for (const auto& c : sub->grid.cells) {
        CHECK(c >= r.lo);
        CHECK(c <= r.hi);
      }
    }
  }
  // approximation gain grows as (sum H)^2 per level: 255*36^2 at level 2
  ValueRange r2 = band_range(f, 2, BandTag::HH, 0, 255);
  CHECK(r2.hi == 255 * 36 * 36);
  CHECK(r2.lo == 0);
  CHECK(band_gain(f, 2, BandTag::HH) == 36 * 36);
  CHECK(band_gain(f, 0, BandTag::HH) == 1);
  CHECK(band_gain(f, 1, BandTag::HG) == 36);
}

TEST_CASE("encrypted transform decrypts to the clear transform") {
  Rng rng(23);
  Keypair k = keygen(32, rng);
  for (const FilterPair& f : {haar_filters(4), haar_half_filters(4)}) {
    Grid<Bigint> img = random_image(rng, 8, 8);
    Grid<TrackedRandom> rands = draw_grid(rng, 8, 8, k.pub);
    EncPyramid enc = dwt2_encrypted(encrypt_grid(img, rands, k.pub), f, 2, k.pub);
    ClearPyramid clear = dwt2_clear(img, f, 2);
    auto eb = enc.signature_bands();
    auto cb = clear.signature_bands();
    REQUIRE(eb.size() == cb.size());
    for (std::size_t b = 0; b < eb.size(); ++b)
      CHECK(decrypt_grid(eb[b]->grid, k.sec) == cb[b]->grid);
  }
}

TEST_CASE("all-zero image yields zero detail plaintexts") {
  Rng rng(29);
  Keypair k = keygen(16, rng);
  FilterPair f = haar_filters(4);
  Grid<Bigint> img(4, 4);  // all zeros
  Grid<TrackedRandom> rands = draw_grid(rng, 4, 4, k.pub);
  EncPyramid enc = dwt2_encrypted(encrypt_grid(img, rands, k.pub), f, 1, k.pub);
  for (const auto& sub : enc.details[0])
    for (const auto& c : sub.grid.cells) CHECK(decrypt(c, k.sec) == 0);
}

TEST_CASE("single-level 2x2 block equals a hand-rolled product of powers") {
  Rng rng(31);
  Keypair k = keygen(16, rng);
  FilterPair f = haar_filters(4);
  Grid<Bigint> img = random_image(rng, 2, 2, 0, 50);
  Grid<TrackedRandom> rands = draw_grid(rng, 2, 2, k.pub);
  Grid<Ciphertext> enc = encrypt_grid(img, rands, k.pub);
  EncPyramid pyr = dwt2_encrypted(enc, f, 1, k.pub);

  // Direct product form: four pixel ciphertexts, each raised to its tap
  // product, multiplied in Z*_{Kp^2}. Periodic indexing folds -1 to 1.
  const Bigint n2 = k.pub.modulus_squared;
  auto powmod = [&](const Bigint& base, long e) {
    Bigint b = e < 0 ? egcd_inverse(base, n2) : base;
    return naive_powm(b, e < 0 ? -e : e, n2);
  };
  auto direct = [&](const std::vector<long>& wr, const std::vector<long>& wc) {
    Bigint acc = 1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        int r = ((0 - i) % 2 + 2) % 2, c = ((0 - j) % 2 + 2) % 2;
        acc = acc * powmod(enc.at(r, c).value, wr[i] * wc[j]) % n2;
      }
    return acc;
  };
  CHECK(pyr.approx.grid.at(0, 0).value == direct(f.low, f.low));
  CHECK(pyr.details[0][0].grid.at(0, 0).value == direct(f.low, f.high));   // HG
  CHECK(pyr.details[0][1].grid.at(0, 0).value == direct(f.high, f.low));   // GH
  CHECK(pyr.details[0][2].grid.at(0, 0).value == direct(f.high, f.high));  // GG
}

TEST_CASE("encrypted transform is linear over hom_add") {
  Rng rng(37);
  Keypair k = keygen(32, rng);
  FilterPair f = haar_filters(4);
  Grid<Bigint> a = random_image(rng, 4, 4, 0, 100);
  Grid<Bigint> b = random_image(rng, 4, 4, 0, 100);
  Grid<Ciphertext> ea = encrypt_grid(a, draw_grid(rng, 4, 4, k.pub), k.pub);
  Grid<Ciphertext> eb = encrypt_grid(b, draw_grid(rng, 4, 4, k.pub), k.pub);
  Grid<Ciphertext> esum(4, 4);
  Grid<Bigint> sum(4, 4);
  for (std::size_t i = 0; i < esum.size(); ++i) {
    esum.cells[i] = hom_add(ea.cells[i], eb.cells[i], k.pub);
    sum.cells[i] = a.cells[i] + b.cells[i];
  }
  EncPyramid enc = dwt2_encrypted(esum, f, 1, k.pub);
  ClearPyramid clear = dwt2_clear(sum, f, 1);
  auto ebands = enc.signature_bands();
  auto cbands = clear.signature_bands();
  for (std::size_t i = 0; i < ebands.size(); ++i)
    CHECK(decrypt_grid(ebands[i]->grid, k.sec) == cbands[i]->grid);
}

TEST_CASE("random recursion closed forms") {
  Keypair k = tiny_key();
  FilterPair f = haar_half_filters(4);  // H=(2,2), G=(2,-2)
  Grid<TrackedRandom> rands(2, 2);
  for (auto& r : rands.cells) r = TrackedRandom{6};
  RandPyramid pyr = random_recursion(rands, f, 1, k.pub);
  // each tap product is 4; four pixels -> r0^16
  CHECK(pyr.approx.grid.at(0, 0).value == naive_powm(6, 16, k.pub.modulus));
  // GG tap products are +4,-4,-4,+4: net exponent zero on a constant grid
  CHECK(pyr.details[0][2].grid.at(0, 0).value == 1);
}

TEST_CASE("recursed randoms re-encrypt the clear coefficients bit-exactly") {
  Rng rng(41);
  Keypair k = keygen(32, rng);
  for (const FilterPair& f : {haar_filters(4), haar_half_filters(4)}) {
    Grid<Bigint> img = random_image(rng, 8, 8);
    Grid<TrackedRandom> rands = draw_grid(rng, 8, 8, k.pub);
    EncPyramid enc = dwt2_encrypted(encrypt_grid(img, rands, k.pub), f, 2, k.pub);
    ClearPyramid clear = dwt2_clear(img, f, 2);
    RandPyramid rec = random_recursion(rands, f, 2, k.pub);
    auto eb = enc.signature_bands();
    auto cb = clear.signature_bands();
    auto rb = rec.signature_bands();
    for (std::size_t b = 0; b < eb.size(); ++b)
      for (std::size_t i = 0; i < eb[b]->grid.size(); ++i)
        REQUIRE(encrypt(cb[b]->grid.cells[i], rb[b]->grid.cells[i], k.pub).value ==
                eb[b]->grid.cells[i].value);
  }
}

TEST_CASE("separable kernels match the direct-form references") {
  Rng rng(43);
  Keypair k = keygen(16, rng);
  FilterPair f = haar_filters(4);
  Grid<Bigint> img = random_image(rng, 8, 8, 0, 40);
  Grid<TrackedRandom> rands = draw_grid(rng, 8, 8, k.pub);
  Grid<Ciphertext> enc = encrypt_grid(img, rands, k.pub);

  EncPyramid fast = dwt2_encrypted(enc, f, 2, k.pub);
  EncPyramid slow = dwt2_encrypted_reference(enc, f, 2, k.pub);
  auto fb = fast.signature_bands();
  auto sb = slow.signature_bands();
  for (std::size_t b = 0; b < fb.size(); ++b)
    CHECK(fb[b]->grid == sb[b]->grid);

  RandPyramid rfast = random_recursion(rands, f, 2, k.pub);
  RandPyramid rslow = random_recursion_reference(rands, f, 2, k.pub);
  auto rfb = rfast.signature_bands();
  auto rsb = rslow.signature_bands();
  for (std::size_t b = 0; b < rfb.size(); ++b)
    CHECK(rfb[b]->grid == rsb[b]->grid);
}
