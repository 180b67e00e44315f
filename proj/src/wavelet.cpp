// SPDX-License-Identifier: Apache-2.0
#include "socbir/wavelet.hpp"

#include <cmath>
#include <cstdlib>

#include "socbir/modmath.hpp"
#include "socbir/parallel.hpp"

namespace socbir {

namespace {

inline int wrap(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

void check_even(int rows, int cols) {
  if (rows < 2 || cols < 2 || rows % 2 != 0 || cols % 2 != 0)
    throw GeometryError("dimensions must halve evenly at every level");
}

long sum_abs(const std::vector<long>& taps) {
  long s = 0;
  for (long t : taps) s += std::labs(t);
  return s;
}

// ---- clear-domain stages ----------------------------------------------

// Transform along rows: out(x, c) = sum_i taps[i] * in((2x-i) mod R, c).
Grid<Bigint> stage_rows(const Grid<Bigint>& in, const std::vector<long>& taps) {
  Grid<Bigint> out(in.rows / 2, in.cols);
  for (int x = 0; x < out.rows; ++x)
    for (int c = 0; c < out.cols; ++c) {
      Bigint acc = 0;
      for (std::size_t i = 0; i < taps.size(); ++i)
        acc += taps[i] * in.at(wrap(2 * x - static_cast<int>(i), in.rows), c);
      out.at(x, c) = acc;
    }
  return out;
}

Grid<Bigint> stage_cols(const Grid<Bigint>& in, const std::vector<long>& taps) {
  Grid<Bigint> out(in.rows, in.cols / 2);
  for (int r = 0; r < out.rows; ++r)
    for (int y = 0; y < out.cols; ++y) {
      Bigint acc = 0;
      for (std::size_t j = 0; j < taps.size(); ++j)
        acc += taps[j] * in.at(r, wrap(2 * y - static_cast<int>(j), in.cols));
      out.at(r, y) = acc;
    }
  return out;
}

// ---- encrypted stages (products of powers mod Kp^2) --------------------

Grid<Ciphertext> stage_rows_enc(const Grid<Ciphertext>& in,
                                const std::vector<long>& taps,
                                const PublicKey& pk) {
  Grid<Ciphertext> out(in.rows / 2, in.cols);
  parallel_for(static_cast<long long>(out.rows) * out.cols, [&](long long idx) {
    const int x = static_cast<int>(idx / out.cols);
    const int c = static_cast<int>(idx % out.cols);
    Bigint acc = 1;
    for (std::size_t i = 0; i < taps.size(); ++i) {
      const Ciphertext& cell = in.at(wrap(2 * x - static_cast<int>(i), in.rows), c);
      acc = mulm(acc, powm_signed(cell.value, taps[i], pk.modulus_squared),
                 pk.modulus_squared);
    }
    out.at(x, c) = Ciphertext{acc, pk.key_id};
  });
  return out;
}

Grid<Ciphertext> stage_cols_enc(const Grid<Ciphertext>& in,
                                const std::vector<long>& taps,
                                const PublicKey& pk) {
  Grid<Ciphertext> out(in.rows, in.cols / 2);
  parallel_for(static_cast<long long>(out.rows) * out.cols, [&](long long idx) {
    const int r = static_cast<int>(idx / out.cols);
    const int y = static_cast<int>(idx % out.cols);
    Bigint acc = 1;
    for (std::size_t j = 0; j < taps.size(); ++j) {
      const Ciphertext& cell = in.at(r, wrap(2 * y - static_cast<int>(j), in.cols));
      acc = mulm(acc, powm_signed(cell.value, taps[j], pk.modulus_squared),
                 pk.modulus_squared);
    }
    out.at(r, y) = Ciphertext{acc, pk.key_id};
  });
  return out;
}

// ---- random-grid stages (same algebra mod Kp) ---------------------------

Grid<TrackedRandom> stage_rows_rand(const Grid<TrackedRandom>& in,
                                    const std::vector<long>& taps,
                                    const PublicKey& pk) {
  Grid<TrackedRandom> out(in.rows / 2, in.cols);
  parallel_for(static_cast<long long>(out.rows) * out.cols, [&](long long idx) {
    const int x = static_cast<int>(idx / out.cols);
    const int c = static_cast<int>(idx % out.cols);
    Bigint acc = 1;
    for (std::size_t i = 0; i < taps.size(); ++i) {
      const TrackedRandom& cell =
          in.at(wrap(2 * x - static_cast<int>(i), in.rows), c);
      acc = acc * powm_signed(cell.value, taps[i], pk.modulus) % pk.modulus;
    }
    out.at(x, c) = TrackedRandom{acc};
  });
  return out;
}

Grid<TrackedRandom> stage_cols_rand(const Grid<TrackedRandom>& in,
                                    const std::vector<long>& taps,
                                    const PublicKey& pk) {
  Grid<TrackedRandom> out(in.rows, in.cols / 2);
  parallel_for(static_cast<long long>(out.rows) * out.cols, [&](long long idx) {
    const int r = static_cast<int>(idx / out.cols);
    const int y = static_cast<int>(idx % out.cols);
    Bigint acc = 1;
    for (std::size_t j = 0; j < taps.size(); ++j) {
      const TrackedRandom& cell =
          in.at(r, wrap(2 * y - static_cast<int>(j), in.cols));
      acc = acc * powm_signed(cell.value, taps[j], pk.modulus) % pk.modulus;
    }
    out.at(r, y) = TrackedRandom{acc};
  });
  return out;
}

void validate_filters(const FilterPair& f) {
  if (f.low.empty() || f.high.empty())
    throw DegenerateFilterError("empty filter");
  bool low_zero = sum_abs(f.low) == 0, high_zero = sum_abs(f.high) == 0;
  if (low_zero || high_zero)
    throw DegenerateFilterError("quantization flattened a filter to zero");
}

}  // namespace

FilterPair expand_filters(const std::vector<double>& h, const std::vector<double>& g,
                          long q, const std::string& name) {
  if (q < 1) throw DegenerateFilterError("scale must be >= 1");
  if (h.empty() || g.empty()) throw DegenerateFilterError("empty filter");
  FilterPair f;
  f.scale = q;
  f.name = name;
  for (double v : h) f.low.push_back(std::llround(q * v));
  for (double v : g) f.high.push_back(std::llround(q * v));
  validate_filters(f);
  return f;
}

FilterPair haar_filters(long q) {
  const double s = 0.70710678118654752;
  return expand_filters({s, s}, {s, -s}, q, "haar");
}

FilterPair haar_half_filters(long q) {
  return expand_filters({0.5, 0.5}, {0.5, -0.5}, q, "haar-half");
}

const char* band_name(BandTag b) {
  switch (b) {
    case BandTag::HG: return "HG";
    case BandTag::GH: return "GH";
    case BandTag::GG: return "GG";
    case BandTag::HH: return "HH";
  }
  return "?";
}

BandTag band_from_name(const std::string& name) {
  if (name == "HG") return BandTag::HG;
  if (name == "GH") return BandTag::GH;
  if (name == "GG") return BandTag::GG;
  if (name == "HH") return BandTag::HH;
  throw MalformedPackageError("unknown band tag " + name);
}

ClearPyramid dwt2_clear(const Grid<Bigint>& image, const FilterPair& f, int levels) {
  validate_filters(f);
  if (levels < 0) throw GeometryError("negative level count");
  ClearPyramid pyr;
  pyr.levels = levels;
  Grid<Bigint> approx = image;
  for (int d = 1; d <= levels; ++d) {
    check_even(approx.rows, approx.cols);
    Grid<Bigint> low = stage_rows(approx, f.low);
    Grid<Bigint> high = stage_rows(approx, f.high);
    std::array<Subband, 3> lvl{
        Subband{d, BandTag::HG, stage_cols(low, f.high)},
        Subband{d, BandTag::GH, stage_cols(high, f.low)},
        Subband{d, BandTag::GG, stage_cols(high, f.high)}};
    approx = stage_cols(low, f.low);
    pyr.details.push_back(std::move(lvl));
  }
  pyr.approx = Subband{levels, BandTag::HH, std::move(approx)};
  return pyr;
}

EncPyramid dwt2_encrypted(const Grid<Ciphertext>& image, const FilterPair& f,
                          int levels, const PublicKey& pk) {
  validate_filters(f);
  if (levels < 0) throw GeometryError("negative level count");
  for (const auto& c : image.cells)
    if (c.key_id != pk.key_id)
      throw KeyMismatchError("encrypted image under a different key");
  EncPyramid pyr;
  pyr.levels = levels;
  Grid<Ciphertext> approx = image;
  for (int d = 1; d <= levels; ++d) {
    check_even(approx.rows, approx.cols);
    Grid<Ciphertext> low = stage_rows_enc(approx, f.low, pk);
    Grid<Ciphertext> high = stage_rows_enc(approx, f.high, pk);
    std::array<EncSubband, 3> lvl{
        EncSubband{d, BandTag::HG, stage_cols_enc(low, f.high, pk)},
        EncSubband{d, BandTag::GH, stage_cols_enc(high, f.low, pk)},
        EncSubband{d, BandTag::GG, stage_cols_enc(high, f.high, pk)}};
    approx = stage_cols_enc(low, f.low, pk);
    pyr.details.push_back(std::move(lvl));
  }
  pyr.approx = EncSubband{levels, BandTag::HH, std::move(approx)};
  return pyr;
}

EncPyramid dwt2_encrypted_reference(const Grid<Ciphertext>& image,
                                    const FilterPair& f, int levels,
                                    const PublicKey& pk) {
  validate_filters(f);
  // Direct two-dimensional product form, one ciphertext power per tap pair.
  auto direct_band = [&](const Grid<Ciphertext>& in, const std::vector<long>& wr,
                         const std::vector<long>& wc) {
    Grid<Ciphertext> out(in.rows / 2, in.cols / 2);
    for (int x = 0; x < out.rows; ++x)
      for (int y = 0; y < out.cols; ++y) {
        Bigint acc = 1;
        for (std::size_t i = 0; i < wr.size(); ++i)
          for (std::size_t j = 0; j < wc.size(); ++j) {
            const Ciphertext& cell = in.at(wrap(2 * x - static_cast<int>(i), in.rows),
                                           wrap(2 * y - static_cast<int>(j), in.cols));
            acc = mulm(acc, powm_signed(cell.value, wr[i] * wc[j], pk.modulus_squared),
                       pk.modulus_squared);
          }
        out.at(x, y) = Ciphertext{acc, pk.key_id};
      }
    return out;
  };
  EncPyramid pyr;
  pyr.levels = levels;
  Grid<Ciphertext> approx = image;
  for (int d = 1; d <= levels; ++d) {
    check_even(approx.rows, approx.cols);
    std::array<EncSubband, 3> lvl{
        EncSubband{d, BandTag::HG, direct_band(approx, f.low, f.high)},
        EncSubband{d, BandTag::GH, direct_band(approx, f.high, f.low)},
        EncSubband{d, BandTag::GG, direct_band(approx, f.high, f.high)}};
    approx = direct_band(approx, f.low, f.low);
    pyr.details.push_back(std::move(lvl));
  }
  pyr.approx = EncSubband{levels, BandTag::HH, std::move(approx)};
  return pyr;
}

RandPyramid random_recursion(const Grid<TrackedRandom>& pixel_randoms,
                             const FilterPair& f, int levels, const PublicKey& pk) {
  validate_filters(f);
  RandPyramid pyr;
  pyr.levels = levels;
  Grid<TrackedRandom> approx = pixel_randoms;
  for (int d = 1; d <= levels; ++d) {
    check_even(approx.rows, approx.cols);
    Grid<TrackedRandom> low = stage_rows_rand(approx, f.low, pk);
    Grid<TrackedRandom> high = stage_rows_rand(approx, f.high, pk);
    std::array<RandSubband, 3> lvl{
        RandSubband{d, BandTag::HG, stage_cols_rand(low, f.high, pk)},
        RandSubband{d, BandTag::GH, stage_cols_rand(high, f.low, pk)},
        RandSubband{d, BandTag::GG, stage_cols_rand(high, f.high, pk)}};
    approx = stage_cols_rand(low, f.low, pk);
    pyr.details.push_back(std::move(lvl));
  }
  pyr.approx = RandSubband{levels, BandTag::HH, std::move(approx)};
  return pyr;
}

RandPyramid random_recursion_reference(const Grid<TrackedRandom>& pixel_randoms,
                                       const FilterPair& f, int levels,
                                       const PublicKey& pk) {
  validate_filters(f);
  auto direct_band = [&](const Grid<TrackedRandom>& in, const std::vector<long>& wr,
                         const std::vector<long>& wc) {
    Grid<TrackedRandom> out(in.rows / 2, in.cols / 2);
    for (int x = 0; x < out.rows; ++x)
      for (int y = 0; y < out.cols; ++y) {
        Bigint acc = 1;
        for (std::size_t i = 0; i < wr.size(); ++i)
          for (std::size_t j = 0; j < wc.size(); ++j) {
            const TrackedRandom& cell =
                in.at(wrap(2 * x - static_cast<int>(i), in.rows),
                      wrap(2 * y - static_cast<int>(j), in.cols));
            acc = acc * powm_signed(cell.value, wr[i] * wc[j], pk.modulus) % pk.modulus;
          }
        out.at(x, y) = TrackedRandom{acc};
      }
    return out;
  };
  RandPyramid pyr;
  pyr.levels = levels;
  Grid<TrackedRandom> approx = pixel_randoms;
  for (int d = 1; d <= levels; ++d) {
    check_even(approx.rows, approx.cols);
    std::array<RandSubband, 3> lvl{
        RandSubband{d, BandTag::HG, direct_band(approx, f.low, f.high)},
        RandSubband{d, BandTag::GH, direct_band(approx, f.high, f.low)},
        RandSubband{d, BandTag::GG, direct_band(approx, f.high, f.high)}};
    approx = direct_band(approx, f.low, f.low);
    pyr.details.push_back(std::move(lvl));
  }
  pyr.approx = RandSubband{levels, BandTag::HH, std::move(approx)};
  return pyr;
}

// ---- exact rational inverse ---------------------------------------------

namespace {

using Rational = mpq_class;

// Dense 1D analysis operator for size n: first n/2 rows apply H, the rest G.
std::vector<std::vector<Rational>> analysis_matrix(int n, const FilterPair& f) {
  std::vector<std::vector<Rational>> t(n, std::vector<Rational>(n, 0));
  for (int x = 0; x < n / 2; ++x)
    for (std::size_t i = 0; i < f.low.size(); ++i)
      t[x][wrap(2 * x - static_cast<int>(i), n)] += f.low[i];
  for (int x = 0; x < n / 2; ++x)
    for (std::size_t i = 0; i < f.high.size(); ++i)
      t[n / 2 + x][wrap(2 * x - static_cast<int>(i), n)] += f.high[i];
  return t;
}

// Gauss-Jordan over rationals; throws if the filter pair is not invertible.
std::vector<std::vector<Rational>> invert_matrix(std::vector<std::vector<Rational>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw DegenerateFilterError("analysis operator is singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Rational d = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational m = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] -= m * a[col][c];
        inv[r][c] -= m * inv[col][c];
      }
    }
  }
  return inv;
}

using RGrid = Grid<Rational>;

RGrid to_rational(const Grid<Bigint>& g) {
  RGrid out(g.rows, g.cols);
  for (std::size_t i = 0; i < g.cells.size(); ++i) out.cells[i] = g.cells[i];
  return out;
}

// Undo a column stage: rows of (low | high) through the inverse operator.
RGrid unstage_cols(const RGrid& low, const RGrid& high, const FilterPair& f) {
  const int n = low.cols * 2;
  auto inv = invert_matrix(analysis_matrix(n, f));
  RGrid out(low.rows, n);
  for (int r = 0; r < low.rows; ++r)
    for (int c = 0; c < n; ++c) {
      Rational acc = 0;
      for (int j = 0; j < n / 2; ++j) {
        acc += inv[c][j] * low.at(r, j);
        acc += inv[c][n / 2 + j] * high.at(r, j);
      }
      out.at(r, c) = acc;
    }
  return out;
}

RGrid unstage_rows(const RGrid& low, const RGrid& high, const FilterPair& f) {
  const int n = low.rows * 2;
  auto inv = invert_matrix(analysis_matrix(n, f));
  RGrid out(n, low.cols);
  for (int c = 0; c < low.cols; ++c)
    for (int r = 0; r < n; ++r) {
      Rational acc = 0;
      for (int j = 0; j < n / 2; ++j) {
        acc += inv[r][j] * low.at(j, c);
        acc += inv[r][n / 2 + j] * high.at(j, c);
      }
      out.at(r, c) = acc;
    }
  return out;
}

RGrid synthesize(const ClearPyramid& pyr, const FilterPair& f) {
  if (static_cast<int>(pyr.details.size()) != pyr.levels)
    throw GeometryError("incomplete band set");
  RGrid approx = to_rational(pyr.approx.grid);
  for (int d = pyr.levels; d >= 1; --d) {
    const auto& lvl = pyr.details[d - 1];
    const auto& hg = lvl[0].grid;
    const auto& gh = lvl[1].grid;
    const auto& gg = lvl[2].grid;
    if (hg.rows != approx.rows || hg.cols != approx.cols || gh.rows != approx.rows ||
        gg.rows != approx.rows || gh.cols != approx.cols || gg.cols != approx.cols)
      throw GeometryError("incomplete band set");
    RGrid mid_low = unstage_cols(approx, to_rational(hg), f);
    RGrid mid_high = unstage_cols(to_rational(gh), to_rational(gg), f);
    approx = unstage_rows(mid_low, mid_high, f);
  }
  return approx;
}

}  // namespace

Grid<Bigint> idwt2_clear(const ClearPyramid& pyr, const FilterPair& f) {
  RGrid r = synthesize(pyr, f);
  Grid<Bigint> out(r.rows, r.cols);
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    r.cells[i].canonicalize();
    if (r.cells[i].get_den() != 1)
      throw GeometryError("band set has no integer preimage");
    out.cells[i] = r.cells[i].get_num();
  }
  return out;
}

Grid<Bigint> idwt2_clear_rounded(const ClearPyramid& pyr, const FilterPair& f) {
  RGrid r = synthesize(pyr, f);
  Grid<Bigint> out(r.rows, r.cols);
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    r.cells[i].canonicalize();
    Bigint num = r.cells[i].get_num(), den = r.cells[i].get_den();
    // Round half away from zero.
    Bigint twice = 2 * abs(num) + den;
    Bigint mag = twice / (2 * den);
    out.cells[i] = sgn(num) < 0 ? Bigint(-mag) : mag;
  }
  return out;
}

ValueRange band_range(const FilterPair& f, int level, BandTag band,
                      const Bigint& pixel_lo, const Bigint& pixel_hi) {
  validate_filters(f);
  if (level < 0 || (level == 0 && band != BandTag::HH))
    throw GeometryError("level 0 has only the raw approximation band");
  auto apply = [](const ValueRange& in, const std::vector<long>& taps) {
    Bigint lo = 0, hi = 0;
    for (long t : taps) {
      Bigint a = t * in.lo, b = t * in.hi;
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    return ValueRange{lo, hi};
  };
  ValueRange r{pixel_lo, pixel_hi};
  for (int d = 1; d < level; ++d) {
    r = apply(r, f.low);
    r = apply(r, f.low);
  }
  if (level >= 1) {
    const auto& wr = (band == BandTag::GH || band == BandTag::GG) ? f.high : f.low;
    const auto& wc = (band == BandTag::HG || band == BandTag::GG) ? f.high : f.low;
    r = apply(r, wr);
    r = apply(r, wc);
  }
  return r;
}

Bigint band_gain(const FilterPair& f, int level, BandTag band) {
  validate_filters(f);
  if (level < 0 || (level == 0 && band != BandTag::HH))
    throw GeometryError("level 0 has only the raw approximation band");
  Bigint gain = 1;
  for (int d = 1; d < level; ++d) gain *= Bigint(sum_abs(f.low)) * sum_abs(f.low);
  if (level >= 1) {
    long wr = (band == BandTag::GH || band == BandTag::GG) ? sum_abs(f.high)
                                                           : sum_abs(f.low);
    long wc = (band == BandTag::HG || band == BandTag::GG) ? sum_abs(f.high)
                                                           : sum_abs(f.low);
    gain *= Bigint(wr) * wc;
  }
  return gain;
}

}  // namespace socbir
