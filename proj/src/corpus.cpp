// SPDX-License-Identifier: Apache-2.0
#include "socbir/corpus.hpp"

#include <fstream>

#include "socbir/rng.hpp"

namespace socbir {

namespace {

// value in {-1, +1} per texture family; all integer arithmetic so corpora
// are identical across platforms.
int pattern(int family, int x, int y, int phase) {
  switch (family % 5) {
    case 0: return (x + phase) % 2 == 0 ? 1 : -1;                // fine rows
    case 1: return (y + phase) % 2 == 0 ? 1 : -1;                // fine columns
    case 2: return (((x + phase) / 2 + (y + phase) / 2) % 2) == 0 ? 1 : -1;
    case 3: return ((x + y + phase) / 2) % 2 == 0 ? 1 : -1;      // diagonal
    default: return ((x + phase) / 4) % 2 == 0 ? 1 : -1;         // coarse rows
  }
}

Grid<Bigint> texture_image(const CorpusParams& p, int label, Rng& rng) {
  Grid<Bigint> img(p.size, p.size);
  const int phase = static_cast<int>(rng.below(8));
  for (int x = 0; x < p.size; ++x)
    for (int y = 0; y < p.size; ++y) {
      int jitter = p.jitter > 0
                       ? static_cast<int>(rng.below(2 * p.jitter + 1)) - p.jitter
                       : 0;
      int v = p.base + p.amplitude * pattern(label, x, y, phase) + jitter;
      img.at(x, y) = std::min(255, std::max(0, v));
    }
  return img;
}

}  // namespace

SyntheticCorpus make_corpus(const CorpusParams& params, std::uint64_t seed) {
  if (params.num_classes < 2)
    throw Error(ErrorKind::usage, "corpus needs at least two classes");
  if (params.size < 4 || params.size % 4 != 0)
    throw Error(ErrorKind::usage, "corpus image size must be a multiple of 4");
  SyntheticCorpus corpus;
  corpus.params = params;
  corpus.seed = seed;
  Rng rng(seed);
  for (int cls = 0; cls < params.num_classes; ++cls)
    for (int i = 0; i < params.db_per_class; ++i) {
      std::string id = "db-c" + std::to_string(cls) + "-" + std::to_string(i);
      corpus.database.push_back({id, cls, texture_image(params, cls, rng)});
    }
  for (int cls = 0; cls < params.num_classes; ++cls)
    for (int i = 0; i < params.query_per_class; ++i) {
      std::string id = "q-c" + std::to_string(cls) + "-" + std::to_string(i);
      corpus.queries.push_back({id, cls, texture_image(params, cls, rng)});
    }
  return corpus;
}

Grid<Bigint> face_image(int size) {
  if (size < 16) throw Error(ErrorKind::usage, "face image needs size >= 16");
  Grid<Bigint> img(size, size);
  const double cx = size / 2.0, cy = size / 2.0;
  const double rx = 0.34 * size, ry = 0.42 * size;
  for (int x = 0; x < size; ++x)
    for (int y = 0; y < size; ++y) {
      int v = 48 + (x * 40) / size;  // background gradient
      double dx = (y - cx) / rx, dy = (x - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) v = 205;  // head
      auto blob = [&](double bx, double by, double r, int dark) {
        double ex = (y - bx), ey = (x - by);
        if (ex * ex + ey * ey <= r * r) v = dark;
      };
      blob(cx - 0.14 * size, cy - 0.12 * size, 0.06 * size, 60);  // eyes
      blob(cx + 0.14 * size, cy - 0.12 * size, 0.06 * size, 60);
      if (std::abs(x - (cy + 0.18 * size)) < 0.035 * size &&
          std::abs(y - cx) < 0.16 * size)
        v = 70;  // mouth
      img.at(x, y) = v;
    }
  return img;
}

std::vector<ValueRange> measured_band_ranges(
    const std::vector<const Grid<Bigint>*>& images, const FilterPair& f,
    int levels) {
  if (images.empty()) throw Error(ErrorKind::usage, "no images to measure");
  std::vector<ValueRange> ranges;
  bool first = true;
  for (const Grid<Bigint>* img : images) {
    ClearPyramid pyr = dwt2_clear(*img, f, levels);
    auto bands = pyr.signature_bands();
    if (first) {
      for (const Subband* b : bands)
        ranges.push_back({b->grid.cells.front(), b->grid.cells.front()});
      first = false;
    }
    for (std::size_t i = 0; i < bands.size(); ++i)
      for (const auto& c : bands[i]->grid.cells) {
        if (c < ranges[i].lo) ranges[i].lo = c;
        if (c > ranges[i].hi) ranges[i].hi = c;
      }
  }
  return ranges;
}

std::vector<ValueRange> corpus_band_ranges(const SyntheticCorpus& corpus,
                                           const FilterPair& f, int levels) {
  std::vector<const Grid<Bigint>*> all;
  for (const auto& e : corpus.database) all.push_back(&e.image);
  for (const auto& e : corpus.queries) all.push_back(&e.image);
  return measured_band_ranges(all, f, levels);
}

void write_pgm(const std::filesystem::path& path, const Grid<Bigint>& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError("cannot write " + path.string());
  out << "P5\n" << image.cols << " " << image.rows << "\n255\n";
  for (const auto& p : image.cells) {
    long v = p.get_si();
    v = std::min(255L, std::max(0L, v));
    out.put(static_cast<char>(v));
  }
  if (!out) throw StoreError("short write to " + path.string());
}

Grid<Bigint> read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5") throw StoreError("not a binary PGM: " + path.string());
  // Skip whitespace and '#' comment lines between header tokens.
  auto next_int = [&]() {
    for (;;) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v;
    in >> v;
    return v;
  };
  long cols = next_int(), rows = next_int(), maxval = next_int();
  if (cols < 1 || rows < 1 || maxval != 255)
    throw StoreError("unsupported PGM header in " + path.string());
  in.get();  // single whitespace before raster
  Grid<Bigint> img(static_cast<int>(rows), static_cast<int>(cols));
  for (auto& p : img.cells) {
    int c = in.get();
    if (c == EOF) throw StoreError("truncated PGM " + path.string());
    p = c;
  }
  return img;
}

}  // namespace socbir
