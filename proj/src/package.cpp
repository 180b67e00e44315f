// SPDX-License-Identifier: Apache-2.0
#include "socbir/package.hpp"

#include <algorithm>
#include <sstream>

#include "socbir/parallel.hpp"

namespace socbir {

const char* mode_name(PackageMode m) {
  return m == PackageMode::paper ? "paper" : "compact";
}

PackageMode mode_from_name(const std::string& s) {
  if (s == "paper") return PackageMode::paper;
  if (s == "compact") return PackageMode::compact;
  throw MalformedPackageError("unknown mode " + s);
}

PublicKey UploadPackage::public_key() const {
  return PublicKey{header.kp, header.kp * header.kp, header.key_id};
}

unsigned long long UploadPackage::ciphertext_census() const {
  unsigned long long n = 0;
  for (const auto& b : bands) {
    n += b.centers.size();
    for (const auto& v : b.mapping) n += v.size();
    for (const auto& v : b.reference) n += v.size();
  }
  return n;
}

unsigned long long payload_count(long rows, long cols, int classes,
                                 int noisy_classes, int levels, PackageMode mode) {
  if (rows < 1 || cols < 1) throw GeometryError("empty image");
  if (levels < 0) throw GeometryError("negative level count");
  if (rows % (1L << levels) != 0 || cols % (1L << levels) != 0)
    throw GeometryError("dimensions are not dyadic-compatible with the depth");
  if (classes < 1) throw Error(ErrorKind::usage, "need at least one class");
  if (noisy_classes < 2 * classes)
    throw Error(ErrorKind::usage, "noisy class count must be at least 2K");

  const Bigint mn = Bigint(rows) * cols;
  if (mode == PackageMode::compact) {
    Bigint total = mn * (1 + 2 * Bigint(classes) * noisy_classes);
    return total.get_ui();
  }
  // Bracketed form: detail bands at each level plus the deepest approximation.
  Bigint bracket = 0;
  for (int i = 1; i <= levels; ++i)
    bracket += 3 * (Bigint(rows) >> i) * (Bigint(cols) >> i);
  bracket += (Bigint(rows) >> levels) * (Bigint(cols) >> levels);
  Bigint total = mn * noisy_classes + 2 * Bigint(noisy_classes) * classes * bracket;
  Bigint product_form = mn * noisy_classes * (2 * Bigint(classes) + 1);
  if (total != product_form)
    throw Error(ErrorKind::usage, "payload accounting identity violated");
  return total.get_ui();
}

namespace {

void validate_image(const Grid<Bigint>& image, int levels) {
  if (image.rows < 1 || image.cols < 1) throw GeometryError("empty image");
  if (image.rows % (1 << levels) != 0 || image.cols % (1 << levels) != 0)
    throw GeometryError("dimensions are not dyadic-compatible with the depth");
  for (const auto& p : image.cells)
    if (sgn(p) < 0 || p > 255)
      throw DynamicBoundError("pixels must lie in [0, 255]");
}

void validate_image_id(const std::string& id) {
  if (id.empty()) throw MalformedPackageError("empty image id");
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) throw MalformedPackageError("image id has characters outside [A-Za-z0-9._-]");
  }
}

// Largest plaintext magnitude the package will ever ask the key to carry,
// including comparison results the server derives.
Bigint required_bound(const SignatureLayout& layout,
                      const std::vector<const Subband*>& bands, PackageMode mode,
                      long ref_cap) {
  Bigint r = 255;
  auto grow = [&r](const Bigint& v) {
    if (v > r) r = v;
  };
  for (std::size_t i = 0; i < layout.bands.size(); ++i) {
    const BandLayout& b = layout.bands[i];
    Bigint coeff_mag = abs(b.c_min) > abs(b.c_max) ? abs(b.c_min) : abs(b.c_max);
    Bigint band_size = Bigint(bands[i]->grid.rows) * bands[i]->grid.cols;
    grow(Bigint(ref_cap) * band_size + band_size);
    if (mode == PackageMode::paper) {
      grow(2 * coeff_mag);  // server doubles the coefficient
      grow(abs(b.center_doubled(0)));
      grow(b.dummy_doubled(b.noisy_classes - 1));
      // Worst comparison output: dummy vs the far end of the dynamic.
      grow(2 * (b.c_max - b.c_min + b.classes * b.delta + b.noisy_classes + 1));
    } else {
      grow(abs(b.c_min));
      grow(abs(b.c_min - b.noise_span() * b.delta));
      grow(coeff_mag);
      grow(b.c_max - b.c_min + b.noise_span() * b.delta);
    }
  }
  return r;
}

}  // namespace

BuiltPackage build_package(const std::string& image_id, const Grid<Bigint>& image,
                           const Keypair& keys, const SignatureLayout& layout,
                           PackageMode mode, std::uint64_t reference_seed, Rng& rng) {
  validate_image_id(image_id);
  validate_image(image, layout.levels);
  const PublicKey& pk = keys.pub;

  ClearPyramid pyr = dwt2_clear(image, layout.filters, layout.levels);
  auto bands = pyr.signature_bands();
  if (bands.size() != layout.bands.size())
    throw Error(ErrorKind::usage, "layout depth does not match the image pyramid");

  for (std::size_t i = 0; i < bands.size(); ++i)
    for (const auto& c : bands[i]->grid.cells)
      if (c < layout.bands[i].c_min || c > layout.bands[i].c_max)
        throw DynamicBoundError("coefficient outside the layout dynamic of band " +
                                std::string(band_name(layout.bands[i].band)));

  if (required_bound(layout, bands, mode, layout.ref_cap) > pk.signed_bound())
    throw PlaintextOverflowError("key too small for this layout's dynamic");

  // All sequential draws happen up front so thread count cannot affect the
  // package bytes.
  Grid<TrackedRandom> pixel_randoms(image.rows, image.cols);
  for (auto& r : pixel_randoms.cells) r = draw_random(rng, pk);

  std::vector<Grid<int>> noise;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    Grid<int> nu(bands[i]->grid.rows, bands[i]->grid.cols);
    for (auto& v : nu.cells)
      v = static_cast<int>(rng.below(layout.bands[i].noise_span() + 1));
    noise.push_back(std::move(nu));
  }

  UploadPackage pkg;
  pkg.header = PackageHeader{image_id, image.rows,         image.cols, mode,
                             pk.modulus, pk.key_id, layout,     0};

  pkg.pixels = Grid<Ciphertext>(image.rows, image.cols);
  parallel_for(static_cast<long long>(image.size()), [&](long long i) {
    pkg.pixels.cells[i] = encrypt(image.cells[i], pixel_randoms.cells[i], pk);
  });

  RandPyramid rand_pyr =
      random_recursion(pixel_randoms, layout.filters, layout.levels, pk);
  auto rand_bands = rand_pyr.signature_bands();

  const int kprime = layout.noisy_classes;
  const int kclasses = layout.classes;
  for (std::size_t bi = 0; bi < bands.size(); ++bi) {
    const BandLayout& bl = layout.bands[bi];
    const Grid<Bigint>& coeffs = bands[bi]->grid;
    const Grid<TrackedRandom>& rands = rand_bands[bi]->grid;
    const Grid<int>& nu = noise[bi];
    const long long n = static_cast<long long>(coeffs.size());

    BandBlock block;
    block.level = bl.level;
    block.band = bl.band;

    if (mode == PackageMode::paper) {
      block.centers.resize(n * kprime);
      parallel_for(n, [&](long long ci) {
        TrackedRandom r2 = random_pow(rands.cells[ci], 2, pk);
        const int shift = nu.cells[ci];
        for (int l = 0; l < kprime; ++l) {
          Bigint value = (l >= shift && l - shift < kclasses)
                             ? bl.center_doubled(l - shift)
                             : bl.dummy_doubled(l);
          block.centers[ci * kprime + l] = encrypt(value, r2, pk);
        }
      });
    } else {
      block.centers.resize(n);
      parallel_for(n, [&](long long ci) {
        Bigint theta = bl.c_min - nu.cells[ci] * bl.delta;
        block.centers[ci] = encrypt(theta, rands.cells[ci], pk);
      });
    }

    block.mapping.resize(kclasses);
    block.reference.resize(kclasses);
    for (int k = 0; k < kclasses; ++k) {
      const long pk_value =
          derive_reference_value(reference_seed, layout, bl.level, bl.band, k);
      auto& mvec = block.mapping[k];
      auto& rvec = block.reference[k];
      mvec.resize(n * kprime);
      rvec.resize(n * kprime);
      const std::uint64_t domain =
          2 + static_cast<std::uint64_t>(bi) * kclasses + k;
      parallel_for(n, [&](long long ci) {
        // Marks where the k-th clear class sits among this coefficient's
        // noisy classes; the server's selector hits it iff the coefficient
        // belongs to class k.
        const int hot = k + nu.cells[ci];
        for (int l = 0; l < kprime; ++l) {
          const std::uint64_t idx = static_cast<std::uint64_t>(ci) * kprime + l;
          TrackedRandom r{rng.unit_at(domain, idx, pk.modulus)};
          mvec[idx] = encrypt(l == hot ? 1 : 0, r, pk);
          rvec[idx] = encrypt(pk_value, r, pk);
        }
      });
    }
    pkg.bands.push_back(std::move(block));
  }

  unsigned long long expected = payload_count(image.rows, image.cols, kclasses,
                                              kprime, layout.levels, mode);
  unsigned long long census = pkg.ciphertext_census();
  if (census != expected)
    throw MalformedPackageError("ciphertext census " + std::to_string(census) +
                                " != declared payload " + std::to_string(expected));
  pkg.header.payload_count = expected;

  ClientSecrets secrets{keys.sec, std::move(pixel_randoms), std::move(noise),
                        reference_seed};
  return BuiltPackage{std::move(pkg), std::move(secrets)};
}

// ---- canonical text format ------------------------------------------------

namespace {

std::string to_shex(const Bigint& v) {
  if (sgn(v) < 0) return "-" + to_hex(-v);
  return to_hex(v);
}

Bigint from_shex(std::string_view s) {
  if (!s.empty() && s[0] == '-') return -from_hex(s.substr(1));
  return from_hex(s);
}

class Writer {
 public:
  void line(const std::string& s) {
    out_ += s;
    out_ += '\n';
  }
  void hexes(const char* tag, const std::vector<Ciphertext>& cts) {
    out_ += tag;
    for (const auto& c : cts) {
      out_ += ' ';
      out_ += to_hex(c.value);
    }
    out_ += '\n';
  }
  std::string finish() {
    std::string sum = fnv1a_hex(out_);
    out_ += "checksum " + sum + "\nend\n";
    return std::move(out_);
  }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::string_view next_line() {
    if (pos_ >= data_.size()) throw MalformedPackageError("truncated input");
    line_start_ = pos_;
    std::size_t nl = data_.find('\n', pos_);
    if (nl == std::string_view::npos) throw MalformedPackageError("missing newline");
    std::string_view line = data_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return line;
  }

  // Splits the next line into whitespace-separated tokens and checks the tag.
  std::vector<std::string_view> tagged(std::string_view tag) {
    auto toks = split(next_line());
    if (toks.empty() || toks[0] != tag)
      throw MalformedPackageError("expected field '" + std::string(tag) + "'");
    toks.erase(toks.begin());
    return toks;
  }

  static std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ') ++j;
      if (j > i) toks.push_back(line.substr(i, j - i));
      i = j;
    }
    return toks;
  }

  std::uint64_t checksum_so_far() const { return fnv1a(data_.substr(0, line_start_)); }
  bool at_end() const { return pos_ >= data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
};

long to_long(std::string_view s) {
  try {
    std::size_t used = 0;
    long v = std::stol(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw MalformedPackageError("bad integer field '" + std::string(s) + "'");
  }
}

std::string taps_csv(const std::vector<long>& taps) {
  std::string s;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(taps[i]);
  }
  return s;
}

std::vector<long> taps_from_csv(std::string_view s) {
  std::vector<long> taps;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string_view::npos) j = s.size();
    taps.push_back(to_long(s.substr(i, j - i)));
    i = j + 1;
    if (j == s.size()) break;
  }
  return taps;
}

void write_header(Writer& w, const PackageHeader& h) {
  const SignatureLayout& ly = h.layout;
  w.line("socbir-package/1");
  w.line("id " + h.image_id);
  w.line("size " + std::to_string(h.rows) + " " + std::to_string(h.cols));
  w.line("mode " + std::string(mode_name(h.mode)));
  w.line("kp " + to_hex(h.kp));
  w.line("filter " + ly.filters.name + " " + std::to_string(ly.filters.scale) +
         " " + taps_csv(ly.filters.low) + " " + taps_csv(ly.filters.high));
  w.line("levels " + std::to_string(ly.levels));
  w.line("classes " + std::to_string(ly.classes) + " " +
         std::to_string(ly.noisy_classes));
  w.line("refcap " + std::to_string(ly.ref_cap));
  w.line("seedid " + ly.seed_id);
  w.line("bands " + std::to_string(ly.bands.size()));
  for (const auto& b : ly.bands)
    w.line("band " + std::to_string(b.level) + " " + band_name(b.band) + " " +
           to_shex(b.c_min) + " " + to_shex(b.delta));
  w.line("fingerprint " + ly.fingerprint());
  w.line("payload " + std::to_string(h.payload_count));
}

PackageHeader read_header(Reader& r) {
  if (r.next_line() != "socbir-package/1")
    throw MalformedPackageError("unknown format version");
  PackageHeader h;
  auto id = r.tagged("id");
  if (id.size() != 1) throw MalformedPackageError("bad id line");
  h.image_id = std::string(id[0]);
  validate_image_id(h.image_id);

  auto size = r.tagged("size");
  if (size.size() != 2) throw MalformedPackageError("bad size line");
  h.rows = static_cast<int>(to_long(size[0]));
  h.cols = static_cast<int>(to_long(size[1]));
  if (h.rows < 1 || h.cols < 1) throw MalformedPackageError("bad dimensions");

  auto mode = r.tagged("mode");
  if (mode.size() != 1) throw MalformedPackageError("bad mode line");
  h.mode = mode_from_name(std::string(mode[0]));

  auto kp = r.tagged("kp");
  if (kp.size() != 1) throw MalformedPackageError("bad kp line");
  h.kp = from_hex(kp[0]);
  h.key_id = to_hex(h.kp);

  SignatureLayout& ly = h.layout;
  auto filt = r.tagged("filter");
  if (filt.size() != 4) throw MalformedPackageError("bad filter line");
  ly.filters.name = std::string(filt[0]);
  ly.filters.scale = to_long(filt[1]);
  ly.filters.low = taps_from_csv(filt[2]);
  ly.filters.high = taps_from_csv(filt[3]);

  auto levels = r.tagged("levels");
  if (levels.size() != 1) throw MalformedPackageError("bad levels line");
  ly.levels = static_cast<int>(to_long(levels[0]));

  auto classes = r.tagged("classes");
  if (classes.size() != 2) throw MalformedPackageError("bad classes line");
  ly.classes = static_cast<int>(to_long(classes[0]));
  ly.noisy_classes = static_cast<int>(to_long(classes[1]));

  auto cap = r.tagged("refcap");
  if (cap.size() != 1) throw MalformedPackageError("bad refcap line");
  ly.ref_cap = to_long(cap[0]);

  auto seed = r.tagged("seedid");
  if (seed.size() != 1) throw MalformedPackageError("bad seedid line");
  ly.seed_id = std::string(seed[0]);

  auto bands = r.tagged("bands");
  if (bands.size() != 1) throw MalformedPackageError("bad bands line");
  long nbands = to_long(bands[0]);
  auto keys = signature_band_keys(ly.levels);
  if (nbands != static_cast<long>(keys.size()))
    throw MalformedPackageError("band count does not match the depth");
  for (long i = 0; i < nbands; ++i) {
    auto b = r.tagged("band");
    if (b.size() != 4) throw MalformedPackageError("bad band line");
    BandLayout bl;
    bl.level = static_cast<int>(to_long(b[0]));
    bl.band = band_from_name(std::string(b[1]));
    if (bl.level != keys[i].level || bl.band != keys[i].tag)
      throw MalformedPackageError("bands out of canonical order");
    bl.c_min = from_shex(b[2]);
    bl.delta = from_shex(b[3]);
    if (bl.delta < 1) throw MalformedPackageError("bad class width");
    bl.classes = ly.classes;
    bl.noisy_classes = ly.noisy_classes;
    bl.c_max = bl.c_min + ly.classes * bl.delta - 1;
    ly.bands.push_back(std::move(bl));
  }

  auto fpr = r.tagged("fingerprint");
  if (fpr.size() != 1 || std::string(fpr[0]) != ly.fingerprint())
    throw MalformedPackageError("fingerprint does not match the header fields");

  auto payload = r.tagged("payload");
  if (payload.size() != 1) throw MalformedPackageError("bad payload line");
  h.payload_count = static_cast<unsigned long long>(to_long(payload[0]));
  return h;
}

std::vector<Ciphertext> read_cts(Reader& r, std::string_view tag, std::size_t n,
                                 const std::string& key_id) {
  auto toks = r.tagged(tag);
  if (toks.size() != n)
    throw MalformedPackageError(std::string(tag) + " block has wrong length");
  std::vector<Ciphertext> cts(n);
  for (std::size_t i = 0; i < n; ++i) cts[i] = Ciphertext{from_hex(toks[i]), key_id};
  return cts;
}

void check_trailer(Reader& r) {
  auto sum = r.tagged("checksum");
  std::uint64_t expect = r.checksum_so_far();  // bytes before the checksum line
  if (sum.size() != 1) throw MalformedPackageError("bad checksum line");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(expect));
  if (std::string(sum[0]) != buf)
    throw MalformedPackageError("checksum mismatch; input corrupted");
  if (r.next_line() != "end" || !r.at_end())
    throw MalformedPackageError("trailing data after end marker");
}

}  // namespace

std::string serialize(const UploadPackage& pkg) {
  Writer w;
  write_header(w, pkg.header);
  w.hexes("pixels", pkg.pixels.cells);
  for (const auto& b : pkg.bands) {
    w.line("bandblock " + std::to_string(b.level) + " " + band_name(b.band));
    w.hexes(pkg.header.mode == PackageMode::paper ? "centers" : "thresholds",
            b.centers);
    for (std::size_t k = 0; k < b.mapping.size(); ++k)
      w.hexes(("mapping " + std::to_string(k)).c_str(), b.mapping[k]);
    for (std::size_t k = 0; k < b.reference.size(); ++k)
      w.hexes(("refvec " + std::to_string(k)).c_str(), b.reference[k]);
  }
  return w.finish();
}

UploadPackage deserialize(std::string_view bytes) {
  if (bytes.empty()) throw MalformedPackageError("empty input");
  Reader r(bytes);
  UploadPackage pkg;
  pkg.header = read_header(r);
  const SignatureLayout& ly = pkg.header.layout;
  const std::string& key_id = pkg.header.key_id;

  auto pix = read_cts(r, "pixels",
                      static_cast<std::size_t>(pkg.header.rows) * pkg.header.cols,
                      key_id);
  pkg.pixels = Grid<Ciphertext>(pkg.header.rows, pkg.header.cols);
  pkg.pixels.cells = std::move(pix);

  int rows = pkg.header.rows, cols = pkg.header.cols;
  for (const auto& bl : ly.bands) {
    int br = rows >> (bl.level > 0 ? bl.level : 0);
    int bc = cols >> (bl.level > 0 ? bl.level : 0);
    const std::size_t n = static_cast<std::size_t>(br) * bc;
    auto head = r.tagged("bandblock");
    if (head.size() != 2 || to_long(head[0]) != bl.level ||
        std::string(head[1]) != band_name(bl.band))
      throw MalformedPackageError("band blocks out of order");
    BandBlock block;
    block.level = bl.level;
    block.band = bl.band;
    if (pkg.header.mode == PackageMode::paper)
      block.centers = read_cts(r, "centers", n * ly.noisy_classes, key_id);
    else
      block.centers = read_cts(r, "thresholds", n, key_id);
    for (int k = 0; k < ly.classes; ++k) {
      auto toks = r.tagged("mapping");
      if (toks.empty() || to_long(toks[0]) != k)
        throw MalformedPackageError("mapping blocks out of order");
      if (toks.size() != 1 + n * ly.noisy_classes)
        throw MalformedPackageError("mapping block has wrong length");
      std::vector<Ciphertext> cts(n * ly.noisy_classes);
      for (std::size_t i = 0; i < cts.size(); ++i)
        cts[i] = Ciphertext{from_hex(toks[1 + i]), key_id};
      block.mapping.push_back(std::move(cts));
    }
    for (int k = 0; k < ly.classes; ++k) {
      auto toks = r.tagged("refvec");
      if (toks.empty() || to_long(toks[0]) != k)
        throw MalformedPackageError("reference blocks out of order");
      if (toks.size() != 1 + n * ly.noisy_classes)
        throw MalformedPackageError("reference block has wrong length");
      std::vector<Ciphertext> cts(n * ly.noisy_classes);
      for (std::size_t i = 0; i < cts.size(); ++i)
        cts[i] = Ciphertext{from_hex(toks[1 + i]), key_id};
      block.reference.push_back(std::move(cts));
    }
    pkg.bands.push_back(std::move(block));
  }

  check_trailer(r);
  if (pkg.ciphertext_census() != pkg.header.payload_count)
    throw MalformedPackageError("census does not match the declared payload");
  return pkg;
}

std::string serialize_signature(const EncryptedSignature& sig) {
  Writer w;
  w.line("socbir-signature/1");
  w.line("fingerprint " + sig.fingerprint);
  w.line("size " + std::to_string(sig.rows) + " " + std::to_string(sig.cols));
  w.line("kp " + to_hex(sig.pk.modulus));
  w.line("bands " + std::to_string(sig.bands.size()));
  for (const auto& b : sig.bands) {
    w.line("sigband " + std::to_string(b.level) + " " + band_name(b.band));
    w.hexes("cards", b.cardinalities);
    w.hexes("refsums", b.reference_sums);
  }
  return w.finish();
}

EncryptedSignature deserialize_signature(std::string_view bytes) {
  if (bytes.empty()) throw MalformedPackageError("empty input");
  Reader r(bytes);
  if (r.next_line() != "socbir-signature/1")
    throw MalformedPackageError("unknown format version");
  EncryptedSignature sig;
  auto fpr = r.tagged("fingerprint");
  if (fpr.size() != 1) throw MalformedPackageError("bad fingerprint line");
  sig.fingerprint = std::string(fpr[0]);
  auto size = r.tagged("size");
  if (size.size() != 2) throw MalformedPackageError("bad size line");
  sig.rows = static_cast<int>(to_long(size[0]));
  sig.cols = static_cast<int>(to_long(size[1]));
  auto kp = r.tagged("kp");
  if (kp.size() != 1) throw MalformedPackageError("bad kp line");
  Bigint modulus = from_hex(kp[0]);
  sig.pk = PublicKey{modulus, modulus * modulus, to_hex(modulus)};
  auto bands = r.tagged("bands");
  if (bands.size() != 1) throw MalformedPackageError("bad bands line");
  long nbands = to_long(bands[0]);
  for (long i = 0; i < nbands; ++i) {
    auto head = r.tagged("sigband");
    if (head.size() != 2) throw MalformedPackageError("bad sigband line");
    EncryptedHistogram h;
    h.level = static_cast<int>(to_long(head[0]));
    h.band = band_from_name(std::string(head[1]));
    auto cards = r.tagged("cards");
    auto refs = r.tagged("refsums");
    if (cards.size() != refs.size() || cards.empty())
      throw MalformedPackageError("class counts differ between cards and refsums");
    for (auto t : cards) h.cardinalities.push_back(Ciphertext{from_hex(t), sig.pk.key_id});
    for (auto t : refs) h.reference_sums.push_back(Ciphertext{from_hex(t), sig.pk.key_id});
    sig.bands.push_back(std::move(h));
  }
  check_trailer(r);
  return sig;
}

}  // namespace socbir
