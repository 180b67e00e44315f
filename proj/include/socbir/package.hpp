// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "socbir/histogram.hpp"
#include "socbir/signature.hpp"

namespace socbir {

enum class PackageMode { paper, compact };
const char* mode_name(PackageMode m);
PackageMode mode_from_name(const std::string& s);

struct PackageHeader {
  std::string image_id;
  int rows = 0, cols = 0;
  PackageMode mode = PackageMode::paper;
  Bigint kp;
  std::string key_id;
  SignatureLayout layout;
  unsigned long long payload_count = 0;  // ancillary ciphertexts, pixels excluded
};

// Everything the server needs for one signature band, coefficient-major and
// row-major within the band.
struct BandBlock {
  int level = 0;
  BandTag band = BandTag::HH;
  // Paper mode: N*K' doubled noisy centers (K' contiguous per coefficient).
  // Compact mode: N thresholds.
  std::vector<Ciphertext> centers;
  // K blocks of N*K' each: mapping vectors and their random-matched
  // reference vectors.
  std::vector<std::vector<Ciphertext>> mapping;
  std::vector<std::vector<Ciphertext>> reference;
};

struct UploadPackage {
  PackageHeader header;
  Grid<Ciphertext> pixels;
  std::vector<BandBlock> bands;

  PublicKey public_key() const;
  unsigned long long ciphertext_census() const;  // ancillary only
};

// Stays on the client. Never serialized into a package; the schema audit
// test enforces that.
struct ClientSecrets {
  PrivateKey sec;
  Grid<TrackedRandom> pixel_randoms;
  std::vector<Grid<int>> noise;  // per signature band, shifts in [0, K'-K]
  std::uint64_t reference_seed = 0;
};

struct BuiltPackage {
  UploadPackage package;
  ClientSecrets secrets;
};

// Full client-side build: local clear DWT, random recursion, pixel
// encryption, center blocks under coefficient-matched randoms, mapping and
// reference vectors. The result is self-contained for the server.
BuiltPackage build_package(const std::string& image_id, const Grid<Bigint>& image,
                           const Keypair& keys, const SignatureLayout& layout,
                           PackageMode mode, std::uint64_t reference_seed, Rng& rng);

// Declared ancillary ciphertext count. Paper mode evaluates both the
// bracketed and the product form of the dyadic accounting identity
// m*n*K' + 2*K'*K*[3*sum mn/4^i + mn/4^d] = m*n*K'*(2K+1) and insists they
// agree; compact mode counts m*n*(1 + 2*K*K').
unsigned long long payload_count(long rows, long cols, int classes,
                                 int noisy_classes, int levels, PackageMode mode);

// Canonical text format (docs/format.md): fixed field order, big integers
// as lowercase hex, FNV-1a checksum line, bit-exact across platforms.
std::string serialize(const UploadPackage& pkg);
UploadPackage deserialize(std::string_view bytes);

std::string serialize_signature(const EncryptedSignature& sig);
EncryptedSignature deserialize_signature(std::string_view bytes);

}  // namespace socbir
