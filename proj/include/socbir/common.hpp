// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace socbir {

using Bigint = mpz_class;

// Coarse failure categories, mapped to CLI exit codes.
enum class ErrorKind { usage, crypto, package, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define SOCBIR_ERROR(Name, Kind)                            \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& what)                  \
        : Error(ErrorKind::Kind, std::string(#Name ": ") + what) {} \
  }

SOCBIR_ERROR(KeygenError, crypto);
SOCBIR_ERROR(PlaintextOverflowError, crypto);
SOCBIR_ERROR(InvalidRandomError, crypto);
SOCBIR_ERROR(MalformedCiphertextError, crypto);
SOCBIR_ERROR(KeyMismatchError, crypto);
SOCBIR_ERROR(RandomMismatchError, crypto);
SOCBIR_ERROR(ComparisonRangeError, crypto);
SOCBIR_ERROR(GeometryError, usage);
SOCBIR_ERROR(DegenerateFilterError, usage);
SOCBIR_ERROR(DynamicBoundError, package);
SOCBIR_ERROR(MalformedPackageError, package);
SOCBIR_ERROR(FingerprintMismatchError, package);
SOCBIR_ERROR(StoreError, io);
SOCBIR_ERROR(ProtocolError, io);

#undef SOCBIR_ERROR

// Big integers travel as lowercase hex without leading zeros ("0" for zero)
// in every file and wire format.
std::string to_hex(const Bigint& v);
Bigint from_hex(std::string_view s);

// FNV-1a, used for spec fingerprints, key ids and file checksums.
// Not a cryptographic hash; nothing secret is derived from it.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string fnv1a_hex(std::string_view bytes);

}  // namespace socbir
