// SPDX-License-Identifier: Apache-2.0
#include "socbir/common.hpp"

namespace socbir {

std::string to_hex(const Bigint& v) {
  if (sgn(v) < 0) throw MalformedPackageError("negative value in hex field");
  return v.get_str(16);
}

Bigint from_hex(std::string_view s) {
  if (s.empty()) throw MalformedPackageError("empty hex field");
  if (s.size() > 1 && s[0] == '0')
    throw MalformedPackageError("leading zero in hex field");
  for (char c : s) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) throw MalformedPackageError("invalid hex digit");
  }
  Bigint v;
  if (v.set_str(std::string(s), 16) != 0)
    throw MalformedPackageError("unparsable hex field");
  return v;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return std::string(buf);
}

}  // namespace socbir
