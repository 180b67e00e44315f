// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "socbir/counters.hpp"
#include "socbir/package.hpp"

namespace socbir {

struct StoreEntry {
  std::string id;
  std::string label;
  std::int64_t ingested_at = 0;  // unix seconds
};

struct QueryResult {
  std::string id;
  unsigned long long distance = 0;
  std::string label;
  int rank = 0;
};

struct QueryResponse {
  std::vector<QueryResult> results;
  ops::Counters cost;  // modular work and comparisons spent on this query
};

// The cloud role. Owns a directory store:
//   <dir>/<id>/package.socbir
//   <dir>/<id>/signature.socbir-sig
//   <dir>/index.json
// Signatures are computed eagerly at ingest and cached in memory and on
// disk. The service never sees a private key, a noise grid or a reference
// value; its only inputs are packages and their embedded public keys.
class Service {
 public:
  explicit Service(std::filesystem::path store_dir);

  // Runs the offline pipeline on a package with zero client interaction:
  // encrypted DWT -> noisy classes -> de-noised cardinalities and reference
  // sums per band.
  static EncryptedSignature compute_signature(const UploadPackage& pkg);

  std::string ingest(const UploadPackage& pkg, const std::string& label);
  QueryResponse query(const UploadPackage& pkg, int k) const;

  std::string fingerprint() const;
  std::vector<StoreEntry> entries() const;
  std::size_t size() const;
  const EncryptedSignature* find_signature(const std::string& id) const;

 private:
  struct Loaded {
    StoreEntry meta;
    EncryptedSignature sig;
  };
  void persist_index() const;

  std::filesystem::path dir_;
  std::string fingerprint_;  // adopted from the first package
  std::vector<Loaded> entries_;
  mutable std::shared_mutex mu_;
};

// Length-prefixed request/response protocol over a TCP stream
// (docs/protocol.md). One request and one response per connection.
class WireServer {
 public:
  WireServer(Service& service, std::uint16_t port);  // port 0 -> ephemeral
  ~WireServer();

  std::uint16_t port() const { return port_; }
  std::uint64_t requests_received() const;
  std::uint64_t responses_sent() const;
  void stop();

 private:
  void accept_loop();
  void handle(int fd);

  Service& service_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::thread acceptor_;
  std::vector<std::thread> workers_;
  std::mutex workers_mu_;
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> responses_{0};
  std::atomic<bool> stopping_{false};
};

// Client side; each call opens one connection and performs exactly one
// request/response exchange. Returns the response JSON text.
std::string wire_ingest(const std::string& host, std::uint16_t port,
                        const std::string& package_bytes, const std::string& label);
std::string wire_query(const std::string& host, std::uint16_t port,
                       const std::string& package_bytes, int k);

}  // namespace socbir
