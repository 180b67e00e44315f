// SPDX-License-Identifier: Apache-2.0
#include "socbir/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "socbir/parallel.hpp"

namespace socbir {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- signature computation -------------------------------------------------

EncryptedSignature Service::compute_signature(const UploadPackage& pkg) {
  const PublicKey pk = pkg.public_key();
  const SignatureLayout& ly = pkg.header.layout;

  EncPyramid pyr = dwt2_encrypted(pkg.pixels, ly.filters, ly.levels, pk);
  auto bands = pyr.signature_bands();
  if (bands.size() != pkg.bands.size())
    throw MalformedPackageError("package band blocks do not match the depth");

  EncryptedSignature sig;
  sig.fingerprint = ly.fingerprint();
  sig.rows = pkg.header.rows;
  sig.cols = pkg.header.cols;
  sig.pk = pk;

  for (std::size_t bi = 0; bi < bands.size(); ++bi) {
    const BandLayout& bl = ly.bands[bi];
    const Grid<Ciphertext>& coeffs = bands[bi]->grid;
    const BandBlock& block = pkg.bands[bi];
    const long long n = static_cast<long long>(coeffs.size());
    const int kprime = bl.noisy_classes;

    std::vector<int> selectors(n);
    if (pkg.header.mode == PackageMode::paper) {
      if (block.centers.size() != static_cast<std::size_t>(n) * kprime)
        throw MalformedPackageError("center block has wrong length");
      std::span<const Ciphertext> centers(block.centers);
      parallel_for(n, [&](long long ci) {
        selectors[ci] = noisy_class_paper_mode(
            coeffs.cells[ci], centers.subspan(ci * kprime, kprime), bl, pk);
      });
    } else {
      if (block.centers.size() != static_cast<std::size_t>(n))
        throw MalformedPackageError("threshold block has wrong length");
      parallel_for(n, [&](long long ci) {
        selectors[ci] =
            noisy_class_compact_mode(coeffs.cells[ci], block.centers[ci], bl, pk);
      });
    }

    NoisyHistogram noisy = build_noisy_histogram(selectors, kprime);

    if (static_cast<int>(block.mapping.size()) != bl.classes ||
        static_cast<int>(block.reference.size()) != bl.classes)
      throw MalformedPackageError("vector blocks have wrong class count");
    EncryptedHistogram hist;
    hist.level = bl.level;
    hist.band = bl.band;
    for (int k = 0; k < bl.classes; ++k) {
      hist.cardinalities.push_back(
          secure_cardinality(noisy.selectors, block.mapping[k], kprime, pk));
      hist.reference_sums.push_back(
          reference_sum(noisy.selectors, block.reference[k], kprime, pk));
    }
    sig.bands.push_back(std::move(hist));
  }
  return sig;
}

// ---- directory store --------------------------------------------------------

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

void spill(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw StoreError("short write to " + path.string());
}

}  // namespace

Service::Service(fs::path store_dir) : dir_(std::move(store_dir)) {
  fs::create_directories(dir_);
  fs::path index = dir_ / "index.json";
  if (!fs::exists(index)) return;
  json idx;
  try {
    idx = json::parse(slurp(index));
  } catch (const json::exception& e) {
    throw StoreError("corrupt index.json: " + std::string(e.what()));
  }
  fingerprint_ = idx.value("fingerprint", "");
  for (const auto& e : idx.at("entries")) {
    Loaded l;
    l.meta.id = e.at("id").get<std::string>();
    l.meta.label = e.at("label").get<std::string>();
    l.meta.ingested_at = e.value("ingested_at", std::int64_t{0});
    l.sig = deserialize_signature(
        slurp(dir_ / l.meta.id / "signature.socbir-sig"));
    if (l.sig.fingerprint != fingerprint_)
      throw StoreError("cached signature of " + l.meta.id +
                       " does not match the store fingerprint");
    entries_.push_back(std::move(l));
  }
}

void Service::persist_index() const {
  json idx;
  idx["version"] = 1;
  idx["fingerprint"] = fingerprint_;
  idx["entries"] = json::array();
  for (const auto& e : entries_)
    idx["entries"].push_back({{"id", e.meta.id},
                              {"label", e.meta.label},
                              {"ingested_at", e.meta.ingested_at}});
  spill(dir_ / "index.json", idx.dump(2) + "\n");
}

std::string Service::ingest(const UploadPackage& pkg, const std::string& label) {
  std::unique_lock lock(mu_);
  const std::string fpr = pkg.header.layout.fingerprint();
  if (!entries_.empty() && fpr != fingerprint_)
    throw FingerprintMismatchError("package spec " + fpr +
                                   " does not match store spec " + fingerprint_);
  const std::string& id = pkg.header.image_id;
  for (const auto& e : entries_)
    if (e.meta.id == id) throw StoreError("id conflict: " + id);

  EncryptedSignature sig = compute_signature(pkg);

  fs::create_directories(dir_ / id);
  spill(dir_ / id / "package.socbir", serialize(pkg));
  spill(dir_ / id / "signature.socbir-sig", serialize_signature(sig));

  Loaded l;
  l.meta.id = id;
  l.meta.label = label;
  l.meta.ingested_at = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
  l.sig = std::move(sig);
  entries_.push_back(std::move(l));
  if (entries_.size() == 1) fingerprint_ = fpr;
  persist_index();
  return id;
}

QueryResponse Service::query(const UploadPackage& pkg, int k) const {
  std::shared_lock lock(mu_);
  if (entries_.empty()) throw StoreError("store is empty");
  const std::string fpr = pkg.header.layout.fingerprint();
  if (fpr != fingerprint_)
    throw FingerprintMismatchError("query spec " + fpr +
                                   " does not match store spec " + fingerprint_);
  ops::Counters before = ops::snapshot();
  EncryptedSignature qsig = compute_signature(pkg);
  std::vector<SignatureEntry> db;
  db.reserve(entries_.size());
  for (const auto& e : entries_) db.push_back({e.meta.id, &e.sig});
  std::vector<RankedResult> ranked = rank_top_k(qsig, db, k);
  ops::Counters cost = ops::snapshot() - before;

  QueryResponse resp;
  resp.cost = cost;
  for (const auto& r : ranked) {
    const Loaded* hit = nullptr;
    for (const auto& e : entries_)
      if (e.meta.id == r.id) hit = &e;
    resp.results.push_back(QueryResult{r.id, r.distance, hit->meta.label, r.rank});
  }
  return resp;
}

std::string Service::fingerprint() const {
  std::shared_lock lock(mu_);
  return fingerprint_;
}

std::vector<StoreEntry> Service::entries() const {
  std::shared_lock lock(mu_);
  std::vector<StoreEntry> out;
  for (const auto& e : entries_) out.push_back(e.meta);
  return out;
}

std::size_t Service::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

const EncryptedSignature* Service::find_signature(const std::string& id) const {
  std::shared_lock lock(mu_);
  for (const auto& e : entries_)
    if (e.meta.id == id) return &e.sig;
  return nullptr;
}

// ---- wire protocol ----------------------------------------------------------

namespace {

constexpr std::uint32_t kMaxHeader = 1u << 20;       // 1 MiB
constexpr std::uint64_t kMaxBody = 1ull << 32;       // 4 GiB

void write_exact(int fd, const void* buf, std::size_t n) {
  const char* p = static_cast<const char*>(buf);
  while (n > 0) {
    ssize_t w = ::write(fd, p, n);
    if (w <= 0) throw ProtocolError("short write on socket");
    p += w;
    n -= static_cast<std::size_t>(w);
  }
}

void read_exact(int fd, void* buf, std::size_t n) {
  char* p = static_cast<char*>(buf);
  while (n > 0) {
    ssize_t r = ::read(fd, p, n);
    if (r <= 0) throw ProtocolError("connection closed mid-message");
    p += r;
    n -= static_cast<std::size_t>(r);
  }
}

std::uint32_t read_u32(int fd) {
  unsigned char b[4];
  read_exact(fd, b, 4);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

std::uint64_t read_u64(int fd) {
  unsigned char b[8];
  read_exact(fd, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
  return v;
}

void write_u32(int fd, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v)};
  write_exact(fd, b, 4);
}

void write_u64(int fd, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (56 - 8 * i));
  write_exact(fd, b, 8);
}

void send_response(int fd, const json& j) {
  std::string text = j.dump();
  if (text.size() > kMaxHeader) throw ProtocolError("response too large");
  write_u32(fd, static_cast<std::uint32_t>(text.size()));
  write_exact(fd, text.data(), text.size());
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::crypto: return "crypto";
    case ErrorKind::package: return "package";
    case ErrorKind::io: return "io";
  }
  return "io";
}

struct FdGuard {
  int fd;
  ~FdGuard() {
    if (fd >= 0) ::close(fd);
  }
};

}  // namespace

WireServer::WireServer(Service& service, std::uint16_t port) : service_(service) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw ProtocolError("socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(listen_fd_);
    throw ProtocolError("bind() failed on port " + std::to_string(port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  if (::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw ProtocolError("listen() failed");
  }
  acceptor_ = std::thread([this] { accept_loop(); });
}

WireServer::~WireServer() { stop(); }

void WireServer::stop() {
  bool expected = false;
  if (!stopping_.compare_exchange_strong(expected, true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::lock_guard lock(workers_mu_);
  for (auto& w : workers_)
    if (w.joinable()) w.join();
}

std::uint64_t WireServer::requests_received() const { return requests_.load(); }
std::uint64_t WireServer::responses_sent() const { return responses_.load(); }

void WireServer::accept_loop() {
  for (;;) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) return;  // listener closed
    std::lock_guard lock(workers_mu_);
    workers_.emplace_back([this, fd] { handle(fd); });
  }
}

void WireServer::handle(int fd) {
  FdGuard guard{fd};
  json resp;
  try {
    std::uint32_t hlen = read_u32(fd);
    if (hlen == 0 || hlen > kMaxHeader) throw ProtocolError("bad header length");
    std::string htext(hlen, '\0');
    read_exact(fd, htext.data(), hlen);
    std::uint64_t blen = read_u64(fd);
    if (blen > kMaxBody) throw ProtocolError("bad body length");
    std::string body(blen, '\0');
    read_exact(fd, body.data(), blen);
    requests_.fetch_add(1);

    json header = json::parse(htext);
    std::string op = header.at("op").get<std::string>();
    if (op == "ingest") {
      UploadPackage pkg = deserialize(body);
      std::string label = header.value("label", "");
      std::string id = service_.ingest(pkg, label);
      resp = {{"status", "ok"}, {"id", id}};
    } else if (op == "query") {
      UploadPackage pkg = deserialize(body);
      int k = header.value("k", 5);
      QueryResponse qr = service_.query(pkg, k);
      json results = json::array();
      for (const auto& r : qr.results)
        results.push_back({{"id", r.id},
                           {"distance", r.distance},
                           {"label", r.label},
                           {"rank", r.rank}});
      resp = {{"status", "ok"},
              {"results", results},
              {"cost",
               {{"mul", qr.cost.mul},
                {"exp", qr.cost.exp},
                {"inv", qr.cost.inv},
                {"cmp", qr.cost.cmp}}}};
    } else {
      throw ProtocolError("unknown op " + op);
    }
  } catch (const Error& e) {
    resp = {{"status", "error"},
            {"kind", error_kind_name(e.kind())},
            {"message", e.what()}};
  } catch (const std::exception& e) {
    resp = {{"status", "error"}, {"kind", "io"}, {"message", e.what()}};
  }
  try {
    send_response(fd, resp);
    responses_.fetch_add(1);
  } catch (const std::exception&) {
    // peer went away; nothing to do
  }
}

namespace {

int connect_to(const std::string& host, std::uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw ProtocolError("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host == "localhost" ? "127.0.0.1" : host.c_str(),
                  &addr.sin_addr) != 1) {
    ::close(fd);
    throw ProtocolError("bad host " + host);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    throw ProtocolError("cannot connect to " + host + ":" + std::to_string(port));
  }
  return fd;
}

std::string roundtrip(const std::string& host, std::uint16_t port,
                      const json& header, const std::string& body) {
  int fd = connect_to(host, port);
  FdGuard guard{fd};
  std::string htext = header.dump();
  write_u32(fd, static_cast<std::uint32_t>(htext.size()));
  write_exact(fd, htext.data(), htext.size());
  write_u64(fd, body.size());
  write_exact(fd, body.data(), body.size());
  std::uint32_t rlen = read_u32(fd);
  if (rlen == 0 || rlen > kMaxHeader) throw ProtocolError("bad response length");
  std::string resp(rlen, '\0');
  read_exact(fd, resp.data(), rlen);
  return resp;
}

}  // namespace

std::string wire_ingest(const std::string& host, std::uint16_t port,
                        const std::string& package_bytes, const std::string& label) {
  return roundtrip(host, port, json{{"op", "ingest"}, {"label", label}},
                   package_bytes);
}

std::string wire_query(const std::string& host, std::uint16_t port,
                       const std::string& package_bytes, int k) {
  return roundtrip(host, port, json{{"op", "query"}, {"k", k}}, package_bytes);
}

}  // namespace socbir
