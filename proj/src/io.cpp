#include "kgz/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <memory>

#include "json.hpp"
#include <openssl/evp.h>

#include "kgz/errors.hpp"

namespace kgz {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& columns)
    : path_(path), width_(columns.size()), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw ConfigError("cannot write " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_)
    throw ConfigError(path_.string() + ": row of " + std::to_string(values.size()) + " values, header has " +
                      std::to_string(width_));
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
  if (!out_) throw ConfigError("write failed: " + path_.string());
}

namespace {

template <class T>
void put_le(std::string& out, T v) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U u = std::bit_cast<U>(v);
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
}

template <class T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U u = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) u |= static_cast<U>(p[b]) << (8 * b);
  return std::bit_cast<T>(u);
}

std::array<const RealField*, 6> planes(const FieldState& s) {
  return {&s.n, &s.nt, &s.E[0], &s.E[1], &s.Et[0], &s.Et[1]};
}

std::array<RealField*, 6> planes(FieldState& s) { return {&s.n, &s.nt, &s.E[0], &s.E[1], &s.Et[0], &s.Et[1]}; }

}  // namespace

void write_snapshot(const fs::path& path, const FieldState& s) {
  const SpectralGrid& g = s.grid();
  std::string buf = "KGZ1";
  buf.reserve(28 + 6 * g.size() * 8);
  put_le<std::uint32_t>(buf, kSnapshotVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.points()));
  put_le<double>(buf, g.half_width());
  put_le<double>(buf, s.t);
  for (const RealField* f : planes(s))
    for (double v : f->values) put_le<double>(buf, v);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ConfigError("cannot write snapshot " + path.string());
}

FieldState read_snapshot(const fs::path& path, double dealias) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 28 || std::memcmp(buf.data(), "KGZ1", 4) != 0)
    throw ConfigError(path.string() + ": not a KGZ1 snapshot");
  const auto version = get_le<std::uint32_t>(buf.data() + 4);
  if (version != kSnapshotVersion) throw ConfigError(path.string() + ": unsupported version " + std::to_string(version));
  const auto n = get_le<std::uint32_t>(buf.data() + 8);
  const double L = get_le<double>(buf.data() + 12), t = get_le<double>(buf.data() + 20);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  if (buf.size() != 28 + 6 * cells * 8) throw ConfigError(path.string() + ": truncated or oversized snapshot");
  FieldState s(SpectralGrid(L, static_cast<int>(n), dealias), t);
  const unsigned char* p = buf.data() + 28;
  for (RealField* f : planes(s))
    for (double& v : f->values) v = get_le<double>(p), p += 8;
  return s;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> chunk(1 << 16);
  while (in) {
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    EVP_DigestUpdate(ctx.get(), chunk.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) out += hex[md[i] >> 4], out += hex[md[i] & 15];
  return out;
}

void write_manifest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(fs::relative(e.path(), dir));
  std::sort(files.begin(), files.end());
  nlohmann::ordered_json j;
  j["format"] = "kgz-manifest-1";
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files)
    j["files"].push_back({{"path", f.generic_string()},
                          {"bytes", fs::file_size(dir / f)},
                          {"sha256", sha256_file(dir / f)}});
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
}

}  // namespace kgz
