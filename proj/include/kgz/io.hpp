#pragma once

// Artifacts: CSV series, "KGZ1" binary snapshots, SHA-256 digests and the
// per-run manifest.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kgz/state.hpp"

namespace kgz {

/// %.17g, '.' decimal point regardless of locale.
std::string format_double(double v);

/// Header row, 17 significant digits, '\n' line endings. Throws ConfigError
/// when the file cannot be opened or a row has the wrong width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t width_;
  std::ofstream out_;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// "KGZ1", u32 version, u32 N, f64 L, f64 t, then n, nt, E1, E2, Et1, Et2 row-major, little endian.
void write_snapshot(const std::filesystem::path& path, const FieldState& s);
/// Throws ConfigError on a bad magic, version or size.
FieldState read_snapshot(const std::filesystem::path& path, double dealias = 2.0 / 3.0);

std::string sha256_file(const std::filesystem::path& path);

/// manifest.json listing every regular file under `dir` (except itself) with
/// size and SHA-256, sorted by path.
void write_manifest(const std::filesystem::path& dir);

}  // namespace kgz
