#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgpe/grid.hpp"

namespace edgpe {

// Binary field snapshot: "EDGP", u32 version, u32 n1 n2 n3, f64 L1 L2 L3, then
// interleaved (re, im) f64 samples in x-fastest order; all little-endian.
inline constexpr std::uint32_t snapshot_version = 1;

std::string encode_snapshot(const WaveField& u);
WaveField decode_snapshot(std::string_view bytes);
void write_snapshot(const std::filesystem::path& path, const WaveField& u);
WaveField read_snapshot(const std::filesystem::path& path);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

std::string sha256_hex(std::string_view bytes);

// Writes files into one run directory atomically (temp file + rename) and keeps
// a SHA-256 manifest of everything written.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path write(const std::string& name, std::string_view bytes);
  // Writes manifest.json listing every file written so far.
  std::filesystem::path finalize(std::string_view command);

  struct Entry {
    std::string name;
    std::string sha256;
    std::size_t bytes = 0;
  };
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::filesystem::path dir_;
  std::vector<Entry> entries_;
};

void write_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace edgpe
