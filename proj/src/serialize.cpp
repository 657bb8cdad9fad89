#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include <json.hpp>

#include "edgpe/io.hpp"

namespace edgpe {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ArtifactWriter::write(const std::string& name, std::string_view bytes) {
  const auto path = dir_ / name;
  write_atomic(path, bytes);
  Entry e{name, sha256_hex(bytes), bytes.size()};
  for (auto& old : entries_)
    if (old.name == name) {
      old = e;
      return path;
    }
  entries_.push_back(std::move(e));
  return path;
}

std::filesystem::path ArtifactWriter::finalize(std::string_view command) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& e : entries_) j["files"].push_back({{"name", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  const auto path = dir_ / "manifest.json";
  write_atomic(path, j.dump(2) + "\n");
  return path;
}

}  // namespace edgpe
