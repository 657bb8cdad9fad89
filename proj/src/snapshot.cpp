#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edgpe/io.hpp"

namespace edgpe {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw std::runtime_error("snapshot truncated");
  char buf[sizeof(T)];
  std::memcpy(buf, bytes.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

constexpr char magic[4] = {'E', 'D', 'G', 'P'};

}  // namespace

std::string encode_snapshot(const WaveField& u) {
  const Grid3D& g = u.grid();
  std::string out;
  out.reserve(4 + 4 * 4 + 3 * 8 + 16 * u.size());
  out.append(magic, 4);
  put<std::uint32_t>(out, snapshot_version);
  for (int a = 0; a < 3; ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points(a)));
  for (int a = 0; a < 3; ++a) put<double>(out, g.length(a));
  for (const Complex& z : u.values()) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
  return out;
}

WaveField decode_snapshot(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0) throw std::runtime_error("not an EDGP snapshot");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != snapshot_version) throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  std::array<std::size_t, 3> n{};
  std::array<double, 3> L{};
  for (auto& v : n) v = get<std::uint32_t>(bytes, pos);
  for (auto& v : L) v = get<double>(bytes, pos);
  Grid3D grid(n, L);
  if (bytes.size() - pos != 16 * grid.size()) throw std::runtime_error("snapshot size does not match its header");
  std::vector<Complex> values(grid.size());
  for (Complex& z : values) {
    const double re = get<double>(bytes, pos);
    const double im = get<double>(bytes, pos);
    z = Complex(re, im);
  }
  return WaveField(std::move(grid), std::move(values));
}

void write_snapshot(const std::filesystem::path& path, const WaveField& u) { write_atomic(path, encode_snapshot(u)); }

WaveField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_snapshot(ss.str());
}

}  // namespace edgpe
