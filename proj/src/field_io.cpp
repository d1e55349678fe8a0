#include "surfgrow/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace surfgrow::io {

namespace {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw std::runtime_error("binary dump: unexpected end of stream");
  }
  return to_little(v);
}

void expect_magic(std::istream& is, const char* magic) {
  char buf[4];
  if (!is.read(buf, 4) || std::memcmp(buf, magic, 4) != 0) {
    throw std::runtime_error(std::string("binary dump: bad magic, expected ") + magic);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return is;
}

}  // namespace

void write_field(std::ostream& os, const SpectralField& u) {
  os.write("SPF1", 4);
  put<double>(os, u.lattice().length());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.lattice().truncation()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.size()));
  for (double c : u.coeffs()) put<double>(os, c);
}

SpectralField read_field(std::istream& is) {
  expect_magic(is, "SPF1");
  const auto length = get<double>(is);
  const auto n = get<std::uint32_t>(is);
  const auto count = get<std::uint32_t>(is);
  auto lattice = make_lattice(length, static_cast<int>(n));
  if (count != lattice->size()) throw std::runtime_error("SPF1: mode count inconsistent with N");
  std::vector<double> coeffs(count);
  for (auto& c : coeffs) c = get<double>(is);
  return SpectralField(std::move(lattice), std::move(coeffs));
}

void write_grid(std::ostream& os, const PhysicalGrid& g) {
  os.write("GRD1", 4);
  put<double>(os, g.length());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
  for (double v : g.values()) put<double>(os, v);
}

PhysicalGrid read_grid(std::istream& is) {
  expect_magic(is, "GRD1");
  const auto length = get<double>(is);
  const auto n = get<std::uint32_t>(is);
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (auto& v : values) v = get<double>(is);
  return PhysicalGrid(length, static_cast<int>(n), std::move(values));
}

void save_field(const std::filesystem::path& path, const SpectralField& u) {
  auto os = open_out(path);
  write_field(os, u);
}

SpectralField load_field(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_field(is);
}

void save_grid(const std::filesystem::path& path, const PhysicalGrid& g) {
  auto os = open_out(path);
  write_grid(os, g);
}

PhysicalGrid load_grid(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_grid(is);
}

void save_pgm(const std::filesystem::path& path, const PhysicalGrid& g) {
  const auto vals = g.values();
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  const double span = *hi - *lo;
  auto os = open_out(path);
  os << "P5\n" << g.n() << ' ' << g.n() << "\n255\n";
  for (double v : vals) {
    const double level = span > 0.0 ? (v - *lo) / span * 255.0 : 127.0;
    const auto byte = static_cast<unsigned char>(std::clamp(std::lround(level), 0L, 255L));
    os.put(static_cast<char>(byte));
  }
}

}  // namespace surfgrow::io
