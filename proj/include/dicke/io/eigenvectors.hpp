#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "dicke/error.hpp"
#include "dicke/quantum/spectrum.hpp"

namespace dicke::io {

// Binary eigenvector container, little-endian:
//   magic "DICKEVEC", u32 version, u32 endian tag 0x01020304,
//   f64 omega, omega0, lambda, alpha, j; i32 n_max; u32 ordering (0 = n-major, m ascending);
//   u64 dim, u64 count; f64 energies[count]; f64 vectors[count][dim] (column by column).
inline constexpr char kVectorMagic[8] = {'D', 'I', 'C', 'K', 'E', 'V', 'E', 'C'};
inline constexpr std::uint32_t kVectorFormatVersion = 1;
inline constexpr std::uint32_t kEndianTag = 0x01020304;

namespace detail {

template <class T>
void put(std::ofstream& out, T v) {
  static_assert(std::endian::native == std::endian::little, "container is written in native little-endian order");
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw Error("truncated eigenvector file");
  return v;
}

}  // namespace detail

inline void write_eigenvectors(const std::filesystem::path& path, const quantum::SpectrumResult& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(kVectorMagic, sizeof kVectorMagic);
  detail::put(out, kVectorFormatVersion);
  detail::put(out, kEndianTag);
  for (double v : {s.params.omega, s.params.omega0, s.params.lambda, s.params.alpha, s.params.j}) detail::put(out, v);
  detail::put(out, static_cast<std::int32_t>(s.basis.n_max()));
  detail::put(out, std::uint32_t{0});
  detail::put(out, static_cast<std::uint64_t>(s.vectors.rows()));
  detail::put(out, static_cast<std::uint64_t>(s.size()));
  out.write(reinterpret_cast<const char*>(s.energies.data()), static_cast<std::streamsize>(s.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(s.vectors.data()),
            static_cast<std::streamsize>(s.vectors.size() * sizeof(double)));
  if (!out) throw Error("failed writing " + path.string());
}

[[nodiscard]] inline quantum::SpectrumResult read_eigenvectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kVectorMagic, sizeof magic) != 0) throw Error(path.string() + ": not an eigenvector file");
  const auto version = detail::get<std::uint32_t>(in);
  if (version != kVectorFormatVersion) throw Error(path.string() + ": unsupported format version " + std::to_string(version));
  if (detail::get<std::uint32_t>(in) != kEndianTag) throw Error(path.string() + ": byte order mismatch");
  quantum::SpectrumResult s;
  s.params.omega = detail::get<double>(in);
  s.params.omega0 = detail::get<double>(in);
  s.params.lambda = detail::get<double>(in);
  s.params.alpha = detail::get<double>(in);
  s.params.j = detail::get<double>(in);
  const auto n_max = detail::get<std::int32_t>(in);
  if (detail::get<std::uint32_t>(in) != 0) throw Error(path.string() + ": unknown basis ordering");
  s.basis = quantum::QuantumBasis(s.params.j, n_max);
  const auto dim = static_cast<Eigen::Index>(detail::get<std::uint64_t>(in));
  const auto count = static_cast<Eigen::Index>(detail::get<std::uint64_t>(in));
  if (static_cast<std::size_t>(dim) != s.basis.dim()) throw Error(path.string() + ": dimension does not match header");
  s.energies.resize(count);
  s.vectors.resize(dim, count);
  in.read(reinterpret_cast<char*>(s.energies.data()), static_cast<std::streamsize>(count * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.vectors.data()), static_cast<std::streamsize>(dim * count * sizeof(double)));
  if (!in) throw Error("truncated eigenvector file");
  s.eps = s.energies / (s.params.omega0 * s.params.j);
  s.complete = static_cast<std::size_t>(count) == s.basis.dim();
  return s;
}

}  // namespace dicke::io
