#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "dicke/io/config.hpp"
#include "dicke/io/plot_scripts.hpp"
#include "dicke/version.hpp"

namespace dicke::io {

/// FNV-1a 64 of a file's bytes, as 16 hex digits.
[[nodiscard]] inline std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Manifest {
  std::string command;
  RunConfig config;
  std::vector<std::filesystem::path> outputs;  // relative to the output directory
  json diagnostics = json::object();
};

inline void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
  json doc;
  doc["code_version"] = kVersion;
  doc["command"] = m.command;
  doc["config"] = to_json(m.config);
  json outs = json::array();
  for (const auto& f : m.outputs) {
    outs.push_back({{"file", f.generic_string()},
                    {"bytes", std::filesystem::file_size(dir / f)},
                    {"fnv1a64", file_digest(dir / f)}});
  }
  doc["outputs"] = outs;
  doc["diagnostics"] = m.diagnostics;
  write_text(dir / "run_manifest.json", doc.dump(2) + "\n");
}

}  // namespace dicke::io
