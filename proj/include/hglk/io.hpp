#pragma once
// Deterministic file emission: locale-independent number formatting, CSV
// assembly, FNV-1a content hashes, and the output manifest. One writer per
// run; nothing here embeds paths or timestamps, so identical configs yield
// byte-identical artifacts.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hglk {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view s) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(s);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// Shortest round-trip decimal form, independent of the C locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_string(const std::vector<std::string>& columns,
                              const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const std::vector<double>& row : rows) {
    if (row.size() != columns.size()) throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::string json_string(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// Collects named artifacts, then writes them plus manifest.json in one pass.
class Emitter {
 public:
  explicit Emitter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  const std::filesystem::path& dir() const { return dir_; }

  void write_all(const std::string& config_hash, std::uint64_t seed,
                 const nlohmann::ordered_json* suites = nullptr) {
    std::filesystem::create_directories(dir_);
    std::sort(files_.begin(), files_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    nlohmann::ordered_json manifest;
    manifest["config_hash"] = config_hash;
    manifest["seed"] = seed;
    manifest["files"] = nlohmann::ordered_json::array();
    for (const auto& [name, content] : files_) {
      write_file(name, content);
      manifest["files"].push_back({{"name", name}, {"fnv1a64", fnv1a64_hex(content)}});
    }
    if (suites) manifest["suites"] = *suites;
    write_file("manifest.json", json_string(manifest));
  }

 private:
  void write_file(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << content;
  }

  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace hglk
