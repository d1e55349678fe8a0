#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace surfgrow::report {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// RFC-4180 field quoting: fields containing a comma, quote, CR or LF are quoted.
std::string csv_field(const std::string& field);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);  ///< throws on width mismatch
  [[nodiscard]] std::string str() const;       ///< CRLF line endings
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Flat "key=value" lines.
std::string key_values(const KeyValues& kv);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// UTC timestamp, ISO 8601 with seconds.
std::string utc_now();

/// Collects emitted files under one output directory and writes the manifest
/// last, through a temporary file and a rename.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

  void write_text(const std::string& name, const std::string& text);
  /// Registers a file written by someone else.
  void add(const std::string& name);

  void write_manifest(const std::string& command, const KeyValues& config, const std::string& version,
                      unsigned long long seed, const std::string& started);

  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

inline constexpr const char* kManifestName = "manifest.txt";

}  // namespace surfgrow::report
