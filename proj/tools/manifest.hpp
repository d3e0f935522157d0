#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace slim::cli {

/// Everything needed to rerun a command: its effective options after flags
/// and config overrides, plus hashes of what it read and wrote.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> inputs;   ///< absolute path -> sha256
  std::map<std::string, std::string> outputs;  ///< path relative to out dir -> sha256
  std::vector<std::string> deterministic;      ///< outputs a replay must reproduce
  std::string started;
  std::string finished;

  std::string to_json() const;
  /// Throws DataError on malformed documents.
  static RunManifest from_json(const std::string& text);
};

/// Lowercase hex SHA-256 of the file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_text(const std::string& text);

/// UTC "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

/// "key = value" lines; blank lines and '#' comments are skipped. Throws
/// DataError with the line number on anything else.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace slim::cli
