#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace bseg {

/// Flat key=value run configuration.
///
/// Every key has a registered default; setting or loading an unknown key is
/// a ConfigError. Later assignments override earlier ones. Typed getters
/// validate the stored text and name the key on failure.
class RunConfig {
 public:
  RunConfig();

  void set(std::string_view key, std::string_view value);
  /// Accepts "key=value".
  void set_assignment(std::string_view assignment);
  /// Lines are key=value; blank lines and lines starting with '#' are skipped.
  void parse(std::string_view text, std::string_view origin = "<config>");
  void load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  std::uint64_t get_uint(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  /// Throws ConfigError if the key still has an empty value.
  void require(std::string_view key) const;

  /// All keys in sorted order as key=value lines.
  std::string to_text() const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace bseg
