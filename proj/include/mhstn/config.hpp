// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mhstn {

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

// Every recognised key with its built-in default.
const std::vector<ConfigKey>& config_keys();

// Flat key=value settings. Values set later win, so callers apply the file
// first and command-line flags after it.
class Config {
 public:
  Config();

  // '#' starts a comment; blank lines are skipped. Unknown keys throw
  // ArgumentError naming the line.
  void load_file(const std::filesystem::path& path);
  void set(const std::string& key, std::string value);

  const std::string& str(const std::string& key) const;
  std::filesystem::path path(const std::string& key) const { return str(key); }
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;  // non-negative integer
  bool flag(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;

  // Where each value came from: "default", "file" or "cli".
  const std::string& source(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> sources_;
};

}  // namespace mhstn
