#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "specthresh/chain.hpp"
#include "specthresh/harness.hpp"

namespace specthresh::cli {

/// Flat key = value manifest. '#' starts a comment; keys mirror the long flag names
/// with dashes or underscores.
class KeyValueFile {
 public:
  static KeyValueFile load(const std::filesystem::path& path);
  static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.contains(key); }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

double parse_real(const std::string& text, const std::string& what);
std::uint64_t parse_count(const std::string& text, const std::string& what);
std::vector<std::string> split_list(const std::string& text);

/// "stationary" or "fixed:<x0>".
InitMode parse_init(const std::string& text);
std::string format_init(const InitMode& init);

/// "m:alpha" pairs, e.g. "3:0,4:0.2".
std::vector<ParameterRow> parse_rows(const std::string& text);

/// Applies every recognized key of `file` to cfg; unknown keys are an error.
void apply(const KeyValueFile& file, ExperimentConfig& cfg);

}  // namespace specthresh::cli
