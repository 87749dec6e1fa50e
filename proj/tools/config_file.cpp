#include "config_file.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <sstream>

#include "specthresh/error.hpp"

namespace specthresh::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string key) {
  for (char& c : key)
    if (c == '-') c = '_';
  return key;
}

}  // namespace

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
  KeyValueFile file;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(fmt::format("{}:{}: expected key = value", origin, line_no));
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    if (key.empty()) throw InputError(fmt::format("{}:{}: empty key", origin, line_no));
    file.values_[key] = trim(line.substr(eq + 1));
  }
  return file;
}

const std::string& KeyValueFile::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("missing config key " + key);
  return it->second;
}

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw InvalidArgument(fmt::format("{}: '{}' is not a number", what, text));
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw InvalidArgument(fmt::format("{}: '{}' is not a non-negative integer", what, text));
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

InitMode parse_init(const std::string& text) {
  const std::string t = trim(text);
  if (t == "stationary") return StationaryStart{};
  if (t.rfind("fixed:", 0) == 0) return FixedStart{parse_real(t.substr(6), "--init")};
  throw InvalidArgument("--init must be 'stationary' or 'fixed:<x0>', got '" + text + "'");
}

std::string format_init(const InitMode& init) {
  if (const auto* f = std::get_if<FixedStart>(&init)) return fmt::format("fixed:{}", f->x0);
  return "stationary";
}

std::vector<ParameterRow> parse_rows(const std::string& text) {
  std::vector<ParameterRow> rows;
  for (const std::string& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw InvalidArgument("rows entries must look like m:alpha, got '" + item + "'");
    rows.push_back({parse_count(item.substr(0, colon), "rows"),
                    parse_real(item.substr(colon + 1), "rows")});
  }
  return rows;
}

void apply(const KeyValueFile& file, ExperimentConfig& cfg) {
  static const std::set<std::string> known{
      "theta", "sigma", "n", "m", "alpha", "rows", "reps", "seed", "init",
      "truth_block", "quad_nodes", "threads", "lattice_halfwidth", "gram_rcond"};
  for (const auto& [key, value] : file.values()) {
    if (!known.contains(key)) throw InvalidArgument("unknown config key '" + key + "'");
    if (key == "theta") cfg.params.theta = parse_real(value, key);
    else if (key == "sigma") cfg.params.sigma = parse_real(value, key);
    else if (key == "n") {
      cfg.n_values.clear();
      for (const auto& v : split_list(value)) cfg.n_values.push_back(parse_count(v, key));
    } else if (key == "m") {
      cfg.m_values.clear();
      for (const auto& v : split_list(value)) cfg.m_values.push_back(parse_count(v, key));
    } else if (key == "alpha") {
      cfg.alpha_values.clear();
      for (const auto& v : split_list(value)) cfg.alpha_values.push_back(parse_real(v, key));
    } else if (key == "rows") cfg.rows = parse_rows(value);
    else if (key == "reps") cfg.replications = parse_count(value, key);
    else if (key == "seed") cfg.master_seed = parse_count(value, key);
    else if (key == "init") cfg.init = parse_init(value);
    else if (key == "truth_block") cfg.truth_block = parse_count(value, key);
    else if (key == "quad_nodes") cfg.quadrature.nodes_per_axis = parse_count(value, key);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_count(value, key));
    else if (key == "lattice_halfwidth") cfg.lattice_halfwidth = static_cast<int>(parse_count(value, key));
    else if (key == "gram_rcond") cfg.gram_rcond = parse_real(value, key);
  }
  if ((file.has("m") || file.has("alpha")) && !file.has("rows")) cfg.rows.clear();
}

}  // namespace specthresh::cli
