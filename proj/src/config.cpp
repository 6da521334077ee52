#include "efp/config.hpp"

#include <fstream>

#include "efp/errors.hpp"

namespace efp {

namespace {
std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}
}  // namespace

FlatConfig FlatConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  FlatConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: missing '=' at " + path + ":" +
                        std::to_string(lineno));
    const std::string key = trim(stripped.substr(0, eq));
    if (key.empty())
      throw ConfigError("config: empty key at " + path + ":" + std::to_string(lineno));
    cfg.entries_[key] = trim(stripped.substr(eq + 1));
  }
  return cfg;
}

void FlatConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool FlatConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::optional<std::string> FlatConfig::raw(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string FlatConfig::get_string(const std::string& key,
                                   const std::string& fallback) const {
  return raw(key).value_or(fallback);
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const double parsed = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing junk");
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not a number: " + *v);
  }
}

std::size_t FlatConfig::get_size(const std::string& key, std::size_t fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const long long parsed = std::stoll(*v, &pos);
    if (pos != v->size() || parsed < 0) throw std::invalid_argument("bad count");
    return static_cast<std::size_t>(parsed);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not a count: " + *v);
  }
}

std::uint64_t FlatConfig::get_u64(const std::string& key,
                                  std::uint64_t fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long parsed = std::stoull(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing junk");
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not an integer: " + *v);
  }
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw ConfigError("config: key '" + key + "' is not a bool: " + *v);
}

}  // namespace efp
