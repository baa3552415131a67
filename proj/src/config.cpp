#include "latpilot/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace latpilot {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

} // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& name) {
  KeyValueConfig cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
      cfg.sections_.try_emplace(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": key outside any [section]");
    auto [it, inserted] = cfg.sections_[section].try_emplace(key, Entry{value, lineno});
    if (!inserted)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key [" +
                        section + "] " + key);
  }
  return cfg;
}

bool KeyValueConfig::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool KeyValueConfig::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const KeyValueConfig::Entry& KeyValueConfig::require(const std::string& section,
                                                     const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end())
    throw ConfigError(name_ + ": missing section [" + section + "]");
  auto kt = it->second.find(key);
  if (kt == it->second.end())
    throw ConfigError(name_ + ": missing key [" + section + "] " + key);
  return kt->second;
}

void KeyValueConfig::fail(const Entry& e, const std::string& section,
                          const std::string& key, const std::string& what) const {
  throw ConfigError(name_ + ":" + std::to_string(e.line) + ": [" + section + "] " +
                    key + ": " + what + " (got '" + e.raw + "')");
}

std::string KeyValueConfig::get_string(const std::string& section,
                                       const std::string& key) const {
  return require(section, key).raw;
}

std::string KeyValueConfig::get_string(const std::string& section,
                                       const std::string& key,
                                       const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& section,
                                  const std::string& key) const {
  const auto& e = require(section, key);
  try {
    size_t pos = 0;
    long long v = std::stoll(e.raw, &pos);
    if (pos != e.raw.size()) fail(e, section, key, "expected an integer");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(e, section, key, "expected an integer");
  }
}

long long KeyValueConfig::get_int(const std::string& section, const std::string& key,
                                  long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

double KeyValueConfig::get_real(const std::string& section,
                                const std::string& key) const {
  const auto& e = require(section, key);
  try {
    size_t pos = 0;
    double v = std::stod(e.raw, &pos);
    if (pos != e.raw.size()) fail(e, section, key, "expected a real number");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(e, section, key, "expected a real number");
  }
}

double KeyValueConfig::get_real(const std::string& section, const std::string& key,
                                double fallback) const {
  return has(section, key) ? get_real(section, key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& section, const std::string& key,
                              bool fallback) const {
  if (!has(section, key)) return fallback;
  const auto& e = require(section, key);
  std::string v = e.raw;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(e, section, key, "expected a boolean");
}

std::uint64_t KeyValueConfig::get_u64(const std::string& section,
                                      const std::string& key,
                                      std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const auto& e = require(section, key);
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(e.raw, &pos);
    if (pos != e.raw.size()) fail(e, section, key, "expected an unsigned integer");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(e, section, key, "expected an unsigned integer");
  }
}

std::vector<double> KeyValueConfig::get_real_list(const std::string& section,
                                                  const std::string& key) const {
  const auto& e = require(section, key);
  std::istringstream in(e.raw);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) fail(e, section, key, "expected a list of reals");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail(e, section, key, "expected a list of reals");
    }
  }
  if (out.empty()) fail(e, section, key, "expected a nonempty list");
  return out;
}

std::vector<long long> KeyValueConfig::get_int_list(const std::string& section,
                                                    const std::string& key) const {
  const auto& e = require(section, key);
  std::istringstream in(e.raw);
  std::vector<long long> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stoll(tok, &pos));
      if (pos != tok.size()) fail(e, section, key, "expected a list of integers");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail(e, section, key, "expected a list of integers");
    }
  }
  if (out.empty()) fail(e, section, key, "expected a nonempty list");
  return out;
}

} // namespace latpilot
