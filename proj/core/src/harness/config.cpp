#include "neuroloop/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "neuroloop/errors.hpp"

namespace neuroloop {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void Config::merge_line(const std::string& raw, int line_no) {
  std::string line = raw;
  if (const auto hash_pos = line.find('#'); hash_pos != std::string::npos) {
    line.erase(hash_pos);
  }
  line = trim(line);
  if (line.empty()) return;
  const auto eq = line.find('=');
  if (eq == std::string::npos) {
    throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
  }
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key.empty()) {
    throw ParseError("config line " + std::to_string(line_no) + ": empty key");
  }
  if (sealed_ && values_.count(key) == 0) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  values_[key] = value;
}

void Config::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    merge_line(line, ++line_no);
  }
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

void Config::set(const std::string& key, double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  values_[key] = out.str();
}

void Config::set(const std::string& key, std::int64_t value) {
  values_[key] = std::to_string(value);
}

const std::string& Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string& text = get_string(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + text + "' is not a number");
  }
}

std::int64_t Config::get_int(const std::string& key) const {
  const std::string& text = get_string(key);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

bool Config::get_bool(const std::string& key) const {
  const std::string& text = get_string(key);
  if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "off" || text == "no") return false;
  throw ConfigError("config key '" + key + "': '" + text + "' is not a boolean");
}

std::vector<double> Config::get_list(const std::string& key) const {
  const std::string& text = get_string(key);
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': '" + item + "' is not a number");
    }
  }
  return out;
}

std::uint64_t Config::hash() const {
  std::ostringstream dump;
  write(dump);
  const std::string text = dump.str();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void Config::write(std::ostream& out) const {
  for (const auto& [key, value] : values_) {
    out << key << " = " << value << "\n";
  }
}

}  // namespace neuroloop
