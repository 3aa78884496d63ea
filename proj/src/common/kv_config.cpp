#include "molrl/kv_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "molrl/text.hpp"

namespace molrl {

namespace {

std::string unescape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 1 < raw.size()) {
      const char next = raw[i + 1];
      if (next == 'n') {
        out.push_back('\n');
        ++i;
        continue;
      }
      if (next == 't') {
        out.push_back('\t');
        ++i;
        continue;
      }
      if (next == '\\') {
        out.push_back('\\');
        ++i;
        continue;
      }
    }
    out.push_back(raw[i]);
  }
  return out;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text, std::string source_name) {
  KeyValueFile kv;
  kv.source_ = std::move(source_name);
  std::size_t line_no = 0;
  for (const auto& raw_line : text::split(text, '\n')) {
    ++line_no;
    const auto line = text::trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(kv.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(text::trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError(kv.source_ + ":" + std::to_string(line_no) + ": empty key");
    }
    if (kv.index_.contains(key)) {
      throw ConfigError(kv.source_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    kv.index_.emplace(key, kv.entries_.size());
    kv.entries_.push_back({std::move(key), unescape(text::trim(line.substr(eq + 1))), line_no});
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

bool KeyValueFile::contains(std::string_view key) const { return index_.find(key) != index_.end(); }

const KeyValueFile::Entry& KeyValueFile::entry(std::string_view key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) throw ConfigError(source_ + ": missing key '" + std::string(key) + "'");
  return entries_[it->second];
}

const std::string& KeyValueFile::get(std::string_view key) const { return entry(key).value; }

std::string KeyValueFile::get_or(std::string_view key, std::string fallback) const {
  return contains(key) ? get(key) : std::move(fallback);
}

double KeyValueFile::get_double(std::string_view key) const {
  const auto& e = entry(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(source_ + ":" + std::to_string(e.line) + ": '" + e.key + "' is not a number");
  }
}

double KeyValueFile::get_double_or(std::string_view key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}

long long KeyValueFile::get_int(std::string_view key) const {
  const auto& e = entry(key);
  long long v = 0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(source_ + ":" + std::to_string(e.line) + ": '" + e.key + "' is not an integer");
  }
  return v;
}

long long KeyValueFile::get_int_or(std::string_view key, long long fallback) const {
  return contains(key) ? get_int(key) : fallback;
}

std::vector<std::string> KeyValueFile::get_list(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& part : text::split(get(key), ',')) {
    const auto t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

void KeyValueFile::require_known_keys(const std::vector<std::string_view>& allowed) const {
  for (const auto& e : entries_) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
      throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
  }
}

}  // namespace molrl
