#include "t2x/io.hpp"

#include <fstream>
#include <sstream>

#include "t2x/errors.hpp"
#include "text_util.hpp"

namespace t2x {

void Metadata::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Metadata::set(const std::string& key, double value) { set(key, detail::fmt_g(value, 12)); }

void Metadata::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

void Metadata::merge(const Metadata& other, const std::string& prefix) {
  for (const auto& [k, v] : other.entries_)
    set(prefix + k, v);
}

const std::string* Metadata::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key)
      return &v;
  return nullptr;
}

std::string Metadata::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_)
    out += k + " = " + v + "\n";
  return out;
}

Metadata parse_metadata(const std::string& text) {
  Metadata m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos)
      continue;
    m.set(line.substr(0, eq), line.substr(eq + 3));
  }
  return m;
}

std::string csv_number(double v) {
  if (v == 0.0)
    return "0"; // folds -0 into 0
  return detail::fmt_g(v, 9);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw IoError("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f)
    throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace t2x
