// Copyright 2026 The ascost Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "output.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <sstream>

namespace ascost::tools {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_number(double v) {
  if (v == 0) return "0";  // folds -0
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

CsvTable::CsvTable(std::string run_id, std::vector<std::string> header) : width_(header.size()) {
  text_ = "# run " + run_id + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + quote(header[i]);
  text_ += '\n';
}

void CsvTable::add(std::vector<Cell> row) {
  if (row.size() != width_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) text_ += ',';
    if (const auto* s = std::get_if<std::string>(&row[i])) {
      text_ += quote(*s);
    } else if (const auto* d = std::get_if<double>(&row[i])) {
      text_ += format_number(*d);
    } else {
      text_ += std::to_string(std::get<int>(row[i]));
    }
  }
  text_ += '\n';
  ++rows_;
}

std::string CsvTable::write(const std::filesystem::path& dir, const std::string& name) const {
  std::ofstream out(dir / name, std::ios::binary);
  out << text_;
  if (!out) throw OutputError("cannot write " + (dir / name).string());
  return text_;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace ascost::tools
