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

// Table output for the command-line tool.

#ifndef ASCOST_TOOLS_OUTPUT_HPP
#define ASCOST_TOOLS_OUTPUT_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ascost::tools {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a, used for run ids and file fingerprints.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);
std::string hex(std::uint64_t v);

std::string format_number(double v);  // shortest round-trip form
std::string utc_now();                // ISO 8601, seconds

using Cell = std::variant<std::string, double, int>;

// Comma-separated table. The first line is "# run <id>", then one header
// line, then rows.
class CsvTable {
 public:
  CsvTable(std::string run_id, std::vector<std::string> header);
  void add(std::vector<Cell> row);
  [[nodiscard]] std::size_t rows() const { return rows_; }
  // Writes to dir/name and returns the content.
  std::string write(const std::filesystem::path& dir, const std::string& name) const;
  [[nodiscard]] std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace ascost::tools

#endif  // ASCOST_TOOLS_OUTPUT_HPP
