// Copyright 2026 The wagan Authors.
//
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

#ifndef WAGAN_CSV_HPP_
#define WAGAN_CSV_HPP_

// Numeric CSV: comma separated, '.' decimal point, one header line. Numbers
// are written in the shortest form that parses back to the same double.

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wagan {

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

// Throws IoError when the file cannot be opened and ParseError (naming the
// line and column) for malformed content.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::istream& in, std::string_view source);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const Eigen::MatrixXd& values);
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values);

// col_1, ..., col_d
std::vector<std::string> default_header(Eigen::Index d);

std::string format_number(double value);

// Row-at-a-time writer for tables with text columns.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace wagan

#endif  // WAGAN_CSV_HPP_
