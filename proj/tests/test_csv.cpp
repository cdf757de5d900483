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

#include "wagan/csv.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>

#include "wagan/error.hpp"

namespace wagan {
namespace {

TEST(Csv, ParsesHeaderAndValues) {
  std::istringstream in("a,b\n1,2.5\r\n-3e2, 4\n\n");
  const CsvTable t = parse_csv(in, "mem");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.values.rows(), 2);
  EXPECT_DOUBLE_EQ(t.values(1, 0), -300.0);
  EXPECT_DOUBLE_EQ(t.values(1, 1), 4.0);
}

TEST(Csv, ErrorsNameLineAndColumn) {
  std::istringstream in("x,y\n1,2\n3,abc\n");
  try {
    parse_csv(in, "data.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2 (y)"), std::string::npos) << msg;
  }
  std::istringstream ragged("x,y\n1\n");
  EXPECT_THROW(parse_csv(ragged, "mem"), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(parse_csv(empty, "mem"), ParseError);
  std::istringstream nan("x\nnan\n");
  EXPECT_THROW(parse_csv(nan, "mem"), ParseError);
  EXPECT_THROW(read_csv("/nonexistent/file.csv"), IoError);
}

TEST(Csv, WriteReadRoundTripIsExact) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1e3);
  Eigen::MatrixXd m(50, 3);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal(rng);
  m(0, 0) = std::numeric_limits<double>::denorm_min();
  m(1, 1) = 0.1;
  std::stringstream io;
  write_csv(io, default_header(3), m);
  const CsvTable back = parse_csv(io, "mem");
  EXPECT_EQ(back.header, (std::vector<std::string>{"col_1", "col_2", "col_3"}));
  EXPECT_EQ(back.values, m);
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
}

}  // namespace
}  // namespace wagan
