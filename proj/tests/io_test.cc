// Copyright 2026 The MSDRO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <sstream>

#include "common/error.h"
#include "io/csv.h"

namespace msdro::io {
namespace {

ErrorCode CodeOf(const std::string& text, bool quality) {
  std::istringstream in(text);
  try {
    if (quality) {
      ReadQuality(in);
    } else {
      ReadDataset(in);
    }
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

TEST(Dataset, RoundTrip) {
  dro::MultiDataset data;
  data.samples = {{0.1, -0.2, 1e-17}, {0.3, 0.4, 0.123456789012345678}};
  std::ostringstream out;
  WriteDataset(out, data);
  EXPECT_EQ(out.str().substr(0, 10), "xi_1,xi_2\n");
  std::istringstream in(out.str());
  dro::MultiDataset back = ReadDataset(in);
  EXPECT_EQ(back.samples, data.samples);
  EXPECT_TRUE(back.epsilon.empty());
}

TEST(Dataset, UnequalColumns) {
  std::istringstream in("xi_1,xi_2\n1,2\n3,\n\n5,\n");
  dro::MultiDataset data = ReadDataset(in);
  EXPECT_EQ(data.samples[0], (std::vector<double>{1, 3, 5}));
  EXPECT_EQ(data.samples[1], (std::vector<double>{2}));
  std::ostringstream out;
  WriteDataset(out, data);
  EXPECT_EQ(out.str(), "xi_1,xi_2\n1,2\n3,\n5,\n");
}

TEST(Dataset, Malformed) {
  EXPECT_EQ(CodeOf("", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("x1,x2\n1,2\n", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("xi_1,xi_3\n1,2\n", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("xi_1\n1\nabc\n", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("xi_1\n1,2\n", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("xi_1,xi_2\n1,\n2,3\n", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("xi_1\n", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("xi_1\nnan\n", false), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("xi_1\n 0.5 \n", false), ErrorCode::kOk);
}

TEST(Quality, RoundTripAndOrder) {
  std::ostringstream out;
  WriteQuality(out, {0.05, 1.0});
  std::istringstream in(out.str());
  EXPECT_EQ(ReadQuality(in), (std::vector<double>{0.05, 1.0}));
  std::istringstream shuffled("feature,epsilon\n2,0.1\n1,0.2\n");
  EXPECT_EQ(ReadQuality(shuffled), (std::vector<double>{0.2, 0.1}));
}

TEST(Quality, Malformed) {
  EXPECT_EQ(CodeOf("feature,eps\n1,0.1\n", true), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("feature,epsilon\n1,0.1\n1,0.2\n", true), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("feature,epsilon\n2,0.1\n", true), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("feature,epsilon\n0,0.1\n", true), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("feature,epsilon\n1.5,0.1\n", true), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("feature,epsilon\n1,-0.1\n", true), ErrorCode::kInput);
  EXPECT_EQ(CodeOf("feature,epsilon\n", true), ErrorCode::kParse);
}

}  // namespace
}  // namespace msdro::io
