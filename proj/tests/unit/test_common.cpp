// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "driftgen/common.hpp"

namespace driftgen {
namespace {

TEST(Numbers, ParseIsStrict) {
  EXPECT_EQ(parse_number("42"), 42.0);
  EXPECT_EQ(parse_number(" -1.5 "), -1.5);
  EXPECT_EQ(parse_number("+3"), 3.0);
  EXPECT_EQ(parse_number("1e3"), 1000.0);
  EXPECT_FALSE(parse_number(""));
  EXPECT_FALSE(parse_number("12abc"));
  EXPECT_FALSE(parse_number("inf"));
  EXPECT_FALSE(parse_number("nan"));
}

TEST(Numbers, FormatRoundTrips) {
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.5), "2.5");
  for (double v : {0.1, 1.0 / 3.0, 123456.789, -7e-9, 1e300}) EXPECT_EQ(parse_number(format_number(v)), v);
  EXPECT_EQ(format_fixed(0.2, 3), "0.200");
}

TEST(Datetimes, ParseAndFormat) {
  auto d = parse_datetime("1970-01-02");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->epoch_seconds, 86400.0);
  EXPECT_EQ(d->format, DatetimeFormat::kDate);
  auto t = parse_datetime("2000-03-01 12:30:15");
  ASSERT_TRUE(t);
  EXPECT_EQ(format_datetime(t->epoch_seconds, DatetimeFormat::kDateTime), "2000-03-01 12:30:15");
  EXPECT_EQ(format_datetime(t->epoch_seconds, DatetimeFormat::kIsoT), "2000-03-01T12:30:15");
  EXPECT_FALSE(parse_datetime("2001-02-29"));
  EXPECT_FALSE(parse_datetime("2001-13-01"));
  EXPECT_FALSE(parse_datetime("yesterday"));
}

TEST(Seeds, SubstreamsAreStableAndDistinct) {
  EXPECT_EQ(substream(7, "a", 1), substream(7, "a", 1));
  EXPECT_NE(substream(7, "a", 1), substream(7, "a", 2));
  EXPECT_NE(substream(7, "a"), substream(8, "a"));
  EXPECT_NE(substream(7, "ab"), substream(7, "ba"));
  auto r1 = make_rng(1, "x");
  auto r2 = make_rng(1, "x");
  EXPECT_EQ(r1(), r2());
  EXPECT_EQ(hex64(255), "00000000000000ff");
}

}  // namespace
}  // namespace driftgen
