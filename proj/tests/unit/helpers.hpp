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

#pragma once

#include <string>
#include <vector>

#include "driftgen/table.hpp"
#include "driftgen/common.hpp"

namespace driftgen::test {

inline Column numeric_column(std::string name, const std::vector<double>& xs) {
  Column c{std::move(name), {}};
  for (double x : xs) c.values.emplace_back(format_number(x));
  return c;
}

inline Column text_column(std::string name, const std::vector<std::string>& xs) {
  Column c{std::move(name), {}};
  for (const auto& x : xs) c.values.emplace_back(x);
  return c;
}

inline std::vector<double> iota_values(double from, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(from + static_cast<double>(i));
  return out;
}

}  // namespace driftgen::test
