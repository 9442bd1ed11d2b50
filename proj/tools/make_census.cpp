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

// Writes the census-like sample table: make_census <path> [rows] [seed]

#include <iostream>
#include <string>

#include "census.hpp"
#include "driftgen/ingest.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_census <path> [rows] [seed]\n";
    return 2;
  }
  try {
    std::size_t rows = argc > 2 ? std::stoull(argv[2]) : 30000;
    std::uint64_t seed = argc > 3 ? std::stoull(argv[3]) : 1;
    driftgen::write_table(driftgen::testing::census_table(rows, seed), argv[1]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
