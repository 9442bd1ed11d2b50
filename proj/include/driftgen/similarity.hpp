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

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <tuple>
#include <vector>

namespace driftgen {

struct MatchingBlock {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};

namespace detail {

/// Longest common substring of a[alo,ahi) and b[blo,bhi). Among equally long
/// matches the one starting earliest in a wins, then earliest in b.
inline MatchingBlock longest_match(std::string_view a, std::string_view b, std::size_t alo, std::size_t ahi,
                                   std::size_t blo, std::size_t bhi) {
  MatchingBlock best{alo, blo, 0};
  std::vector<std::size_t> prev(bhi - blo + 1, 0), cur(bhi - blo + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    std::fill(cur.begin(), cur.end(), 0);
    for (std::size_t j = blo; j < bhi; ++j) {
      if (a[i] != b[j]) continue;
      std::size_t k = prev[j - blo] + 1;  // prev is indexed by j - blo + 1 for j - 1
      cur[j - blo + 1] = k;
      if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace detail

/// Ratcliff/Obershelp matching blocks: recursively take the longest common
/// substring and recurse on both sides of it. Sorted by position in `a`.
inline std::vector<MatchingBlock> matching_blocks(std::string_view a, std::string_view b) {
  std::vector<MatchingBlock> blocks;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> todo{{0, a.size(), 0, b.size()}};
  while (!todo.empty()) {
    auto [alo, ahi, blo, bhi] = todo.back();
    todo.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    auto m = detail::longest_match(a, b, alo, ahi, blo, bhi);
    if (m.size == 0) continue;
    blocks.push_back(m);
    todo.emplace_back(alo, m.a, blo, m.b);
    todo.emplace_back(m.a + m.size, ahi, m.b + m.size, bhi);
  }
  std::sort(blocks.begin(), blocks.end(), [](auto& x, auto& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  return blocks;
}

/// 2M / T where M is the total size of the matching blocks and T = |a| + |b|.
/// Evaluated with the arguments in sorted order so the result is symmetric.
inline double name_similarity(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  if (b < a) std::swap(a, b);
  std::size_t matched = 0;
  for (const auto& m : matching_blocks(a, b)) matched += m.size;
  return 2.0 * static_cast<double>(matched) / static_cast<double>(a.size() + b.size());
}

}  // namespace driftgen
