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

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

namespace driftgen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotImplemented : public Error {
 public:
  using Error::Error;
};

using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Derives an independent seed from a master seed and a chain of labels.
/// The same (seed, labels...) always yields the same substream, so per-column
/// or per-phase generation is order-independent.
template <typename... Labels>
std::uint64_t substream(std::uint64_t seed, const Labels&... labels) {
  std::uint64_t h = detail::splitmix64(seed);
  auto mix = [&h](const auto& label) {
    using L = std::decay_t<decltype(label)>;
    if constexpr (std::is_integral_v<L>) {
      h = detail::splitmix64(h ^ detail::splitmix64(static_cast<std::uint64_t>(label) + 0x51ed27ULL));
    } else {
      h = detail::splitmix64(h ^ detail::fnv1a(std::string_view(label)));
    }
  };
  (mix(labels), ...);
  return h;
}

template <typename... Labels>
Rng make_rng(std::uint64_t seed, const Labels&... labels) {
  return Rng(substream(seed, labels...));
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Numbers

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Strict decimal parse; the whole (trimmed) string must be consumed.
inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

/// Shortest round-trip rendering; integral values print without a fraction.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (std::abs(v) < 1e15 && v == std::floor(v)) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), static_cast<long long>(v));
    return std::string(buf.data(), ptr);
  }
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

/// Fixed-point rendering used for timestamps in sidecars.
inline std::string format_fixed(double v, int decimals) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
  return std::string(buf.data(), ptr);
}

// ---------------------------------------------------------------------------
// Datetimes. Accepted forms: YYYY-MM-DD, YYYY-MM-DD HH:MM:SS, YYYY-MM-DDTHH:MM:SS.

enum class DatetimeFormat { kDate, kDateTime, kIsoT };

struct ParsedDatetime {
  double epoch_seconds;
  DatetimeFormat format;
};

namespace detail {

inline std::optional<int> parse_fixed_digits(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) return std::nullopt;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace detail

inline std::optional<ParsedDatetime> parse_datetime(std::string_view s) {
  using namespace std::chrono;
  s = trim(s);
  if (s.size() != 10 && s.size() != 19) return std::nullopt;
  if (s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = detail::parse_fixed_digits(s, 0, 4);
  auto m = detail::parse_fixed_digits(s, 5, 2);
  auto d = detail::parse_fixed_digits(s, 8, 2);
  if (!y || !m || !d) return std::nullopt;
  year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  double days = static_cast<double>(sys_days{ymd}.time_since_epoch().count());
  if (s.size() == 10) return ParsedDatetime{days * 86400.0, DatetimeFormat::kDate};

  if ((s[10] != ' ' && s[10] != 'T') || s[13] != ':' || s[16] != ':') return std::nullopt;
  auto hh = detail::parse_fixed_digits(s, 11, 2);
  auto mm = detail::parse_fixed_digits(s, 14, 2);
  auto ss = detail::parse_fixed_digits(s, 17, 2);
  if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 59) return std::nullopt;
  double secs = days * 86400.0 + *hh * 3600.0 + *mm * 60.0 + *ss;
  return ParsedDatetime{secs, s[10] == 'T' ? DatetimeFormat::kIsoT : DatetimeFormat::kDateTime};
}

inline std::string format_datetime(double epoch_seconds, DatetimeFormat fmt) {
  using namespace std::chrono;
  auto total = static_cast<long long>(std::llround(epoch_seconds));
  long long day_count = total >= 0 ? total / 86400 : -((-total + 86399) / 86400);
  long long rem = total - day_count * 86400;
  year_month_day ymd{sys_days{days{day_count}}};
  char buf[64];
  int y = static_cast<int>(ymd.year());
  unsigned mo = static_cast<unsigned>(ymd.month());
  unsigned d = static_cast<unsigned>(ymd.day());
  if (fmt == DatetimeFormat::kDate) {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, mo, d);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u%c%02lld:%02lld:%02lld", y, mo, d,
                  fmt == DatetimeFormat::kIsoT ? 'T' : ' ', rem / 3600, (rem / 60) % 60, rem % 60);
  }
  return buf;
}

inline std::string to_string(DatetimeFormat f) {
  switch (f) {
    case DatetimeFormat::kDate: return "date";
    case DatetimeFormat::kDateTime: return "datetime";
    case DatetimeFormat::kIsoT: return "iso8601";
  }
  return "date";
}

inline DatetimeFormat datetime_format_from_string(std::string_view s) {
  if (s == "date") return DatetimeFormat::kDate;
  if (s == "datetime") return DatetimeFormat::kDateTime;
  if (s == "iso8601") return DatetimeFormat::kIsoT;
  throw Error("unknown datetime format '" + std::string(s) + "'");
}

}  // namespace driftgen
