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
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "driftgen/common.hpp"
#include "driftgen/workloads.hpp"

namespace driftgen {

enum class PatternKind { kUniform, kPeriodic, kTrend, kLongTail };

inline std::string to_string(PatternKind k) {
  switch (k) {
    case PatternKind::kUniform: return "uniform";
    case PatternKind::kPeriodic: return "periodic";
    case PatternKind::kTrend: return "trend";
    case PatternKind::kLongTail: return "longtail";
  }
  return "";
}

inline PatternKind pattern_kind_from_string(std::string_view s) {
  if (s == "uniform") return PatternKind::kUniform;
  if (s == "periodic") return PatternKind::kPeriodic;
  if (s == "trend") return PatternKind::kTrend;
  if (s == "longtail" || s == "long-tail" || s == "long_tail") return PatternKind::kLongTail;
  throw Error("unknown temporal pattern '" + std::string(s) + "'");
}

/// Arrival-time law over [0, window_seconds]. Unset trend/long-tail
/// parameters default to start_rate = 0, end_rate = 2n/window and
/// decay_rate = 8/window.
struct TemporalPattern {
  PatternKind kind = PatternKind::kUniform;
  double window_seconds = 300.0;
  double period_seconds = 20.0;
  std::size_t burst_size = 100;
  std::optional<double> start_rate;
  std::optional<double> end_rate;
  std::optional<double> decay_rate;
  /// Quantile mode is deterministic; sampled mode draws sorted uniforms from the seed.
  bool sampled = false;
};

namespace detail {

inline std::vector<double> probability_levels(std::size_t n, bool sampled, std::uint64_t seed) {
  std::vector<double> u(n);
  if (sampled) {
    auto rng = make_rng(seed, "timestamps");
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (auto& x : u) x = dist(rng);
    std::sort(u.begin(), u.end());
  } else {
    for (std::size_t i = 0; i < n; ++i) u[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  return u;
}

}  // namespace detail

/// Timestamps in seconds from the window start, sorted ascending, all in [0, window].
inline std::vector<double> gen_timestamps(const TemporalPattern& p, std::size_t n, std::uint64_t seed = 0) {
  if (n == 0) return {};
  const double w = p.window_seconds;
  if (!(w > 0.0) || !std::isfinite(w)) throw Error("window_seconds must be > 0");
  std::vector<double> out;
  out.reserve(n);

  switch (p.kind) {
    case PatternKind::kUniform: {
      for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<double>(i) * w / static_cast<double>(n));
      break;
    }
    case PatternKind::kPeriodic: {
      if (!(p.period_seconds > 0.0) || p.period_seconds > w) throw Error("periodic pattern needs 0 < period <= window");
      if (p.burst_size < 1) throw Error("periodic pattern needs burst_size >= 1");
      std::size_t bursts = (n + p.burst_size - 1) / p.burst_size;
      double spread = 0.1 * p.period_seconds;
      if (static_cast<double>(bursts - 1) * p.period_seconds + spread > w)
        throw Error("periodic pattern: " + std::to_string(bursts) + " bursts do not fit in the window");
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t b = i / p.burst_size;
        std::size_t j = i % p.burst_size;
        out.push_back(static_cast<double>(b) * p.period_seconds +
                      static_cast<double>(j) * spread / static_cast<double>(p.burst_size));
      }
      break;
    }
    case PatternKind::kTrend: {
      double a = p.start_rate.value_or(0.0);
      double b = p.end_rate.value_or(2.0 * static_cast<double>(n) / w);
      if (a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0)) throw Error("trend pattern needs non-negative rates, not both 0");
      // cumulative intensity L(t) = a t + (b - a) t^2 / (2w)
      double c = (b - a) / (2.0 * w);
      double total = a * w + c * w * w;
      for (double u : detail::probability_levels(n, p.sampled, seed)) {
        double y = u * total;
        double t = c == 0.0 ? y / a : 2.0 * y / (a + std::sqrt(a * a + 4.0 * c * y));
        out.push_back(std::clamp(t, 0.0, w));
      }
      break;
    }
    case PatternKind::kLongTail: {
      double lambda = p.decay_rate.value_or(8.0 / w);
      if (!(lambda > 0.0)) throw Error("long-tail pattern needs decay_rate > 0");
      // F(t) = (1 - e^{-lambda t}) / (1 - e^{-lambda w})
      double mass = -std::expm1(-lambda * w);
      for (double u : detail::probability_levels(n, p.sampled, seed))
        out.push_back(std::clamp(-std::log1p(-u * mass) / lambda, 0.0, w));
      break;
    }
  }
  return out;
}

/// Assigns base_epoch + timestamps[i] to instance i.
inline Workload attach(Workload instances, std::span<const double> timestamps, double base_epoch = 0.0) {
  if (instances.size() != timestamps.size())
    throw Error("attach: " + std::to_string(instances.size()) + " instances but " + std::to_string(timestamps.size()) +
                " timestamps");
  for (std::size_t i = 0; i < instances.size(); ++i) instances[i].timestamp = base_epoch + timestamps[i];
  return instances;
}

/// Extension point for arrival laws beyond the built-in four.
using PatternPlugin = std::function<std::vector<double>(double window_seconds, std::size_t n, std::uint64_t seed)>;

class PatternRegistry {
 public:
  void add(std::string name, PatternPlugin fn) { plugins_[std::move(name)] = std::move(fn); }

  std::vector<double> generate(const std::string& name, double window_seconds, std::size_t n, std::uint64_t seed) const {
    auto it = plugins_.find(name);
    if (it == plugins_.end()) {
      TemporalPattern p;
      p.kind = pattern_kind_from_string(name);
      p.window_seconds = window_seconds;
      return gen_timestamps(p, n, seed);
    }
    auto ts = it->second(window_seconds, n, seed);
    if (ts.size() != n) throw Error("pattern plugin '" + name + "' returned the wrong number of timestamps");
    std::sort(ts.begin(), ts.end());
    for (auto& t : ts) t = std::clamp(t, 0.0, window_seconds);
    return ts;
  }

 private:
  std::map<std::string, PatternPlugin> plugins_;
};

}  // namespace driftgen
