#pragma once

// csdnsim/workload.hpp — request stream generation.
//
// Two request models: Zipf-like popularity over a seeded rank permutation,
// and a reflected random walk over the content-id space. Flash crowds and
// scheduled events overlay extra regional streams on the base load. All
// draws come from the deterministic Rng, so a seed fixes the whole stream.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "csdnsim/econ.hpp"
#include "csdnsim/rng.hpp"

namespace csdnsim {

struct WorkloadSpec {
  enum class Kind { kZipf, kWalk };
  Kind kind{Kind::kZipf};
  double zipf_mu{0.8};      // used by the Zipf kind
  int64_t walk_start{1};    // c0, used by the walk kind
  int walk_max_step{1};     // S, used by the walk kind
  double arrival_rate{1.0}; // requests per second across all regions
  std::vector<double> region_weights;
  double duration_s{0.0};
};

struct FlashCrowdEvent {
  double start_s{0.0};
  double duration_s{0.0};
  LocationId region{0};
  int64_t content_lo{1}, content_hi{1};  // inclusive id range the crowd asks for
  double rate_multiplier{2.0};           // F > 1
};

struct ScheduledEvent {
  double start_s{0.0};
  double duration_s{0.0};
  LocationId region{0};
  int64_t content_lo{1}, content_hi{1};
  double advance_notice_s{0.0};  // how far ahead the event is known
  double rate_multiplier{2.0};   // extra load while the event runs
};

namespace detail {

inline std::vector<double> cumulative(const std::vector<double>& weights) {
  std::vector<double> cum(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cum[i] = total;
  }
  return cum;
}

}  // namespace detail

// Content ids drawn with probability proportional to 1/rank^mu, where the
// rank order is a seeded permutation of the id space.
inline std::vector<ContentRequest> generate_zipf_workload(const WorkloadSpec& spec,
                                                          int64_t total_content, uint64_t seed) {
  if (total_content < 1) throw std::invalid_argument("zipf workload: no content");
  Rng rng(seed, 1);

  std::vector<int64_t> rank_to_content(static_cast<std::size_t>(total_content));
  std::iota(rank_to_content.begin(), rank_to_content.end(), int64_t{1});
  for (std::size_t i = rank_to_content.size(); i > 1; --i)
    std::swap(rank_to_content[i - 1],
              rank_to_content[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int64_t>(i) - 1))]);

  std::vector<double> mass(static_cast<std::size_t>(total_content));
  for (std::size_t r = 0; r < mass.size(); ++r)
    mass[r] = std::pow(static_cast<double>(r + 1), -spec.zipf_mu);
  const auto cum_mass = detail::cumulative(mass);
  const auto cum_regions = detail::cumulative(spec.region_weights);

  std::vector<ContentRequest> out;
  double t = 0.0;
  while (true) {
    t += rng.exponential(spec.arrival_rate);
    if (t >= spec.duration_s) break;
    const std::size_t rank = rng.categorical(cum_mass);
    const auto region = static_cast<int32_t>(rng.categorical(cum_regions));
    out.push_back({{rank_to_content[rank]}, {region}, t});
  }
  return out;
}

// Content follows a random walk with uniform integer steps in [-S, S],
// reflected at the boundaries of [1, C] so the step distribution stays
// symmetric near the edges.
inline std::vector<ContentRequest> generate_walk_workload(const WorkloadSpec& spec,
                                                          int64_t total_content, uint64_t seed) {
  if (spec.walk_start < 1 || spec.walk_start > total_content)
    throw std::invalid_argument("walk workload: start outside [1, C]");
  Rng rng(seed, 2);
  const auto cum_regions = detail::cumulative(spec.region_weights);

  std::vector<ContentRequest> out;
  int64_t position = spec.walk_start;
  double t = 0.0;
  while (true) {
    t += rng.exponential(spec.arrival_rate);
    if (t >= spec.duration_s) break;
    const auto region = static_cast<int32_t>(rng.categorical(cum_regions));
    out.push_back({{position}, {region}, t});
    int64_t next = position + rng.uniform_int(-spec.walk_max_step, spec.walk_max_step);
    while (next < 1 || next > total_content) {
      if (next < 1) next = 2 - next;
      if (next > total_content) next = 2 * total_content - next;
    }
    position = next;
  }
  return out;
}

// Overlays the extra regional stream a crowd brings: rate scaled by
// (multiplier - 1) on top of the region's base share, content restricted to
// the crowd's range. The base stream outside the window is untouched.
inline std::vector<ContentRequest> inject_flash_crowd(std::vector<ContentRequest> stream,
                                                      const FlashCrowdEvent& event,
                                                      const WorkloadSpec& spec, uint64_t seed,
                                                      uint64_t stream_tag) {
  const double region_weight =
      event.region.value < static_cast<int32_t>(spec.region_weights.size())
          ? spec.region_weights[static_cast<std::size_t>(event.region.value)]
          : 0.0;
  const double extra_rate = (event.rate_multiplier - 1.0) * spec.arrival_rate * region_weight;
  if (!(extra_rate > 0.0)) return stream;

  Rng rng(seed, stream_tag);
  double t = event.start_s;
  const double end = event.start_s + event.duration_s;
  std::vector<ContentRequest> extra;
  while (true) {
    t += rng.exponential(extra_rate);
    if (t >= end || t >= spec.duration_s) break;
    extra.push_back({{rng.uniform_int(event.content_lo, event.content_hi)}, event.region, t});
  }

  std::vector<ContentRequest> merged;
  merged.reserve(stream.size() + extra.size());
  std::merge(stream.begin(), stream.end(), extra.begin(), extra.end(), std::back_inserter(merged),
             [](const ContentRequest& a, const ContentRequest& b) { return a.time < b.time; });
  return merged;
}

}  // namespace csdnsim
