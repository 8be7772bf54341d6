#pragma once

// csdnsim/provider.hpp — surrogate servers and replica bookkeeping.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csdnsim/auction.hpp"
#include "csdnsim/econ.hpp"
#include "csdnsim/money.hpp"

namespace csdnsim {

struct Replica {
  ContentId content;
  double size_mb{0.0};
  double placed_at{0.0};
  double expires_at{0.0};
  Money payment{0};  // what the holder was paid to take it
  uint64_t vo{0};
};

struct SurrogateServer {
  ProviderId provider;
  LocationId region;
  double capacity_mb{0.0};  // shareable replica space
  double used_mb{0.0};
  double unit_storage_cost{0.0};  // currency per MB
  double upload_kbps{0.0};
  double download_kbps{0.0};
  double capacity_threshold{0.0};  // K, load units
  double eagerness{0.0};           // signed bid shading factor
  std::vector<Replica> replicas;
  // content-id ranges (inclusive) this provider serves natively; origin
  // content lives outside the shareable space and never expires
  std::vector<std::pair<int64_t, int64_t>> origin_ranges;

  double free_mb() const { return capacity_mb - used_mb; }

  bool is_origin_of(ContentId c) const {
    for (const auto& [lo, hi] : origin_ranges)
      if (c.value >= lo && c.value <= hi) return true;
    return false;
  }

  const Replica* replica_of(ContentId c) const {
    for (const auto& r : replicas)
      if (r.content == c) return &r;
    return nullptr;
  }

  bool holds(ContentId c) const { return is_origin_of(c) || replica_of(c) != nullptr; }

  double replica_total_mb() const {
    double sum = 0.0;
    for (const auto& r : replicas) sum += r.size_mb;
    return sum;
  }
};

using ErLookup = std::function<double(ContentId)>;

struct EvictionPlan {
  std::vector<ContentId> evict;
  double er_old{0.0};  // expected revenue forgone by the eviction
  bool feasible{true};
};

// Chooses which held replicas to delete to make room for an incoming one:
// cheapest expected revenue first, larger replicas first on ties. The summed
// forgone revenue prices ER_old in the seller's utility.
inline EvictionPlan plan_eviction(const SurrogateServer& server, double need_mb,
                                  const ErLookup& er_of) {
  EvictionPlan plan;
  if (server.free_mb() >= need_mb) return plan;

  std::vector<const Replica*> held;
  for (const auto& r : server.replicas) held.push_back(&r);
  std::sort(held.begin(), held.end(), [&](const Replica* a, const Replica* b) {
    const double ea = er_of(a->content), eb = er_of(b->content);
    if (ea != eb) return ea < eb;
    if (a->size_mb != b->size_mb) return a->size_mb > b->size_mb;
    return a->content < b->content;
  });

  double freed = server.free_mb();
  for (const Replica* r : held) {
    if (freed >= need_mb) break;
    plan.evict.push_back(r->content);
    plan.er_old += er_of(r->content);
    freed += r->size_mb;
  }
  plan.feasible = freed >= need_mb;
  return plan;
}

inline bool remove_replica(SurrogateServer& server, ContentId c) {
  for (auto it = server.replicas.begin(); it != server.replicas.end(); ++it) {
    if (it->content == c) {
      server.used_mb -= it->size_mb;
      server.replicas.erase(it);
      return true;
    }
  }
  return false;
}

// Applies an eviction plan for the given need and returns the evicted ids.
// Callers validate feasibility through plan_eviction first; an infeasible
// need here means the seller should never have been considered eligible.
inline std::vector<ContentId> evict_for_replica(SurrogateServer& server, double need_mb,
                                                const ErLookup& er_of) {
  const EvictionPlan plan = plan_eviction(server, need_mb, er_of);
  if (!plan.feasible)
    throw std::logic_error("evict_for_replica: seller cannot free enough space");
  for (const ContentId c : plan.evict) remove_replica(server, c);
  return plan.evict;
}

inline void place_replica(SurrogateServer& server, Replica replica) {
  if (server.free_mb() < replica.size_mb)
    throw std::logic_error("place_replica: insufficient free space");
  if (!(replica.expires_at > replica.placed_at))
    throw std::invalid_argument("place_replica: expiry must follow placement");
  server.used_mb += replica.size_mb;
  server.replicas.push_back(std::move(replica));
}

}  // namespace csdnsim
