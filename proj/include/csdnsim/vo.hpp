#pragma once

// csdnsim/vo.hpp — virtual organization lifecycle.
//
// A VO binds one buyer to the auction winners that hold its replica: formed
// after an award, possibly rearranged by renegotiation, disbanded on expiry.
// Lifecycle is a DAG — a VO is rearranged into at most one successor and is
// never live again after disbanding.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csdnsim/auction.hpp"
#include "csdnsim/policy.hpp"
#include "csdnsim/provider.hpp"

namespace csdnsim {

enum class VoKind { kShortTerm, kLongTerm };

inline const char* to_string(VoKind k) {
  return k == VoKind::kShortTerm ? "short-term" : "long-term";
}

enum class VoState { kLive, kDisbanded };

enum class DisbandReason { kExpired, kRearranged, kNoLongerBeneficial };

inline const char* to_string(DisbandReason r) {
  switch (r) {
    case DisbandReason::kExpired: return "expired";
    case DisbandReason::kRearranged: return "rearranged";
    case DisbandReason::kNoLongerBeneficial: return "no-longer-beneficial";
  }
  return "?";
}

struct VirtualOrganization {
  uint64_t id{0};
  VoKind kind{VoKind::kShortTerm};
  ProviderId buyer;
  ContentId content;
  std::vector<Winner> sellers;  // winners with the payment each received
  double formed_at{0.0};
  double expires_at{0.0};
  std::vector<PolicyRule> policy_set;
  VoState state{VoState::kLive};
  std::optional<uint64_t> rearranged_into;
  std::optional<DisbandReason> disband_reason;
};

struct PlacedReplica {
  ProviderId provider;
  ContentId content;
  double size_mb{0.0};
  Money payment{0};
  double expires_at{0.0};
  std::vector<ContentId> evicted;  // what had to go to make room
};

struct FormResult {
  std::optional<uint64_t> vo_id;  // absent when no winner could be placed
  std::vector<PlacedReplica> placed;
  std::vector<ProviderId> dropped;  // winners whose space vanished since the ad
};

struct ReleasedReplica {
  ProviderId provider;
  ContentId content;
};

struct DisbandInfo {
  uint64_t vo_id{0};
  DisbandReason reason{DisbandReason::kExpired};
  std::vector<ReleasedReplica> released;
};

struct RearrangeResult {
  bool changed{false};
  std::optional<DisbandInfo> old_disbanded;
  FormResult fresh;  // meaningful only when changed
};

using ProviderTable = std::map<ProviderId, SurrogateServer>;

class VoLedger {
 public:
  // Places replicas on each winner and opens the organization. A winner
  // whose live free space no longer covers the requirement (even after its
  // eviction plan) is dropped rather than failing the formation.
  FormResult form(const ProviderId& buyer, const AuctionOutcome& outcome,
                  const AuctionPolicy& policy, VoKind kind, double now, ProviderTable& providers,
                  const ErLookup& er_of, std::vector<PolicyRule> policy_set = {}) {
    FormResult result;
    if (!outcome.awarded) return result;

    VirtualOrganization vo;
    vo.kind = kind;
    vo.buyer = buyer;
    vo.content = policy.content;
    vo.formed_at = now;
    vo.expires_at = now + policy.duration_s;
    vo.policy_set = std::move(policy_set);

    for (const auto& winner : outcome.winners) {
      auto it = providers.find(winner.seller);
      if (it == providers.end()) {
        result.dropped.push_back(winner.seller);
        continue;
      }
      SurrogateServer& server = it->second;
      const EvictionPlan plan = plan_eviction(server, policy.storage_mb, er_of);
      if (!plan.feasible) {
        result.dropped.push_back(winner.seller);
        continue;
      }
      std::vector<ContentId> evicted;
      if (!plan.evict.empty()) evicted = evict_for_replica(server, policy.storage_mb, er_of);
      place_replica(server, {policy.content, policy.storage_mb, now, vo.expires_at,
                             winner.payment, next_id_});
      result.placed.push_back({winner.seller, policy.content, policy.storage_mb, winner.payment,
                               vo.expires_at, std::move(evicted)});
      vo.sellers.push_back(winner);
    }

    if (vo.sellers.empty()) return result;
    vo.id = next_id_++;
    result.vo_id = vo.id;
    vos_.emplace(vo.id, std::move(vo));
    return result;
  }

  // Disbands every organization whose time frame has elapsed, in id order.
  std::vector<DisbandInfo> expire(double now, ProviderTable& providers) {
    std::vector<DisbandInfo> out;
    for (auto& [id, vo] : vos_) {
      if (vo.state != VoState::kLive || vo.expires_at > now) continue;
      out.push_back(disband(vo, DisbandReason::kExpired, providers));
    }
    return out;
  }

  // Applies a renegotiation outcome: a fresh award replaces the old seller
  // set for the remaining duration; a failed re-auction keeps the old
  // organization, except that a seller for whom holding stopped being
  // beneficial forces an early disband.
  RearrangeResult rearrange(uint64_t vo_id, const RenegotiationEvent& event,
                            const AuctionOutcome& fresh_outcome, const AuctionPolicy& fresh_policy,
                            VoKind kind, double now, ProviderTable& providers,
                            const ErLookup& er_of) {
    RearrangeResult result;
    auto it = vos_.find(vo_id);
    if (it == vos_.end() || it->second.state != VoState::kLive) return result;
    VirtualOrganization& old_vo = it->second;

    if (!fresh_outcome.awarded) {
      if (event.kind == RenegotiationKind::kNoLongerBeneficial) {
        result.changed = true;
        result.old_disbanded = disband(old_vo, DisbandReason::kNoLongerBeneficial, providers);
      }
      return result;
    }

    result.fresh = form(old_vo.buyer, fresh_outcome, fresh_policy, kind, now, providers, er_of,
                        old_vo.policy_set);
    if (!result.fresh.vo_id.has_value()) return result;  // nobody placeable: keep the old VO

    result.changed = true;
    result.old_disbanded = disband(old_vo, DisbandReason::kRearranged, providers);
    old_vo.rearranged_into = *result.fresh.vo_id;
    return result;
  }

  bool buyer_has_live(const ProviderId& buyer, ContentId content) const {
    for (const auto& [id, vo] : vos_)
      if (vo.state == VoState::kLive && vo.buyer == buyer && vo.content == content) return true;
    return false;
  }

  std::vector<const VirtualOrganization*> live() const {
    std::vector<const VirtualOrganization*> out;
    for (const auto& [id, vo] : vos_)
      if (vo.state == VoState::kLive) out.push_back(&vo);
    return out;
  }

  const VirtualOrganization* find(uint64_t id) const {
    auto it = vos_.find(id);
    return it == vos_.end() ? nullptr : &it->second;
  }

  const std::map<uint64_t, VirtualOrganization>& all() const { return vos_; }

 private:
  DisbandInfo disband(VirtualOrganization& vo, DisbandReason reason, ProviderTable& providers) {
    DisbandInfo info;
    info.vo_id = vo.id;
    info.reason = reason;
    for (const auto& winner : vo.sellers) {
      auto it = providers.find(winner.seller);
      if (it == providers.end()) continue;
      // release only this organization's replica; it may already be gone
      // through eviction
      auto& replicas = it->second.replicas;
      for (auto rit = replicas.begin(); rit != replicas.end(); ++rit) {
        if (rit->vo == vo.id) {
          it->second.used_mb -= rit->size_mb;
          replicas.erase(rit);
          info.released.push_back({winner.seller, vo.content});
          break;
        }
      }
    }
    vo.state = VoState::kDisbanded;
    vo.disband_reason = reason;
    return info;
  }

  std::map<uint64_t, VirtualOrganization> vos_;
  uint64_t next_id_{1};
};

}  // namespace csdnsim
