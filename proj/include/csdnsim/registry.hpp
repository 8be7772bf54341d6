#pragma once

// csdnsim/registry.hpp — the discovery board.
//
// Sellers publish resource snapshots, buyers publish requirements. Discovery
// works off published snapshots; eligibility is re-verified against live
// state at placement time.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "csdnsim/auction.hpp"
#include "csdnsim/provider.hpp"

namespace csdnsim {

struct ServiceAd {
  ProviderId provider;
  LocationId region;
  double free_mb{0.0};  // capacity minus used at publication time
  double upload_kbps{0.0};
  double download_kbps{0.0};
  std::optional<Money> ask_hint;
  double published_at{0.0};
};

struct RequirementAd {
  ProviderId buyer;
  AuctionPolicy policy;
  double published_at{0.0};
};

class ServiceRegistry {
 public:
  static ServiceAd snapshot(const SurrogateServer& s, double now) {
    return {s.provider, s.region, s.free_mb(), s.upload_kbps, s.download_kbps, std::nullopt, now};
  }

  void upsert_service_ad(const ServiceAd& ad) { service_ads_[ad.provider] = ad; }

  // One active requirement per (buyer, content); duplicates are rejected.
  bool publish_requirement(RequirementAd ad) {
    const auto key = std::make_pair(ad.buyer, ad.policy.content.value);
    return requirements_.emplace(key, std::move(ad)).second;
  }

  bool requirement_active(const ProviderId& buyer, ContentId content) const {
    return requirements_.count({buyer, content.value}) != 0;
  }

  void remove_requirement(const ProviderId& buyer, ContentId content) {
    requirements_.erase({buyer, content.value});
  }

  // Drops requirements whose time frame has fully elapsed; returns them.
  std::vector<RequirementAd> expire_requirements(double now) {
    std::vector<RequirementAd> expired;
    for (auto it = requirements_.begin(); it != requirements_.end();) {
      if (it->second.published_at + it->second.policy.duration_s <= now) {
        expired.push_back(it->second);
        it = requirements_.erase(it);
      } else {
        ++it;
      }
    }
    return expired;
  }

  // Published sellers able to meet the policy's storage and transfer-rate
  // requirements, excluding the buyer and anyone already holding the
  // content. Sellers in preferred regions come first; provider id orders the
  // rest, so the result is reproducible.
  std::vector<ServiceAd> discover_sellers(const AuctionPolicy& policy, const ProviderId& buyer,
                                          std::span<const ProviderId> excluded_holders) const {
    std::vector<ServiceAd> preferred, others;
    for (const auto& [id, ad] : service_ads_) {
      if (id == buyer) continue;
      bool excluded = false;
      for (const auto& h : excluded_holders) excluded |= h == id;
      if (excluded) continue;
      if (ad.free_mb < policy.storage_mb) continue;
      if (ad.upload_kbps < policy.upload_kbps) continue;
      if (ad.download_kbps < policy.download_kbps) continue;
      bool in_preferred = false;
      for (const auto& r : policy.preferred_regions) in_preferred |= r == ad.region;
      (in_preferred ? preferred : others).push_back(ad);
    }
    preferred.insert(preferred.end(), others.begin(), others.end());
    return preferred;
  }

  const std::map<ProviderId, ServiceAd>& service_ads() const { return service_ads_; }
  std::size_t requirement_count() const { return requirements_.size(); }

 private:
  std::map<ProviderId, ServiceAd> service_ads_;
  std::map<std::pair<ProviderId, int64_t>, RequirementAd> requirements_;
};

}  // namespace csdnsim
