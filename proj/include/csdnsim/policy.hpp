#pragma once

// csdnsim/policy.hpp — rule repository and the formation gate.
//
// Rules constrain what a candidate organization may do: how much space a
// provider will share, which content may move, how long replicas may be
// held, and where. Absent applicable rules the default is to allow.

#include <span>
#include <string>
#include <vector>

#include "csdnsim/auction.hpp"
#include "csdnsim/econ.hpp"

namespace csdnsim {

enum class PolicyPredicate {
  kMaxShareableMb,
  kForbiddenContentRange,
  kMinDuration,
  kMaxDuration,
  kAllowedRegions,
};

inline const char* to_string(PolicyPredicate p) {
  switch (p) {
    case PolicyPredicate::kMaxShareableMb: return "max-shareable-mb";
    case PolicyPredicate::kForbiddenContentRange: return "forbidden-content-range";
    case PolicyPredicate::kMinDuration: return "min-duration";
    case PolicyPredicate::kMaxDuration: return "max-duration";
    case PolicyPredicate::kAllowedRegions: return "allowed-regions";
  }
  return "?";
}

enum class PolicyEffect { kAllow, kDeny };

struct PolicyRule {
  std::string name;
  std::string subject;  // provider id, or "*" for every participant
  PolicyPredicate predicate{PolicyPredicate::kMaxShareableMb};
  double bound_lo{0.0};              // single bound, or range low
  double bound_hi{0.0};              // range high
  std::vector<LocationId> regions;   // for allowed-regions
  PolicyEffect effect{PolicyEffect::kDeny};
};

// The formation request a decision point rules on.
struct VoCandidate {
  ProviderId buyer;
  ContentId content;
  double duration_s{0.0};
  double storage_mb{0.0};
  std::vector<std::pair<ProviderId, LocationId>> sellers;
};

struct PolicyDecision {
  bool allowed{true};
  std::vector<std::string> violated;  // names of every rule that failed
};

// Denies iff any applicable deny-effect rule is violated, and reports every
// violated rule rather than the first. Allow-effect rules never block.
inline PolicyDecision check_policies(const VoCandidate& candidate,
                                     std::span<const PolicyRule> rules) {
  PolicyDecision decision;
  for (const auto& rule : rules) {
    if (rule.effect != PolicyEffect::kDeny) continue;

    const bool organization_wide = rule.subject == "*";
    auto subject_is_participant = [&] {
      if (organization_wide || rule.subject == candidate.buyer) return true;
      for (const auto& [seller, region] : candidate.sellers)
        if (seller == rule.subject) return true;
      return false;
    };

    bool violated = false;
    switch (rule.predicate) {
      case PolicyPredicate::kMaxShareableMb:
        for (const auto& [seller, region] : candidate.sellers) {
          if (!organization_wide && seller != rule.subject) continue;
          if (candidate.storage_mb > rule.bound_lo) violated = true;
        }
        break;
      case PolicyPredicate::kForbiddenContentRange:
        violated = subject_is_participant() &&
                   candidate.content.value >= static_cast<int64_t>(rule.bound_lo) &&
                   candidate.content.value <= static_cast<int64_t>(rule.bound_hi);
        break;
      case PolicyPredicate::kMinDuration:
        violated = subject_is_participant() && candidate.duration_s < rule.bound_lo;
        break;
      case PolicyPredicate::kMaxDuration:
        violated = subject_is_participant() && candidate.duration_s > rule.bound_lo;
        break;
      case PolicyPredicate::kAllowedRegions:
        for (const auto& [seller, region] : candidate.sellers) {
          if (!organization_wide && seller != rule.subject) continue;
          bool in_allowed = false;
          for (const auto& r : rule.regions) in_allowed |= r == region;
          if (!in_allowed) violated = true;
        }
        break;
    }
    if (violated) {
      decision.allowed = false;
      decision.violated.push_back(rule.name.empty() ? to_string(rule.predicate) : rule.name);
    }
  }
  return decision;
}

}  // namespace csdnsim
