#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "csdnsim/policy.hpp"
#include "csdnsim/registry.hpp"
#include "csdnsim/vo.hpp"

using namespace csdnsim;

namespace {

Money cents(double v) { return Money::from_value(v); }

SurrogateServer make_server(const std::string& name, int region, double capacity,
                            double up = 5000.0, double down = 5000.0) {
  SurrogateServer s;
  s.provider = name;
  s.region = {region};
  s.capacity_mb = capacity;
  s.unit_storage_cost = 0.01;
  s.upload_kbps = up;
  s.download_kbps = down;
  s.capacity_threshold = 1000.0;
  return s;
}

AuctionPolicy policy_for(int64_t content, double storage = 100.0, double duration = 300.0) {
  return {.content = {content},
          .storage_mb = storage,
          .upload_kbps = 1000.0,
          .download_kbps = 1000.0,
          .preferred_regions = {},
          .duration_s = duration,
          .retry_count = 0};
}

AuctionOutcome awarded(std::vector<std::pair<std::string, double>> winners, double payment) {
  AuctionOutcome out;
  out.awarded = true;
  out.payment = cents(payment);
  for (const auto& [seller, bid] : winners) out.winners.push_back({seller, cents(bid), cents(payment)});
  return out;
}

const ErLookup kZeroEr = [](ContentId) { return 0.0; };

}  // namespace

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

TEST_CASE("requirement ads are unique per buyer and content, and expire") {
  ServiceRegistry registry;
  RequirementAd ad{"buyer", policy_for(7, 100.0, 50.0), 10.0};
  CHECK(registry.publish_requirement(ad));
  CHECK_FALSE(registry.publish_requirement(ad));
  CHECK(registry.requirement_active("buyer", {7}));

  CHECK(registry.expire_requirements(59.0).empty());
  const auto expired = registry.expire_requirements(60.0);
  REQUIRE(expired.size() == 1);
  CHECK(expired[0].buyer == "buyer");
  CHECK_FALSE(registry.requirement_active("buyer", {7}));
  CHECK(registry.publish_requirement(ad));
}

TEST_CASE("discovery filters on resources and never returns the buyer") {
  ServiceRegistry registry;
  auto big = make_server("big", 1, 500.0);
  auto small = make_server("small", 1, 50.0);
  auto slow = make_server("slow", 2, 500.0, 500.0, 500.0);
  auto self = make_server("self", 0, 500.0);
  for (const auto* s : {&big, &small, &slow, &self})
    registry.upsert_service_ad(ServiceRegistry::snapshot(*s, 0.0));

  const auto found = registry.discover_sellers(policy_for(7, 100.0), "self", {});
  REQUIRE(found.size() == 1);
  CHECK(found[0].provider == "big");
}

TEST_CASE("discovery puts preferred regions first") {
  ServiceRegistry registry;
  for (int i = 0; i < 4; ++i) {
    auto s = make_server("p" + std::to_string(i), i % 2, 500.0);
    registry.upsert_service_ad(ServiceRegistry::snapshot(s, 0.0));
  }
  auto policy = policy_for(7);
  policy.preferred_regions = {{1}};
  const auto found = registry.discover_sellers(policy, "buyer", {});
  REQUIRE(found.size() == 4);
  CHECK(found[0].provider == "p1");
  CHECK(found[1].provider == "p3");
  CHECK(found[2].provider == "p0");
  CHECK(found[3].provider == "p2");
}

TEST_CASE("discovery respects holder exclusions and thresholds under random rosters") {
  std::mt19937 gen(37);
  std::uniform_real_distribution<double> cap(10.0, 900.0), rate(100.0, 4000.0);
  for (int trial = 0; trial < 50; ++trial) {
    ServiceRegistry registry;
    std::map<std::string, SurrogateServer> servers;
    for (int i = 0; i < 8; ++i) {
      auto s = make_server("p" + std::to_string(i), i % 3, cap(gen), rate(gen), rate(gen));
      servers[s.provider] = s;
      registry.upsert_service_ad(ServiceRegistry::snapshot(s, 0.0));
    }
    auto policy = policy_for(7, 200.0);
    policy.upload_kbps = 1500.0;
    policy.download_kbps = 1500.0;
    const std::vector<ProviderId> holders{"p2", "p5"};
    const auto found = registry.discover_sellers(policy, "p0", holders);
    for (const auto& ad : found) {
      CHECK(ad.provider != "p0");
      CHECK(ad.provider != "p2");
      CHECK(ad.provider != "p5");
      CHECK(ad.free_mb >= policy.storage_mb);
      CHECK(ad.upload_kbps >= policy.upload_kbps);
      CHECK(ad.download_kbps >= policy.download_kbps);
    }
    // post-filter oracle: everything excluded really fails a predicate
    for (const auto& [name, s] : servers) {
      const bool returned =
          std::any_of(found.begin(), found.end(), [&](const auto& ad) { return ad.provider == name; });
      const bool expected = name != "p0" && name != "p2" && name != "p5" &&
                            s.free_mb() >= policy.storage_mb && s.upload_kbps >= policy.upload_kbps &&
                            s.download_kbps >= policy.download_kbps;
      CHECK(returned == expected);
    }
  }
}

// ---------------------------------------------------------------------------
// policies
// ---------------------------------------------------------------------------

TEST_CASE("policy checks") {
  const VoCandidate candidate{"buyer", {50}, 300.0, 100.0, {{"s1", {1}}, {"s2", {2}}}};

  SECTION("no applicable rules allows") {
    CHECK(check_policies(candidate, {}).allowed);
  }

  SECTION("forbidden content range denies") {
    const std::vector<PolicyRule> rules{{.name = "no-premium",
                                         .subject = "*",
                                         .predicate = PolicyPredicate::kForbiddenContentRange,
                                         .bound_lo = 40,
                                         .bound_hi = 60}};
    const auto decision = check_policies(candidate, rules);
    CHECK_FALSE(decision.allowed);
    REQUIRE(decision.violated.size() == 1);
    CHECK(decision.violated[0] == "no-premium");
  }

  SECTION("storage within the shareable bound allows") {
    const std::vector<PolicyRule> rules{{.name = "cap",
                                         .subject = "s1",
                                         .predicate = PolicyPredicate::kMaxShareableMb,
                                         .bound_lo = 200}};
    CHECK(check_policies(candidate, rules).allowed);
  }

  SECTION("every violated rule is reported") {
    const std::vector<PolicyRule> rules{
        {.name = "cap", .subject = "*", .predicate = PolicyPredicate::kMaxShareableMb, .bound_lo = 50},
        {.name = "short", .subject = "*", .predicate = PolicyPredicate::kMaxDuration, .bound_lo = 100},
        {.name = "regions",
         .subject = "*",
         .predicate = PolicyPredicate::kAllowedRegions,
         .regions = {{1}}},
        {.name = "fine", .subject = "*", .predicate = PolicyPredicate::kMinDuration, .bound_lo = 10}};
    const auto decision = check_policies(candidate, rules);
    CHECK_FALSE(decision.allowed);
    CHECK(decision.violated == std::vector<std::string>{"cap", "short", "regions"});
  }

  SECTION("allow-effect rules never block") {
    const std::vector<PolicyRule> rules{{.name = "note",
                                         .subject = "*",
                                         .predicate = PolicyPredicate::kForbiddenContentRange,
                                         .bound_lo = 40,
                                         .bound_hi = 60,
                                         .effect = PolicyEffect::kAllow}};
    CHECK(check_policies(candidate, rules).allowed);
  }

  SECTION("rules scoped to absent providers do not apply") {
    const std::vector<PolicyRule> rules{{.name = "other",
                                         .subject = "elsewhere",
                                         .predicate = PolicyPredicate::kMaxDuration,
                                         .bound_lo = 10}};
    CHECK(check_policies(candidate, rules).allowed);
  }
}

// ---------------------------------------------------------------------------
// eviction
// ---------------------------------------------------------------------------

TEST_CASE("eviction frees cheapest expected revenue first") {
  auto s = make_server("s", 0, 160.0);
  place_replica(s, {{1}, 30.0, 0.0, 100.0, cents(1.0), 1});  // X
  place_replica(s, {{2}, 50.0, 0.0, 100.0, cents(1.0), 2});  // Y
  REQUIRE(s.free_mb() == 80.0);

  const ErLookup er = [](ContentId c) { return c.value == 1 ? 0.2 : 0.9; };
  const auto plan = plan_eviction(s, 100.0, er);
  REQUIRE(plan.feasible);
  CHECK(plan.evict == std::vector<ContentId>{{1}});
  CHECK_THAT(plan.er_old, Catch::Matchers::WithinAbs(0.2, 1e-12));

  const auto evicted = evict_for_replica(s, 100.0, er);
  CHECK(evicted == std::vector<ContentId>{{1}});
  CHECK(s.free_mb() == 110.0);
  CHECK(s.used_mb == s.replica_total_mb());
}

TEST_CASE("no eviction when space suffices") {
  auto s = make_server("s", 0, 500.0);
  place_replica(s, {{1}, 30.0, 0.0, 100.0, cents(1.0), 1});
  const auto plan = plan_eviction(s, 100.0, kZeroEr);
  CHECK(plan.feasible);
  CHECK(plan.evict.empty());
  CHECK(plan.er_old == 0.0);
}

TEST_CASE("equal expected revenue evicts the larger replica first") {
  auto s = make_server("s", 0, 100.0);
  place_replica(s, {{1}, 20.0, 0.0, 100.0, cents(1.0), 1});
  place_replica(s, {{2}, 60.0, 0.0, 100.0, cents(1.0), 2});
  const auto plan = plan_eviction(s, 70.0, [](ContentId) { return 0.5; });
  REQUIRE(plan.feasible);
  CHECK(plan.evict == std::vector<ContentId>{{2}});
}

TEST_CASE("infeasible eviction is reported") {
  auto s = make_server("s", 0, 50.0);
  place_replica(s, {{1}, 40.0, 0.0, 100.0, cents(1.0), 1});
  const auto plan = plan_eviction(s, 100.0, kZeroEr);
  CHECK_FALSE(plan.feasible);
  CHECK_THROWS_AS(evict_for_replica(s, 100.0, kZeroEr), std::logic_error);
}

// ---------------------------------------------------------------------------
// organizations
// ---------------------------------------------------------------------------

TEST_CASE("forming an organization places replicas and sets the expiry") {
  ProviderTable providers;
  providers["s1"] = make_server("s1", 1, 500.0);
  VoLedger ledger;

  const auto result = ledger.form("buyer", awarded({{"s1", 4.0}}, 6.0), policy_for(7), VoKind::kShortTerm,
                                  100.0, providers, kZeroEr);
  REQUIRE(result.vo_id.has_value());
  REQUIRE(result.placed.size() == 1);
  CHECK(result.placed[0].provider == "s1");
  CHECK(result.placed[0].payment == cents(6.0));

  const auto* vo = ledger.find(*result.vo_id);
  REQUIRE(vo != nullptr);
  CHECK(vo->expires_at == 400.0);
  CHECK(vo->state == VoState::kLive);
  CHECK(providers["s1"].used_mb == 100.0);
  CHECK(providers["s1"].holds({7}));
  CHECK(ledger.buyer_has_live("buyer", {7}));
}

TEST_CASE("two winners hold replicas with the same expiry") {
  ProviderTable providers;
  providers["s1"] = make_server("s1", 1, 500.0);
  providers["s2"] = make_server("s2", 2, 500.0);
  VoLedger ledger;

  const auto result = ledger.form("buyer", awarded({{"s1", 4.0}, {"s2", 5.0}}, 6.0), policy_for(7),
                                  VoKind::kLongTerm, 10.0, providers, kZeroEr);
  REQUIRE(result.vo_id.has_value());
  CHECK(result.placed.size() == 2);
  CHECK(providers["s1"].replica_of({7})->expires_at == 310.0);
  CHECK(providers["s2"].replica_of({7})->expires_at == 310.0);
}

TEST_CASE("a winner without live capacity is dropped at placement") {
  ProviderTable providers;
  providers["s1"] = make_server("s1", 1, 500.0);
  providers["s2"] = make_server("s2", 2, 80.0);  // the ad was stale
  VoLedger ledger;

  const auto result = ledger.form("buyer", awarded({{"s1", 4.0}, {"s2", 5.0}}, 6.0), policy_for(7),
                                  VoKind::kShortTerm, 10.0, providers, kZeroEr);
  REQUIRE(result.vo_id.has_value());
  CHECK(result.placed.size() == 1);
  CHECK(result.dropped == std::vector<ProviderId>{"s2"});
  CHECK(ledger.find(*result.vo_id)->sellers.size() == 1);
}

TEST_CASE("expiry disbands organizations in id order and frees space") {
  ProviderTable providers;
  providers["s1"] = make_server("s1", 1, 500.0);
  VoLedger ledger;

  const auto first = ledger.form("b", awarded({{"s1", 4.0}}, 6.0), policy_for(7, 100.0, 50.0),
                                 VoKind::kShortTerm, 0.0, providers, kZeroEr);
  const auto second = ledger.form("b", awarded({{"s1", 4.0}}, 6.0), policy_for(8, 100.0, 50.0),
                                  VoKind::kShortTerm, 0.0, providers, kZeroEr);
  REQUIRE(first.vo_id.has_value());
  REQUIRE(second.vo_id.has_value());
  CHECK(providers["s1"].used_mb == 200.0);

  CHECK(ledger.expire(49.0, providers).empty());
  const auto disbanded = ledger.expire(50.0, providers);
  REQUIRE(disbanded.size() == 2);
  CHECK(disbanded[0].vo_id == *first.vo_id);
  CHECK(disbanded[1].vo_id == *second.vo_id);
  CHECK(disbanded[0].reason == DisbandReason::kExpired);
  CHECK(providers["s1"].used_mb == 0.0);
  CHECK(providers["s1"].replicas.empty());
  CHECK(ledger.expire(51.0, providers).empty());  // never disbanded twice
  CHECK(ledger.find(*first.vo_id)->state == VoState::kDisbanded);
}

TEST_CASE("rearrangement swaps the seller set for the remaining duration") {
  ProviderTable providers;
  providers["old"] = make_server("old", 1, 500.0);
  providers["new"] = make_server("new", 2, 500.0);
  VoLedger ledger;

  const auto formed = ledger.form("b", awarded({{"old", 5.0}}, 7.0), policy_for(7, 100.0, 300.0),
                                  VoKind::kShortTerm, 0.0, providers, kZeroEr);
  REQUIRE(formed.vo_id.has_value());

  const RenegotiationEvent event{RenegotiationKind::kCheaperEntrant, {7}, *formed.vo_id, 100.0, "new"};
  auto fresh_policy = policy_for(7, 100.0, 200.0);  // remaining duration
  const auto result = ledger.rearrange(*formed.vo_id, event, awarded({{"new", 4.0}}, 5.0), fresh_policy,
                                       VoKind::kShortTerm, 100.0, providers, kZeroEr);
  REQUIRE(result.changed);
  REQUIRE(result.fresh.vo_id.has_value());
  CHECK(result.old_disbanded->reason == DisbandReason::kRearranged);

  const auto* old_vo = ledger.find(*formed.vo_id);
  CHECK(old_vo->state == VoState::kDisbanded);
  CHECK(old_vo->rearranged_into == *result.fresh.vo_id);
  CHECK(providers["old"].replicas.empty());
  REQUIRE(providers["new"].replica_of({7}) != nullptr);
  CHECK(providers["new"].replica_of({7})->expires_at == 300.0);
}

TEST_CASE("a failed re-auction keeps the organization unless holding lost its value") {
  ProviderTable providers;
  providers["old"] = make_server("old", 1, 500.0);
  VoLedger ledger;
  const auto formed = ledger.form("b", awarded({{"old", 5.0}}, 7.0), policy_for(7), VoKind::kShortTerm,
                                  0.0, providers, kZeroEr);
  REQUIRE(formed.vo_id.has_value());

  SECTION("cheaper-entrant probe with no winner is status quo") {
    const RenegotiationEvent event{RenegotiationKind::kCheaperEntrant, {7}, *formed.vo_id, 50.0, "x"};
    const auto result = ledger.rearrange(*formed.vo_id, event,
                                         AuctionOutcome::no_winner(NoWinnerReason::kNoBids),
                                         policy_for(7), VoKind::kShortTerm, 50.0, providers, kZeroEr);
    CHECK_FALSE(result.changed);
    CHECK(ledger.find(*formed.vo_id)->state == VoState::kLive);
    CHECK(providers["old"].replica_of({7}) != nullptr);
  }

  SECTION("no-longer-beneficial with no alternative disbands early") {
    const RenegotiationEvent event{RenegotiationKind::kNoLongerBeneficial, {7}, *formed.vo_id, 50.0,
                                   "old"};
    const auto result = ledger.rearrange(*formed.vo_id, event,
                                         AuctionOutcome::no_winner(NoWinnerReason::kNoBids),
                                         policy_for(7), VoKind::kShortTerm, 50.0, providers, kZeroEr);
    CHECK(result.changed);
    CHECK(result.old_disbanded->reason == DisbandReason::kNoLongerBeneficial);
    CHECK(ledger.find(*formed.vo_id)->state == VoState::kDisbanded);
    CHECK(providers["old"].replicas.empty());
  }
}

TEST_CASE("storage accounting stays conserved through a random op sequence") {
  std::mt19937 gen(41);
  ProviderTable providers;
  for (int i = 0; i < 3; ++i) providers["p" + std::to_string(i)] = make_server("p" + std::to_string(i), i, 350.0);
  VoLedger ledger;
  const ErLookup er = [&gen](ContentId c) { return static_cast<double>((c.value * 37) % 11); };

  double now = 0.0;
  for (int step = 0; step < 120; ++step) {
    now += 5.0;
    const int64_t content = 1 + static_cast<int64_t>(gen() % 30);
    const std::string seller = "p" + std::to_string(gen() % 3);
    ledger.form("buyer", awarded({{seller, 3.0}}, 4.0), policy_for(content, 100.0, 40.0),
                VoKind::kShortTerm, now, providers, er);
    ledger.expire(now, providers);
    for (const auto& [name, s] : providers) {
      CHECK(s.used_mb == s.replica_total_mb());
      CHECK(s.used_mb <= s.capacity_mb);
    }
    // live replicas all carry strictly positive payments
    for (const auto& [name, s] : providers)
      for (const auto& r : s.replicas) CHECK(r.payment.cents > 0);
  }
}
