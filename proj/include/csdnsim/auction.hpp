#pragma once

// csdnsim/auction.hpp — sealed-bid reverse Vickrey procurement.
//
// The buyer publishes requirements and a private reserve; sellers submit one
// sealed bid each; the m lowest bids at or under the reserve win and every
// winner is paid the (m+1)-th lowest eligible bid, with the reserve standing
// in when there is no such bid. Lowest-cost supply wins, and the uniform
// second price keeps truthful bidding weakly dominant.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csdnsim/econ.hpp"
#include "csdnsim/money.hpp"

namespace csdnsim {

using ProviderId = std::string;

struct AuctionPolicy {
  ContentId content;
  double storage_mb{0.0};                     // S_c
  double upload_kbps{0.0};                    // U_c
  double download_kbps{0.0};                  // D_c
  std::vector<LocationId> preferred_regions;  // buyer's bias, may be empty
  double duration_s{0.0};                     // T, how long winners hold the replica
  int retry_count{0};

  static std::vector<std::string> violations(const AuctionPolicy& p, int max_retries) {
    std::vector<std::string> out;
    if (p.storage_mb < 0.0) out.push_back("storage-negative");
    if (!(p.upload_kbps > 0.0)) out.push_back("upload-rate");
    if (!(p.download_kbps > 0.0)) out.push_back("download-rate");
    if (!(p.duration_s > 0.0)) out.push_back("duration");
    if (p.retry_count < 0 || p.retry_count > max_retries) out.push_back("retry-count");
    return out;
  }
};

struct Bid {
  ProviderId seller;
  Money amount;
  double submitted_at{0.0};
};

enum class NoWinnerReason { kNoBids, kAllAboveReserve };

struct Winner {
  ProviderId seller;
  Money bid;
  Money payment;  // uniform across winners
};

struct AuctionOutcome {
  bool awarded{false};
  std::vector<Winner> winners;  // sorted by bid ascending
  Money payment{0};
  NoWinnerReason reason{NoWinnerReason::kNoBids};

  static AuctionOutcome no_winner(NoWinnerReason why) {
    AuctionOutcome out;
    out.awarded = false;
    out.reason = why;
    return out;
  }
};

// One auction round. Bids stay sealed: nothing about submitted bids is
// observable until clear() releases the transcript.
class Auction {
 public:
  // Refuses to open when the buyer has no budget (reserve <= 0) or the
  // policy's retry count has passed the bound.
  static std::optional<Auction> open(AuctionPolicy policy, Money reserve, ProviderId buyer,
                                     int max_retries) {
    if (reserve.cents <= 0) return std::nullopt;
    if (policy.retry_count > max_retries) return std::nullopt;
    return Auction(std::move(policy), reserve, std::move(buyer));
  }

  enum class SubmitResult { kAccepted, kDuplicateSeller, kClosed };

  SubmitResult submit(Bid bid) {
    if (cleared_) return SubmitResult::kClosed;
    for (const auto& b : bids_)
      if (b.seller == bid.seller) return SubmitResult::kDuplicateSeller;
    bids_.push_back(std::move(bid));
    return SubmitResult::kAccepted;
  }

  // Selects the winners_wanted lowest eligible bids (ties broken by earlier
  // submission, then seller id) and closes the auction.
  AuctionOutcome clear(int winners_wanted) {
    cleared_ = true;
    if (winners_wanted < 1) winners_wanted = 1;
    if (bids_.empty()) return AuctionOutcome::no_winner(NoWinnerReason::kNoBids);

    std::vector<Bid> eligible;
    for (const auto& b : bids_)
      if (b.amount <= reserve_) eligible.push_back(b);
    if (eligible.empty()) return AuctionOutcome::no_winner(NoWinnerReason::kAllAboveReserve);

    std::sort(eligible.begin(), eligible.end(), [](const Bid& a, const Bid& b) {
      if (a.amount != b.amount) return a.amount < b.amount;
      if (a.submitted_at != b.submitted_at) return a.submitted_at < b.submitted_at;
      return a.seller < b.seller;
    });

    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(winners_wanted),
                                                   eligible.size());
    const Money payment = take < eligible.size() ? eligible[take].amount : reserve_;

    AuctionOutcome out;
    out.awarded = true;
    out.payment = payment;
    for (std::size_t i = 0; i < take; ++i)
      out.winners.push_back({eligible[i].seller, eligible[i].amount, payment});
    return out;
  }

  bool open_for_bids() const { return !cleared_; }
  const AuctionPolicy& policy() const { return policy_; }
  Money reserve() const { return reserve_; }
  const ProviderId& buyer() const { return buyer_; }
  // Full transcript; only meaningful to read once the auction has cleared.
  std::span<const Bid> bids() const { return bids_; }

 private:
  Auction(AuctionPolicy policy, Money reserve, ProviderId buyer)
      : policy_(std::move(policy)), reserve_(reserve), buyer_(std::move(buyer)) {}

  AuctionPolicy policy_;
  Money reserve_;
  ProviderId buyer_;
  std::vector<Bid> bids_;
  bool cleared_{false};
};

// After a failed round the buyer relaxes its policy — a halved holding
// duration is a cheaper commitment for sellers. Gives up once the retry
// bound is hit or the duration would drop under the floor.
inline std::optional<AuctionPolicy> retry_after_no_winner(const AuctionPolicy& policy,
                                                          int max_retries,
                                                          double min_duration_s = 1.0) {
  if (policy.retry_count >= max_retries) return std::nullopt;
  const double halved = policy.duration_s / 2.0;
  if (halved < min_duration_s) return std::nullopt;
  AuctionPolicy relaxed = policy;
  relaxed.duration_s = halved;
  relaxed.retry_count = policy.retry_count + 1;
  return relaxed;
}

// ---------------------------------------------------------------------------
// Renegotiation triggers
// ---------------------------------------------------------------------------

enum class RenegotiationKind { kDemandChange, kNoLongerBeneficial, kCheaperEntrant };

inline const char* to_string(RenegotiationKind k) {
  switch (k) {
    case RenegotiationKind::kDemandChange: return "demand-change";
    case RenegotiationKind::kNoLongerBeneficial: return "no-longer-beneficial";
    case RenegotiationKind::kCheaperEntrant: return "cheaper-entrant";
  }
  return "?";
}

struct RenegotiationEvent {
  RenegotiationKind kind;
  ContentId content;
  uint64_t vo{0};
  double detected_at{0.0};
  ProviderId provider;  // the winner or entrant that tripped the trigger
};

// Market view of one current winner: what it now asks for the held replica
// and its recomputed utility for the remaining duration.
struct WinnerMarketState {
  ProviderId provider;
  Money winning_bid{0};
  std::optional<Money> posted_ask;
  std::optional<double> recomputed_utility;
};

struct EntrantAsk {
  ProviderId provider;
  Money ask{0};
};

struct RenegotiationParams {
  double cheaper_entrant_margin{0.10};       // relative undercut required
  double demand_change_rel_threshold{0.25};  // relative ask drift tolerated
};

// Evaluates the three renegotiation triggers against a live organization:
// a winner re-pricing its held replica, a winner whose holding stopped being
// beneficial, and a cheaper non-winner undercutting the current payment.
inline std::vector<RenegotiationEvent> detect_renegotiation(
    uint64_t vo, ContentId content, Money payment, std::span<const WinnerMarketState> winners,
    std::span<const EntrantAsk> entrants, const RenegotiationParams& params, double now) {
  std::vector<RenegotiationEvent> events;

  for (const auto& w : winners) {
    if (!w.posted_ask.has_value()) continue;
    const double bid = w.winning_bid.value();
    const double drift = std::abs(w.posted_ask->value() - bid);
    const bool changed = bid > 0.0 ? drift > params.demand_change_rel_threshold * bid
                                   : w.posted_ask->cents != w.winning_bid.cents;
    if (changed) {
      events.push_back({RenegotiationKind::kDemandChange, content, vo, now, w.provider});
      break;  // one fresh auction covers the organization
    }
  }

  for (const auto& w : winners) {
    if (w.recomputed_utility.has_value() && *w.recomputed_utility <= 0.0) {
      events.push_back({RenegotiationKind::kNoLongerBeneficial, content, vo, now, w.provider});
      break;
    }
  }

  const EntrantAsk* cheapest = nullptr;
  for (const auto& e : entrants)
    if (cheapest == nullptr || e.ask < cheapest->ask ||
        (e.ask == cheapest->ask && e.provider < cheapest->provider))
      cheapest = &e;
  if (cheapest != nullptr &&
      cheapest->ask.value() < (1.0 - params.cheaper_entrant_margin) * payment.value()) {
    events.push_back({RenegotiationKind::kCheaperEntrant, content, vo, now, cheapest->provider});
  }

  return events;
}

}  // namespace csdnsim
