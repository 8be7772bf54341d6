#pragma once

// csdnsim/econ.hpp — pricing, penalty, and revenue-prediction formulas.
//
// Everything in here is a pure function of its arguments so each formula can
// be unit-tested against hand-computed values in isolation. Buyers price a
// replication with payoff_max (their private reserve), sellers price bids
// from storage cost plus the expected-revenue gain, and the three er_*
// predictors estimate how often a piece of content will be requested over a
// forecast horizon.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "csdnsim/bigint.hpp"
#include "csdnsim/latency.hpp"

namespace csdnsim {

struct ContentId {
  int64_t value{0};
  friend constexpr bool operator==(ContentId a, ContentId b) { return a.value == b.value; }
  friend constexpr auto operator<=>(ContentId a, ContentId b) { return a.value <=> b.value; }
};

// One end-user request: what was asked for, from where, and when (simulated
// seconds). Request histories are kept time-ordered.
struct ContentRequest {
  ContentId content;
  LocationId location;
  double time{0.0};
};

// A past request annotated with the price paid for the replication it led to
// (0 when it led to none).
struct HistoryRecord {
  ContentRequest request;
  double paid{0.0};
};

// Load imposed on a server by one request and whether the request was served
// inside the delay threshold (the sigma indicator).
struct LoadRecord {
  ContentRequest request;
  double load{0.0};
  bool served_within_threshold{false};
};

struct EconParams {
  double alpha{0.0};                  // penalty unit cost, currency per load unit
  double beta{0.0}, gamma{0.0}, lambda{0.0};  // payoff coefficients, must sum to 1
  double rho{0.0};                    // impact factor weighting forecast vs history
  double delay_threshold_ms{0.0};     // D
  double content_kernel_width{0.0};   // W_c, content-id units
  double location_kernel_width{0.0};  // W_l, milliseconds
  double capacity_threshold{0.0};     // K, default load capacity bound

  static std::vector<std::string> violations(const EconParams& p) {
    std::vector<std::string> out;
    if (p.alpha < 0.0) out.push_back("alpha-negative");
    if (std::abs(p.beta + p.gamma + p.lambda - 1.0) > 1e-9) out.push_back("coefficient-sum");
    if (p.beta < 0.0 || p.gamma < 0.0 || p.lambda < 0.0) out.push_back("coefficient-negative");
    if (p.rho < 0.0 || p.rho > 1.0) out.push_back("impact-factor-range");
    if (!(p.delay_threshold_ms > 0.0)) out.push_back("delay-threshold");
    if (!(p.content_kernel_width > 0.0)) out.push_back("content-kernel-width");
    if (!(p.location_kernel_width > 0.0)) out.push_back("location-kernel-width");
    if (!(p.capacity_threshold > 0.0)) out.push_back("capacity-threshold");
    return out;
  }

  static EconParams validated(EconParams p) {
    const auto v = violations(p);
    if (!v.empty()) {
      std::string msg = "EconParams:";
      for (const auto& s : v) msg += " " + s;
      throw std::invalid_argument(msg);
    }
    return p;
  }
};

struct WalkParams {
  int max_step{0};        // S, steps drawn from [-S, S]
  double mean_step{0.0};  // s-bar, weighted mean of recent steps
  double step_decay{1.0}; // weight multiplier per step into the past

  static WalkParams validated(WalkParams p) {
    if (p.max_step < 0) throw std::invalid_argument("WalkParams: max_step < 0");
    if (!(p.step_decay > 0.0 && p.step_decay <= 1.0))
      throw std::invalid_argument("WalkParams: step_decay outside (0, 1]");
    return p;
  }
};

struct ZipfParams {
  double mu{0.0};            // exponent, must lie strictly inside (0, 1)
  int64_t total_content{1};  // C

  static ZipfParams validated(ZipfParams p) {
    if (!(p.mu > 0.0 && p.mu < 1.0)) throw std::domain_error("ZipfParams: mu outside (0, 1)");
    if (p.total_content < 1) throw std::invalid_argument("ZipfParams: total_content < 1");
    return p;
  }
};

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

// Content similarity: nearby identifiers stand for similar content, so the
// weight decays with the id gap. 1 exactly when the ids match.
inline double similarity(ContentId a, ContentId b, double content_width) {
  if (!(content_width > 0.0)) throw std::invalid_argument("similarity: width must be > 0");
  const double gap = std::abs(static_cast<double>(a.value - b.value));
  return std::exp(-gap / content_width);
}

// Locality weight between two request origins, from the latency table.
inline double distance_factor(LocationId a, LocationId b, const LatencyModel& latency,
                              double location_width) {
  if (!(location_width > 0.0)) throw std::invalid_argument("distance_factor: width must be > 0");
  return std::exp(-latency.latency_ms(a, b) / location_width);
}

// ---------------------------------------------------------------------------
// Buyer side
// ---------------------------------------------------------------------------

// Unserved load: requests missed on delay plus served load beyond the
// capacity bound K (that term is dropped when negative).
inline double penalty(std::span<const LoadRecord> loads, double capacity_threshold) {
  if (!(capacity_threshold > 0.0)) throw std::invalid_argument("penalty: capacity bound must be > 0");
  double missed = 0.0, served = 0.0;
  for (const auto& r : loads) {
    if (r.load < 0.0) throw std::invalid_argument("penalty: negative load");
    if (r.served_within_threshold)
      served += r.load;
    else
      missed += r.load;
  }
  const double over_capacity = served - capacity_threshold;
  return missed + (over_capacity > 0.0 ? over_capacity : 0.0);
}

// The buyer's private reserve: a prediction of what the content is worth to
// buy (payments for similar, nearby, recent requests, averaged over the
// history) minus the cost already incurred for failing to serve it.
// History must be non-empty; callers fall back to a cold-start budget for a
// buyer's first purchase.
inline double payoff_max(std::span<const HistoryRecord> history, const ContentRequest& current,
                         double current_penalty, const EconParams& params,
                         const LatencyModel& latency) {
  if (history.empty()) throw std::domain_error("payoff_max: empty history");
  double sum = 0.0;
  for (const auto& h : history) {
    if (h.request.time > current.time)
      throw std::invalid_argument("payoff_max: history newer than current request");
    const double sim = similarity(current.content, h.request.content, params.content_kernel_width);
    const double dist =
        distance_factor(current.location, h.request.location, latency, params.location_kernel_width);
    const double decay = std::exp(-params.lambda * (current.time - h.request.time));
    sum += (h.paid + params.gamma) * sim * dist * decay;
  }
  const double predicted = params.beta * (sum / static_cast<double>(history.size()));
  return predicted - params.alpha * current_penalty;
}

// ---------------------------------------------------------------------------
// Seller side
// ---------------------------------------------------------------------------

inline double storage_cost(double requirement_mb, double unit_cost_per_mb) {
  if (requirement_mb < 0.0 || unit_cost_per_mb < 0.0)
    throw std::invalid_argument("storage_cost: negative input");
  return requirement_mb * unit_cost_per_mb;
}

// Expected-revenue gain from hosting the new content net of the revenue
// forgone by whatever must be evicted. Sellers abstain when this is <= 0.
inline double utility(double er_new, double er_old) { return er_new - er_old; }

// Bid price: cost plus utility, shaded by the seller's eagerness (a signed
// fraction of the storage cost). Returns nothing when the utility is not
// strictly positive — a rational seller does not bid at a loss.
inline std::optional<double> bid_amount(double storage, double util, double eagerness) {
  if (!(util > 0.0)) return std::nullopt;
  const double bid = storage + util + eagerness * storage;
  return bid > 0.0 ? bid : 0.0;
}

// ---------------------------------------------------------------------------
// Expected-revenue predictors
// ---------------------------------------------------------------------------

// Kernel-weighted request mass: an impact-factor blend of the upcoming
// request pattern and the history of similar requests.
inline double er_empirical(const ContentRequest& current, std::span<const ContentRequest> forecast,
                           std::span<const ContentRequest> history, double rho,
                           const EconParams& kernels, const LatencyModel& latency) {
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("er_empirical: rho outside [0, 1]");
  auto weight_sum = [&](std::span<const ContentRequest> requests) {
    double sum = 0.0;
    for (const auto& r : requests) {
      sum += similarity(current.content, r.content, kernels.content_kernel_width) *
             distance_factor(current.location, r.location, latency, kernels.location_kernel_width);
    }
    return sum;
  };
  return rho * weight_sum(forecast) + (1.0 - rho) * weight_sum(history);
}

namespace detail {

// Near-exact binomial PMF term for operands too large for big-integer
// arithmetic to be worth it; log-gamma keeps the relative error far inside
// the 1e-9 tolerance the exact path is checked against.
inline double binomial_pmf_lgamma(unsigned n, unsigned idx) {
  const double log_p = std::lgamma(static_cast<double>(n) + 1.0) -
                       std::lgamma(static_cast<double>(idx) + 1.0) -
                       std::lgamma(static_cast<double>(n - idx) + 1.0) -
                       static_cast<double>(n) * std::log(2.0);
  return std::exp(log_p);
}

constexpr unsigned kExactBinomialBitLimit = 512;

}  // namespace detail

// Probability that the k-th future request, modeled as a drift-adjusted
// symmetric binomial walk over content ids, lands on the given offset from
// the current position. The mean step is rounded to the nearest integer so
// the support stays integral; offsets outside |c - s| <= kS have mass 0.
inline double binomial_request_prob(int64_t content_offset, int step_index,
                                    const WalkParams& walk) {
  if (step_index < 1) throw std::domain_error("binomial_request_prob: step index must be >= 1");
  const int64_t mean = std::llround(walk.mean_step);
  if (walk.max_step == 0) return content_offset == mean ? 1.0 : 0.0;
  const int64_t half_span = static_cast<int64_t>(step_index) * walk.max_step;
  const int64_t idx = content_offset - mean + half_span;
  if (idx < 0 || idx > 2 * half_span) return 0.0;
  const unsigned n = static_cast<unsigned>(2 * half_span);
  if (n <= detail::kExactBinomialBitLimit) {
    const BigUint coeff = binomial_exact(n, static_cast<unsigned>(idx));
    return coeff.ldexp_to_double(-static_cast<int>(n));
  }
  return detail::binomial_pmf_lgamma(n, static_cast<unsigned>(idx));
}

// Expected number of the next n requests that hit the given offset under the
// walk model.
inline double er_binomial(int64_t content_offset, int horizon, const WalkParams& walk) {
  if (horizon < 0) throw std::invalid_argument("er_binomial: negative horizon");
  double sum = 0.0;
  for (int i = 1; i <= horizon; ++i) sum += binomial_request_prob(content_offset, i, walk);
  return sum;
}

// Number of requests expected over the future window T, extrapolated from
// the k-1 requests seen over the past window T' at a constant arrival rate.
// Rounded half-up to a count.
inline int forecast_horizon(int64_t k_minus_1, double future_window, double past_window) {
  if (!(past_window > 0.0)) throw std::invalid_argument("forecast_horizon: past window must be > 0");
  if (!(future_window > 0.0)) throw std::invalid_argument("forecast_horizon: future window must be > 0");
  if (k_minus_1 < 0) throw std::invalid_argument("forecast_horizon: negative request count");
  const double n = static_cast<double>(k_minus_1) * future_window / past_window;
  return static_cast<int>(std::floor(n + 0.5));
}

// Weighted mean of walk steps, oldest first; the newest step has weight 1
// and each step further back is discounted by the decay factor.
inline double weighted_mean_step(std::span<const int64_t> steps_oldest_first, double decay) {
  if (steps_oldest_first.empty()) throw std::domain_error("weighted_mean_step: empty steps");
  if (!(decay > 0.0 && decay <= 1.0))
    throw std::invalid_argument("weighted_mean_step: decay outside (0, 1]");
  double weight = 1.0, weighted = 0.0, total = 0.0;
  for (std::size_t i = steps_oldest_first.size(); i-- > 0;) {
    weighted += weight * static_cast<double>(steps_oldest_first[i]);
    total += weight;
    weight *= decay;
  }
  return weighted / total;
}

// Cumulative request probability of content c under a Zipf-like popularity
// law over ids 1..C (lower id = more popular): (c/C)^(1-mu).
inline double zipf_cum_prob(ContentId c, const ZipfParams& zipf) {
  if (!(zipf.mu > 0.0 && zipf.mu < 1.0)) throw std::domain_error("zipf_cum_prob: mu outside (0, 1)");
  if (c.value < 1 || c.value > zipf.total_content)
    throw std::domain_error("zipf_cum_prob: content id outside [1, C]");
  return std::pow(static_cast<double>(c.value) / static_cast<double>(zipf.total_content),
                  1.0 - zipf.mu);
}

// Zipf expected revenue over n requests. The per-step term does not depend
// on the step index, so the sum collapses to n times the cumulative mass.
inline double er_zipf(ContentId c, int horizon, const ZipfParams& zipf) {
  if (horizon < 0) throw std::invalid_argument("er_zipf: negative horizon");
  return static_cast<double>(horizon) * zipf_cum_prob(c, zipf);
}

}  // namespace csdnsim
