#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relgame/interval.hpp"
#include "relgame/model.hpp"

namespace relgame::ultimatum {

inline constexpr int kCentsPerDollar = 100;
inline constexpr std::size_t kRow = 0;
inline constexpr std::size_t kColumn = 1;

class UnsolvableClaimError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Column's share of the dollar, on the one-cent grid.
class Offer {
 public:
  static Offer from_cents(int cents) {
    if (cents < 0 || cents > kCentsPerDollar)
      throw std::out_of_range("offer must lie between 0 and 100 cents");
    return Offer(cents);
  }
  static Offer from_rational(const Rational& share) {
    Rational cents = share * kCentsPerDollar;
    if (boost::multiprecision::denominator(cents) != 1)
      throw std::invalid_argument("offer " + to_string(share) + " is not on the cent grid");
    return from_cents(static_cast<int>(boost::multiprecision::numerator(cents)));
  }

  int cents() const { return cents_; }
  Rational value() const { return make_rational(cents_, kCentsPerDollar); }

  friend auto operator<=>(const Offer&, const Offer&) = default;

 private:
  explicit Offer(int cents) : cents_(cents) {}
  int cents_;
};

/// A bound that stops binding for large relationships. `saturated` means the
/// bound covers every offer in [0, 1] inclusively.
struct ThresholdValue {
  Rational value;
  bool saturated = false;
};

/// Column's supposed payoff from accepting is a + (1 - a) * r_cr; Column
/// accepts only when it is strictly positive.
inline bool column_accepts(const Rational& r_cr, const Rational& share) {
  return share + (1 - share) * r_cr > 0;
}

/// Row's supposed payoff from an accepted offer is 1 - a + r_rc * a.
inline bool row_willing(const Rational& r_rc, const Rational& share) {
  return 1 - share + r_rc * share > 0;
}

/// -r/(1-r): Column accepts exactly the offers strictly above it.
inline ThresholdValue acceptance_threshold(const Rational& r_cr) {
  if (r_cr >= 1) return {Rational(0), true};
  return {-r_cr / (1 - r_cr), false};
}

/// 1/(1-r): Row is willing to offer strictly below it.
inline ThresholdValue offer_cap(const Rational& r_rc) {
  if (r_rc >= 1) return {Rational(1), true};
  return {1 / (1 - r_rc), false};
}

struct AgreementRange {
  Interval range;
  std::vector<Offer> cent_offers;
  bool empty() const { return range.is_empty(); }
};

inline AgreementRange agreement_range(const Rational& r_rc, const Rational& r_cr) {
  ThresholdValue lo = acceptance_threshold(r_cr);
  ThresholdValue hi = offer_cap(r_rc);
  Interval range(Bound{lo.value, lo.saturated}, Bound{hi.value, hi.saturated});
  AgreementRange out{range, {}};
  for (int c = 0; c <= kCentsPerDollar; ++c) {
    Offer offer = Offer::from_cents(c);
    if (range.contains(offer.value())) out.cent_offers.push_back(offer);
  }
  return out;
}

/// Relationship Column should display so that its rejection threshold lands
/// exactly on the cap Column believes Row has: -r/(1-r) = 1/(1-believed).
inline Rational optimal_relationship_claim(const Rational& believed_r_rc) {
  if (believed_r_rc >= 1)
    throw UnsolvableClaimError("believed relationship must be below 1 for Row's cap to bind");
  Rational cap = offer_cap(believed_r_rc).value;
  // Thresholds of relationships below 1 stay below 1, so a cap at or above 1
  // can never be matched.
  if (cap >= 1) {
    throw UnsolvableClaimError("no relationship below 1 puts the rejection threshold at " +
                               to_string(cap) + "; the threshold only approaches 1 as r -> -inf");
  }
  return cap / (cap - 1);
}

/// One-shot stage game: Row offers one of the 101 cent shares, Column
/// accepts (payoffs 1 - a, a) or rejects (0, 0).
inline Game stage_game() {
  std::vector<std::string> offers;
  std::vector<PayoffVector> table;
  for (int c = 0; c <= kCentsPerDollar; ++c) {
    Rational a = Offer::from_cents(c).value();
    offers.push_back(to_string(a));
    table.push_back({1 - a, a});
    table.push_back({Rational(0), Rational(0)});
  }
  return Game({"Row", "Column"}, {offers, {"Accept", "Reject"}}, std::move(table));
}

enum class OfferPolicy { InferenceAscent, FixedSequence };

struct UltimatumConfig {
  Rational r_rc = 0;       // Row's relationship toward Column
  Rational r_cr = 0;       // Column's relationship toward Row
  Rational belief_rc = 0;  // Column's belief about r_rc
  Rational belief_cr = 0;  // Row's belief about r_cr
  OfferPolicy policy = OfferPolicy::InferenceAscent;
  std::vector<Offer> fixed_offers;
  std::size_t max_rounds = 200;

  BeliefState beliefs() const {
    BeliefState b(2);
    b.set_relationship(kRow, kColumn, r_rc);
    b.set_relationship(kColumn, kRow, r_cr);
    b.set_supposed(kRow, kRow, kColumn, r_rc);
    b.set_supposed(kRow, kColumn, kRow, belief_cr);
    b.set_supposed(kColumn, kColumn, kRow, r_cr);
    b.set_supposed(kColumn, kRow, kColumn, belief_rc);
    return b;
  }
};

struct BargainingRound {
  std::size_t round;
  Offer offer;
  bool accepted;
  Rational row_bound_before;  // Row's lower bound on Column's threshold
  Rational row_bound_after;
  Rational column_cap_bound;  // Column's lower bound on Row's cap (highest offer seen)
};

struct BargainingOutcome {
  bool agreement = false;
  std::optional<Offer> offer;
  std::size_t round = 0;
  std::string reason;
  std::vector<BargainingRound> rounds;
  AgreementRange true_range;
  ThresholdValue row_believed_threshold;
  ThresholdValue column_believed_cap;
};

/// Repeated offers until Column accepts. Under inference-driven ascent Row
/// offers the smallest cent strictly above its current estimate of Column's
/// threshold that it is still willing to give. The estimate starts at the
/// threshold Row believes in and each rejection lifts it to the rejected offer.
inline BargainingOutcome bargain(const UltimatumConfig& config) {
  require_valid_beliefs(config.beliefs(), 2);
  if (config.policy == OfferPolicy::FixedSequence && config.fixed_offers.empty())
    throw std::invalid_argument("fixed offer sequence is empty");

  BargainingOutcome out;
  out.true_range = agreement_range(config.r_rc, config.r_cr);
  out.row_believed_threshold = acceptance_threshold(config.belief_cr);
  out.column_believed_cap = offer_cap(config.belief_rc);

  // A saturated belief means Row expects even a zero offer to be accepted.
  Rational bound = out.row_believed_threshold.saturated ? Rational(-1)
                                                        : out.row_believed_threshold.value;
  Rational highest_seen = 0;

  auto next_offer = [&](std::size_t round) -> std::optional<Offer> {
    if (config.policy == OfferPolicy::FixedSequence) {
      if (round > config.fixed_offers.size()) return std::nullopt;
      return config.fixed_offers[round - 1];
    }
    for (int c = 0; c <= kCentsPerDollar; ++c) {
      Offer offer = Offer::from_cents(c);
      if (offer.value() <= bound) continue;
      if (!row_willing(config.r_rc, offer.value())) return std::nullopt;
      return offer;
    }
    return std::nullopt;
  };

  for (std::size_t t = 1; t <= config.max_rounds; ++t) {
    std::optional<Offer> offer = next_offer(t);
    if (!offer) {
      out.reason = config.policy == OfferPolicy::FixedSequence
                       ? "offer sequence exhausted"
                       : "no admissible offer: every cent above Row's bound exceeds Row's cap";
      return out;
    }
    const Rational share = offer->value();
    highest_seen = std::max(highest_seen, share);
    BargainingRound record{t, *offer, column_accepts(config.r_cr, share), bound, bound,
                           highest_seen};
    if (!record.accepted) bound = std::max(bound, share);
    record.row_bound_after = bound;
    out.rounds.push_back(record);
    if (record.accepted) {
      out.agreement = true;
      out.offer = *offer;
      out.round = t;
      out.reason = "accepted";
      return out;
    }
  }
  out.reason = "max rounds reached";
  return out;
}

}  // namespace relgame::ultimatum
