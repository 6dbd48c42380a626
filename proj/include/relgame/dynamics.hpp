#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relgame/equilibrium.hpp"
#include "relgame/interval.hpp"
#include "relgame/model.hpp"

namespace relgame {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SimulationError : public AnalysisError {
 public:
  SimulationError(std::size_t round, const std::string& what)
      : AnalysisError("round " + std::to_string(round) + ": " + what), round_(round) {}
  std::size_t round() const { return round_; }

 private:
  std::size_t round_;
};

// ---------------------------------------------------------------------------
// Update policies

enum class PointEstimateRule { Midpoint, Lower, Upper };

struct FixedPolicy {
  friend bool operator==(const FixedPolicy&, const FixedPolicy&) = default;
};

/// Tracks, per opponent, the interval of relationship values consistent with
/// everything observed so far and believes a point inside it.
struct RationalizingIntervalPolicy {
  Rational prior_lower = 0;
  Rational prior_upper = 1;
  PointEstimateRule rule = PointEstimateRule::Midpoint;

  Interval prior() const { return Interval::closed(prior_lower, prior_upper); }
  friend bool operator==(const RationalizingIntervalPolicy&,
                         const RationalizingIntervalPolicy&) = default;
};

/// Interval tracking plus mirroring: the player's own relationship toward an
/// opponent is set to the estimate of the opponent's relationship back.
struct TitForTatMirrorPolicy {
  RationalizingIntervalPolicy inference;
  friend bool operator==(const TitForTatMirrorPolicy&, const TitForTatMirrorPolicy&) = default;
};

using UpdatePolicy = std::variant<FixedPolicy, RationalizingIntervalPolicy, TitForTatMirrorPolicy>;

inline const RationalizingIntervalPolicy* inference_of(const UpdatePolicy& policy) {
  if (auto* p = std::get_if<RationalizingIntervalPolicy>(&policy)) return p;
  if (auto* p = std::get_if<TitForTatMirrorPolicy>(&policy)) return &p->inference;
  return nullptr;
}

inline std::string to_string(const UpdatePolicy& policy) {
  auto box = [](const RationalizingIntervalPolicy& p) {
    return ":" + to_string(p.prior_lower) + "," + to_string(p.prior_upper);
  };
  if (std::holds_alternative<FixedPolicy>(policy)) return "fixed";
  if (auto* p = std::get_if<RationalizingIntervalPolicy>(&policy)) return "rationalize" + box(*p);
  return "titfortat" + box(std::get<TitForTatMirrorPolicy>(policy).inference);
}

inline Rational point_estimate(const Interval& interval, PointEstimateRule rule) {
  switch (rule) {
    case PointEstimateRule::Lower: return interval.lower()->value;
    case PointEstimateRule::Upper: return interval.upper()->value;
    case PointEstimateRule::Midpoint: break;
  }
  return interval.midpoint();
}

// ---------------------------------------------------------------------------
// Inference from observed play

/// Values r of actor's relationship toward observer under which `action` is a
/// best response for the actor against at least one pure action of the
/// observer, clipped to `prior`. The clipped pieces are widened to their hull.
inline Interval rationalizing_interval(const Game& stage, std::size_t observer, std::size_t actor,
                                       std::size_t action, const Interval& prior) {
  if (stage.num_players() != 2 || observer == actor || observer > 1 || actor > 1)
    throw AnalysisError("relationship inference is defined for 2-player stage games only");

  Interval rationalizing = Interval::empty();
  for (std::size_t b = 0; b < stage.num_strategies(observer); ++b) {
    Interval best = Interval::all();
    StrategyProfile played(2);
    played[actor] = action;
    played[observer] = b;
    for (std::size_t alt = 0; alt < stage.num_strategies(actor); ++alt) {
      if (alt == action) continue;
      StrategyProfile deviated = played;
      deviated[actor] = alt;
      best = best.intersect(linear_inequality_solutions(
          stage.payoff(played, actor) - stage.payoff(deviated, actor),
          stage.payoff(played, observer) - stage.payoff(deviated, observer), false));
    }
    rationalizing = rationalizing.hull(best.intersect(prior));
  }
  return rationalizing;
}

struct UpdateAnnotation {
  std::size_t observer = 0;
  std::size_t actor = 0;
  Interval observed;  // rationalizing interval of this round's action
  Interval tracked;   // stored interval after the update
  bool reset = false;            // intersection was empty, restarted from observation
  bool unrationalizable = false; // action impossible anywhere in the prior box
  Rational previous_estimate;
  Rational estimate;
  std::optional<Rational> previous_relationship;  // set when the own relationship moved
  std::optional<Rational> relationship;
};

struct UpdateResult {
  BeliefState beliefs;
  std::vector<Interval> tracked;  // per actor; unused entries stay as given
  std::vector<UpdateAnnotation> annotations;
};

/// Revises `observer`'s beliefs after seeing `outcome`. Only entries owned by
/// the observer change: supposed[observer][j][observer] and, for mirroring,
/// R[observer][j] together with supposed[observer][observer][j].
inline UpdateResult apply_update(const UpdatePolicy& policy, const Game& stage,
                                 const BeliefState& beliefs, std::size_t observer,
                                 const StrategyProfile& outcome, std::vector<Interval> tracked) {
  UpdateResult result{beliefs, std::move(tracked), {}};
  const RationalizingIntervalPolicy* inference = inference_of(policy);
  if (!inference) return result;

  const bool mirror = std::holds_alternative<TitForTatMirrorPolicy>(policy);
  for (std::size_t actor = 0; actor < stage.num_players(); ++actor) {
    if (actor == observer) continue;
    UpdateAnnotation note;
    note.observer = observer;
    note.actor = actor;
    note.observed = rationalizing_interval(stage, observer, actor, outcome[actor], inference->prior());
    note.previous_estimate = beliefs.supposed(observer, actor, observer);

    Interval& stored = result.tracked.at(actor);
    if (note.observed.is_empty()) {
      note.unrationalizable = true;
    } else {
      Interval merged = stored.intersect(note.observed);
      if (merged.is_empty()) {
        merged = note.observed;
        note.reset = true;
      }
      stored = merged;
      result.beliefs.set_supposed(observer, actor, observer, point_estimate(stored, inference->rule));
    }
    note.tracked = stored;
    note.estimate = result.beliefs.supposed(observer, actor, observer);

    if (mirror) {
      note.previous_relationship = beliefs.relationship(observer, actor);
      note.relationship = note.estimate;
      result.beliefs.set_relationship(observer, actor, note.estimate);
      result.beliefs.set_supposed(observer, observer, actor, note.estimate);
    }
    result.annotations.push_back(std::move(note));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Rounds and simulation

struct RoundDecision {
  StrategyProfile profile;
  std::vector<ComponentProvenance> provenance;
};

using DecisionRule = std::function<RoundDecision(const RelationshipGame&)>;

/// Every player acts on their own supposed game and plays their part of its
/// selected equilibrium. Requires each part to be a pure strategy.
inline RoundDecision play_round(const RelationshipGame& model) {
  AssembledProfile assembled = assembled_profile(model);
  for (const auto& c : assembled.components) {
    if (!pure_component(c.component)) {
      throw EquilibriumSelectionError(
          c.perspective, "the supposed game of " + model.game().player(c.perspective) +
                             " has only mixed equilibria; a round needs a pure action");
    }
  }
  return {assembled.profile(), assembled.components};
}

struct RoundRecord {
  std::size_t round;  // 1-based
  StrategyProfile profile;
  PayoffVector material;
  std::vector<PayoffVector> supposed;  // [k]: k's supposed payoffs at the profile
  std::vector<ComponentProvenance> provenance;
  BeliefState beliefs;  // after updates, i.e. the beliefs of the next round
  std::vector<UpdateAnnotation> annotations;
};

struct SimulationTrace {
  BeliefState initial;
  std::vector<RoundRecord> rounds;
  bool stopped_early = false;
};

struct RepeatedGameConfig {
  Game stage;
  BeliefState initial;
  std::size_t rounds = 1;
  std::vector<UpdatePolicy> policies;
  /// Optional early-termination event, checked after each round.
  std::function<bool(const RoundRecord&)> stop_when;
  /// Defaults to play_round.
  DecisionRule decide;
};

inline void validate_config(const RepeatedGameConfig& config) {
  if (config.rounds < 1) throw ConfigError("a repeated game needs at least 1 round");
  if (config.policies.size() != config.stage.num_players())
    throw ConfigError("expected exactly one update policy per player");
  for (const auto& policy : config.policies) {
    if (const auto* inf = inference_of(policy)) {
      if (inf->prior_lower > inf->prior_upper)
        throw ConfigError("prior interval lower bound exceeds upper bound");
      if (config.stage.num_players() != 2)
        throw ConfigError("interval inference policies need a 2-player stage game");
    }
  }
  require_valid_beliefs(config.initial, config.stage.num_players());
}

inline SimulationTrace simulate(const RepeatedGameConfig& config) {
  validate_config(config);
  const Game& stage = config.stage;
  const std::size_t n = stage.num_players();
  const DecisionRule decide = config.decide ? config.decide : DecisionRule(play_round);

  std::vector<std::vector<Interval>> tracked(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto* inf = inference_of(config.policies[i]);
    tracked[i].assign(n, inf ? inf->prior() : Interval::all());
  }

  SimulationTrace trace{config.initial, {}, false};
  BeliefState beliefs = config.initial;
  for (std::size_t t = 1; t <= config.rounds; ++t) {
    RelationshipGame model(stage, beliefs);
    RoundDecision decision;
    try {
      decision = decide(model);
    } catch (const std::exception& e) {
      throw SimulationError(t, e.what());
    }

    RoundRecord record{t, decision.profile, stage.payoffs(decision.profile), {},
                       std::move(decision.provenance), beliefs, {}};
    for (std::size_t k = 0; k < n; ++k)
      record.supposed.push_back(supposed_payoff_vector(model, k, record.profile));

    // All observers revise from the same pre-round beliefs; each one only
    // touches entries it owns, so the results merge without conflicts.
    BeliefState next = beliefs;
    for (std::size_t i = 0; i < n; ++i) {
      UpdateResult upd = apply_update(config.policies[i], stage, beliefs, i, record.profile,
                                      tracked[i]);
      tracked[i] = std::move(upd.tracked);
      for (std::size_t j = 0; j < n; ++j) {
        next.set_relationship(i, j, upd.beliefs.relationship(i, j));
        for (std::size_t m = 0; m < n; ++m) next.set_supposed(i, j, m, upd.beliefs.supposed(i, j, m));
      }
      for (auto& note : upd.annotations) record.annotations.push_back(std::move(note));
    }
    require_valid_beliefs(next, n);
    beliefs = next;
    record.beliefs = std::move(next);

    trace.rounds.push_back(std::move(record));
    if (config.stop_when && config.stop_when(trace.rounds.back())) {
      trace.stopped_early = t < config.rounds;
      break;
    }
  }
  return trace;
}

}  // namespace relgame
