#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relgame/interval.hpp"
#include "relgame/linear.hpp"
#include "relgame/model.hpp"

namespace relgame {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GameTooLargeError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

/// No equilibrium could be selected from one player's supposed game.
class EquilibriumSelectionError : public AnalysisError {
 public:
  EquilibriumSelectionError(std::size_t perspective, const std::string& what)
      : AnalysisError(what), perspective_(perspective) {}
  std::size_t perspective() const { return perspective_; }

 private:
  std::size_t perspective_;
};

using MixedStrategy = std::vector<Rational>;
using MixedProfile = std::vector<MixedStrategy>;

inline constexpr std::size_t kMixedStrategyBudget = 8;

// ---------------------------------------------------------------------------
// Dominance

enum class DominanceKind { Strict, Weak, None };

inline std::string to_string(DominanceKind k) {
  switch (k) {
    case DominanceKind::Strict: return "strict";
    case DominanceKind::Weak: return "weak";
    case DominanceKind::None: return "none";
  }
  return "unknown";
}

/// One pairwise comparison: `strategy` vs `rival` with the opponents fixed as
/// in `context` (the player's own slot of `context` is ignored).
struct PayoffComparison {
  std::size_t strategy;
  std::size_t rival;
  StrategyProfile context;
  Rational strategy_payoff;
  Rational rival_payoff;
};

struct DominanceResult {
  std::size_t player = 0;
  DominanceKind kind = DominanceKind::None;
  std::optional<std::size_t> strategy;
  /// For a dominant strategy: every comparison it wins or ties. Otherwise one
  /// losing comparison per strategy.
  std::vector<PayoffComparison> certificate;
};

namespace detail {

inline StrategyProfile with_component(StrategyProfile profile, std::size_t player,
                                      std::size_t strategy) {
  profile[player] = strategy;
  return profile;
}

/// Opponent contexts for `player`: every profile with the player's slot at 0.
inline std::vector<StrategyProfile> opponent_contexts(const Game& game, std::size_t player) {
  std::vector<StrategyProfile> out;
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    StrategyProfile p = game.profile_at(idx);
    if (p[player] == 0) out.push_back(std::move(p));
  }
  return out;
}

inline std::string opponents_label(const Game& game, const StrategyProfile& context,
                                   std::size_t player) {
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < context.size(); ++j)
    if (j != player) labels.push_back(game.strategies(j)[context[j]]);
  if (labels.size() == 1) return labels.front();
  std::string out = "(";
  for (std::size_t k = 0; k < labels.size(); ++k) out += (k ? ", " : "") + labels[k];
  return out + ")";
}

}  // namespace detail

inline DominanceResult dominant_strategies(const Game& game, std::size_t player) {
  const auto contexts = detail::opponent_contexts(game, player);
  const std::size_t m = game.num_strategies(player);

  DominanceResult result;
  result.player = player;
  std::optional<std::pair<std::size_t, std::vector<PayoffComparison>>> weak;
  std::vector<PayoffComparison> losses;

  for (std::size_t s = 0; s < m; ++s) {
    bool strict = true, never_worse = true, sometimes_better = false;
    std::vector<PayoffComparison> cert;
    std::optional<PayoffComparison> loss;
    for (std::size_t t = 0; t < m; ++t) {
      if (t == s) continue;
      for (const auto& ctx : contexts) {
        const Rational& mine = game.payoff(detail::with_component(ctx, player, s), player);
        const Rational& theirs = game.payoff(detail::with_component(ctx, player, t), player);
        PayoffComparison cmp{s, t, ctx, mine, theirs};
        if (mine <= theirs) strict = false;
        if (mine > theirs) sometimes_better = true;
        if (mine < theirs) {
          never_worse = false;
          if (!loss) loss = cmp;
        }
        cert.push_back(std::move(cmp));
      }
    }
    if (strict) {
      result.kind = DominanceKind::Strict;
      result.strategy = s;
      result.certificate = std::move(cert);
      return result;
    }
    if (never_worse && sometimes_better && !weak) weak.emplace(s, std::move(cert));
    if (loss) losses.push_back(*loss);
  }
  if (weak) {
    result.kind = DominanceKind::Weak;
    result.strategy = weak->first;
    result.certificate = std::move(weak->second);
  } else {
    result.certificate = std::move(losses);
  }
  return result;
}

inline std::vector<DominanceResult> dominance_report(const Game& game) {
  std::vector<DominanceResult> out;
  for (std::size_t i = 0; i < game.num_players(); ++i) out.push_back(dominant_strategies(game, i));
  return out;
}

// ---------------------------------------------------------------------------
// Threshold regions of a 2x2 game with one free relationship per player

struct StrategyRegion {
  std::size_t strategy;
  Interval weak;    // >= against every opponent strategy
  Interval strict;  // >  against every opponent strategy
};

/// Dominance regions for one player of a 2x2 game whose own payoff is
/// `u_self + r * u_other`, as a function of r.
struct PlayerRegions {
  std::size_t player;
  std::array<StrategyRegion, 2> dominant;
};

/// While the opponent's belief parameter lies in `belief`, the opponent's
/// `opponent_strategy` is weakly dominant and the player answers with `play`.
struct BeliefRule {
  std::size_t opponent_strategy;
  Interval belief;
  std::size_t play;
};

/// A stretch of r where neither of the player's strategies is dominant and
/// the choice is decided by the prediction of the opponent.
struct MiddleRegion {
  Interval relationship;
  std::array<std::size_t, 2> best_response;  // indexed by opponent strategy
  std::vector<BeliefRule> rules;
};

struct ThresholdRegions {
  PlayerRegions row;     // parameter: row's relationship toward column
  PlayerRegions column;  // parameter: row's belief about column's relationship
  std::vector<MiddleRegion> middle;
};

namespace detail {

inline PlayerRegions player_regions(const Game& game, std::size_t self) {
  const std::size_t other = 1 - self;
  PlayerRegions regions{self, {}};
  for (std::size_t s = 0; s < 2; ++s) {
    const std::size_t t = 1 - s;
    Interval weak = Interval::all(), strict = Interval::all();
    for (std::size_t b = 0; b < 2; ++b) {
      StrategyProfile ps(2), pt(2);
      ps[self] = s, ps[other] = b;
      pt[self] = t, pt[other] = b;
      Rational constant = game.payoff(ps, self) - game.payoff(pt, self);
      Rational slope = game.payoff(ps, other) - game.payoff(pt, other);
      weak = weak.intersect(linear_inequality_solutions(constant, slope, false));
      strict = strict.intersect(linear_inequality_solutions(constant, slope, true));
    }
    regions.dominant[s] = StrategyRegion{s, weak, strict};
  }
  return regions;
}

}  // namespace detail

inline ThresholdRegions pd_threshold_regions(const Game& game) {
  if (game.num_players() != 2 || game.num_strategies(0) != 2 || game.num_strategies(1) != 2)
    throw DimensionError("threshold regions need a 2x2 game");

  ThresholdRegions out{detail::player_regions(game, 0), detail::player_regions(game, 1), {}};

  // gain[b](r): advantage of row strategy 0 over 1 against column strategy b.
  std::array<std::pair<Rational, Rational>, 2> gain;
  for (std::size_t b = 0; b < 2; ++b) {
    gain[b] = {game.payoff({0, b}, 0) - game.payoff({1, b}, 0),
               game.payoff({0, b}, 1) - game.payoff({1, b}, 1)};
  }
  // Neither strategy dominant <=> the two gains have opposite strict signs.
  for (std::size_t positive = 0; positive < 2; ++positive) {
    const std::size_t negative = 1 - positive;
    Interval piece =
        linear_inequality_solutions(gain[positive].first, gain[positive].second, true)
            .intersect(linear_inequality_solutions(-gain[negative].first,
                                                   -gain[negative].second, true));
    if (piece.is_empty()) continue;
    MiddleRegion region{piece, {}, {}};
    region.best_response[positive] = 0;
    region.best_response[negative] = 1;
    for (std::size_t c = 0; c < 2; ++c) {
      const Interval& belief = out.column.dominant[c].weak;
      if (!belief.is_empty()) region.rules.push_back({c, belief, region.best_response[c]});
    }
    out.middle.push_back(std::move(region));
  }
  std::sort(out.middle.begin(), out.middle.end(), [](const auto& a, const auto& b) {
    const auto& la = a.relationship.lower();
    const auto& lb = b.relationship.lower();
    if (!la || !lb) return !la && lb;
    return la->value < lb->value;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Pure equilibria

inline bool is_best_response(const Game& game, const StrategyProfile& profile, std::size_t player) {
  const Rational& current = game.payoff(profile, player);
  for (std::size_t t = 0; t < game.num_strategies(player); ++t) {
    if (game.payoff(detail::with_component(profile, player, t), player) > current) return false;
  }
  return true;
}

inline bool is_pure_nash(const Game& game, const StrategyProfile& profile) {
  for (std::size_t i = 0; i < game.num_players(); ++i)
    if (!is_best_response(game, profile, i)) return false;
  return true;
}

/// All pure equilibria in ascending profile-index order.
inline std::vector<StrategyProfile> enumerate_pure_nash(const Game& game) {
  std::vector<StrategyProfile> out;
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    StrategyProfile p = game.profile_at(idx);
    if (is_pure_nash(game, p)) out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mixed equilibria of two-player games by support enumeration

namespace detail {

inline std::vector<std::uint32_t> ordered_supports(std::size_t m) {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  return masks;
}

inline std::vector<std::size_t> members(std::uint32_t mask, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < m; ++s)
    if (mask & (1u << s)) out.push_back(s);
  return out;
}

/// Mix of `mover` over `mover_support` that makes `responder` indifferent
/// across `responder_support` and no better off outside it.
inline std::optional<MixedStrategy> indifference_mix(const Game& game, std::size_t mover,
                                                     const std::vector<std::size_t>& mover_support,
                                                     std::size_t responder,
                                                     const std::vector<std::size_t>& responder_support) {
  const std::size_t mm = game.num_strategies(mover);
  const std::size_t mr = game.num_strategies(responder);
  auto payoff = [&](std::size_t r, std::size_t s) {
    StrategyProfile p(2);
    p[responder] = r;
    p[mover] = s;
    return game.payoff(p, responder);
  };

  // Unknowns: weights on mover_support, then the common value.
  const std::size_t k = mover_support.size();
  std::vector<std::vector<Rational>> lhs;
  std::vector<Rational> rhs;
  for (std::size_t r : responder_support) {
    std::vector<Rational> row(k + 1, Rational(0));
    for (std::size_t c = 0; c < k; ++c) row[c] = payoff(r, mover_support[c]);
    row[k] = -1;
    lhs.push_back(std::move(row));
    rhs.emplace_back(0);
  }
  std::vector<Rational> total(k + 1, Rational(1));
  total[k] = 0;
  lhs.push_back(std::move(total));
  rhs.emplace_back(1);

  auto solution = solve_linear_system(std::move(lhs), std::move(rhs));
  if (!solution) return std::nullopt;

  MixedStrategy mix(mm, Rational(0));
  for (std::size_t c = 0; c < k; ++c) {
    if ((*solution)[c] < 0) return std::nullopt;
    mix[mover_support[c]] = (*solution)[c];
  }
  const Rational& value = (*solution)[k];
  for (std::size_t r = 0; r < mr; ++r) {
    Rational expected = 0;
    for (std::size_t s = 0; s < mm; ++s) expected += mix[s] * payoff(r, s);
    if (expected > value) return std::nullopt;
  }
  return mix;
}

}  // namespace detail

/// Support enumeration over every pair of supports, smallest supports first.
/// Degenerate games contribute one representative solution per support pair.
inline std::vector<MixedProfile> enumerate_mixed_nash_2p(const Game& game) {
  if (game.num_players() != 2) throw AnalysisError("mixed equilibria need exactly 2 players");
  const std::size_t m0 = game.num_strategies(0), m1 = game.num_strategies(1);
  if (m0 > kMixedStrategyBudget || m1 > kMixedStrategyBudget) {
    throw GameTooLargeError("game too large for support enumeration: at most " +
                            std::to_string(kMixedStrategyBudget) + " strategies per player");
  }
  const auto rows = detail::ordered_supports(m0);
  const auto cols = detail::ordered_supports(m1);

  struct Pair {
    std::size_t size, ri, ci;
  };
  std::vector<Pair> pairs;
  for (std::size_t ri = 0; ri < rows.size(); ++ri)
    for (std::size_t ci = 0; ci < cols.size(); ++ci)
      pairs.push_back({static_cast<std::size_t>(std::popcount(rows[ri]) + std::popcount(cols[ci])),
                       ri, ci});
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.size < b.size; });

  std::vector<MixedProfile> out;
  for (const auto& pair : pairs) {
    auto row_support = detail::members(rows[pair.ri], m0);
    auto col_support = detail::members(cols[pair.ci], m1);
    auto col_mix = detail::indifference_mix(game, 1, col_support, 0, row_support);
    if (!col_mix) continue;
    auto row_mix = detail::indifference_mix(game, 0, row_support, 1, col_support);
    if (!row_mix) continue;
    MixedProfile profile{std::move(*row_mix), std::move(*col_mix)};
    if (std::find(out.begin(), out.end(), profile) == out.end()) out.push_back(std::move(profile));
  }
  return out;
}

inline MixedStrategy point_mass(std::size_t strategies, std::size_t s) {
  MixedStrategy out(strategies, Rational(0));
  out.at(s) = 1;
  return out;
}

inline std::optional<std::size_t> pure_component(const MixedStrategy& mix) {
  for (std::size_t s = 0; s < mix.size(); ++s)
    if (mix[s] == 1) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Profile assembled from each player's own supposed game

struct SelectedEquilibrium {
  bool pure = true;
  std::size_t rank = 0;  // position in the deterministic candidate order
  StrategyProfile pure_profile;
  MixedProfile mixed_profile;
};

struct ComponentProvenance {
  std::size_t perspective;
  SelectedEquilibrium source;
  MixedStrategy component;
};

struct AssembledProfile {
  std::vector<ComponentProvenance> components;

  bool is_pure() const {
    return std::all_of(components.begin(), components.end(),
                       [](const auto& c) { return pure_component(c.component).has_value(); });
  }
  StrategyProfile profile() const {
    StrategyProfile out;
    for (const auto& c : components) {
      auto s = pure_component(c.component);
      if (!s) throw AnalysisError("assembled profile is not pure");
      out.push_back(*s);
    }
    return out;
  }
  MixedProfile mixed() const {
    MixedProfile out;
    for (const auto& c : components) out.push_back(c.component);
    return out;
  }
};

/// First equilibrium of a game under the selection order: pure equilibria by
/// ascending profile index, then (two players only) mixed by support.
inline std::optional<SelectedEquilibrium> select_equilibrium(const Game& game) {
  auto pure = enumerate_pure_nash(game);
  if (!pure.empty()) return SelectedEquilibrium{true, 0, pure.front(), {}};
  if (game.num_players() != 2) return std::nullopt;
  auto mixed = enumerate_mixed_nash_2p(game);
  if (mixed.empty()) return std::nullopt;
  return SelectedEquilibrium{false, 0, {}, mixed.front()};
}

/// Each player solves their own supposed game and keeps their own part of
/// the selected equilibrium; the parts together form the returned profile.
inline AssembledProfile assembled_profile(const RelationshipGame& model) {
  AssembledProfile out;
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    SupposedGame sg = build_supposed_game(model, i);
    std::optional<SelectedEquilibrium> chosen;
    try {
      chosen = select_equilibrium(sg.game);
    } catch (const GameTooLargeError& e) {
      throw EquilibriumSelectionError(i, "no equilibrium selectable in the supposed game of " +
                                             model.game().player(i) + ": " + e.what());
    }
    if (!chosen) {
      throw EquilibriumSelectionError(
          i, "no equilibrium selectable in the supposed game of " + model.game().player(i) +
                 (model.num_players() > 2 ? " (no pure equilibrium; mixed search is 2-player only)"
                                          : ""));
    }
    MixedStrategy component =
        chosen->pure ? point_mass(model.game().num_strategies(i), chosen->pure_profile[i])
                     : chosen->mixed_profile[i];
    out.components.push_back({i, std::move(*chosen), std::move(component)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks of a pure profile against the players' supposed games

struct PlayerCheck {
  std::size_t player = 0;
  bool passed = false;
  std::string certificate;
  /// Subjective: the supporting equilibrium. Objective: the best alternative.
  std::optional<StrategyProfile> witness;
  Rational current_payoff;
  Rational best_payoff;
};

struct CheckResult {
  std::vector<PlayerCheck> players;
  bool all_passed() const {
    return std::all_of(players.begin(), players.end(), [](const auto& p) { return p.passed; });
  }
};

/// Player i passes when profile[i] is i's part of some equilibrium of i's own
/// supposed game.
inline CheckResult subjective_check(const RelationshipGame& model, const StrategyProfile& profile) {
  const Game& game = model.game();
  CheckResult out;
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    SupposedGame sg = build_supposed_game(model, i);
    PlayerCheck check;
    check.player = i;
    for (const auto& eq : enumerate_pure_nash(sg.game)) {
      if (eq[i] == profile[i]) {
        check.passed = true;
        check.witness = eq;
        check.certificate = game.strategies(i)[profile[i]] + " is " + game.player(i) +
                            "'s part of " + game.profile_label(eq) + ", an equilibrium of " +
                            game.player(i) + "'s supposed game";
        break;
      }
    }
    if (!check.passed && model.num_players() == 2 &&
        game.num_strategies(0) <= kMixedStrategyBudget &&
        game.num_strategies(1) <= kMixedStrategyBudget) {
      for (const auto& eq : enumerate_mixed_nash_2p(sg.game)) {
        if (pure_component(eq[i]) == profile[i]) {
          check.passed = true;
          check.certificate = game.strategies(i)[profile[i]] + " is " + game.player(i) +
                              "'s part of a mixed equilibrium of " + game.player(i) +
                              "'s supposed game";
          break;
        }
      }
    }
    if (!check.passed) {
      check.certificate = "no equilibrium of " + game.player(i) + "'s supposed game has " +
                          game.player(i) + " playing " + game.strategies(i)[profile[i]];
    }
    out.players.push_back(std::move(check));
  }
  return out;
}

/// Player i passes when profile[i] maximizes i's own supposed payoff against
/// what the others actually play.
inline CheckResult objective_check(const RelationshipGame& model, const StrategyProfile& profile) {
  const Game& game = model.game();
  CheckResult out;
  for (std::size_t i = 0; i < model.num_players(); ++i) {
    PlayerCheck check;
    check.player = i;
    check.current_payoff = supposed_payoff(model, i, i, profile);
    check.best_payoff = check.current_payoff;
    std::optional<std::size_t> best;
    for (std::size_t t = 0; t < game.num_strategies(i); ++t) {
      Rational value = supposed_payoff(model, i, i, detail::with_component(profile, i, t));
      if (value > check.best_payoff) {
        check.best_payoff = value;
        best = t;
      }
    }
    const std::string against = detail::opponents_label(game, profile, i);
    if (best) {
      check.witness = detail::with_component(profile, i, *best);
      check.certificate = game.strategies(i)[*best] + " yields " + to_string(check.best_payoff) +
                          " > " + to_string(check.current_payoff) + " against " + against;
    } else {
      check.passed = true;
      check.certificate = game.strategies(i)[profile[i]] + " yields " +
                          to_string(check.current_payoff) + ", no deviation does better against " +
                          against;
    }
    out.players.push_back(std::move(check));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full equilibrium report

struct PerspectiveEquilibria {
  std::size_t perspective;
  std::vector<StrategyProfile> pure;
  std::vector<MixedProfile> mixed;  // empty unless 2 players within budget
};

struct EquilibriumReport {
  std::vector<StrategyProfile> material_pure;
  std::vector<MixedProfile> material_mixed;
  std::vector<PerspectiveEquilibria> perspectives;
  std::optional<AssembledProfile> assembled;
  std::string assembly_error;
  std::optional<CheckResult> subjective;
  std::optional<CheckResult> objective;
};

inline bool mixed_search_applies(const Game& game) {
  return game.num_players() == 2 && game.num_strategies(0) <= kMixedStrategyBudget &&
         game.num_strategies(1) <= kMixedStrategyBudget;
}

inline EquilibriumReport analyze_equilibria(const RelationshipGame& model) {
  EquilibriumReport report;
  const Game& game = model.game();
  report.material_pure = enumerate_pure_nash(game);
  if (mixed_search_applies(game)) report.material_mixed = enumerate_mixed_nash_2p(game);
  for (std::size_t k = 0; k < model.num_players(); ++k) {
    SupposedGame sg = build_supposed_game(model, k);
    PerspectiveEquilibria pe{k, enumerate_pure_nash(sg.game), {}};
    if (mixed_search_applies(sg.game)) pe.mixed = enumerate_mixed_nash_2p(sg.game);
    report.perspectives.push_back(std::move(pe));
  }
  try {
    report.assembled = assembled_profile(model);
  } catch (const EquilibriumSelectionError& e) {
    report.assembly_error = e.what();
  }
  if (report.assembled && report.assembled->is_pure()) {
    StrategyProfile profile = report.assembled->profile();
    report.subjective = subjective_check(model, profile);
    report.objective = objective_check(model, profile);
  }
  return report;
}

}  // namespace relgame
