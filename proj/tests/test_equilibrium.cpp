#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "relgame/builtin.hpp"
#include "relgame/equilibrium.hpp"

namespace relgame {
namespace {

Rational q(long long n, long long d = 1) { return make_rational(n, d); }

const StrategyProfile CC{0, 0}, CD{0, 1}, DC{1, 0}, DD{1, 1};
constexpr std::size_t C = 0, D = 1;

Game supposed_pd(const Rational& r_xy, const Rational& belief_yx) {
  BeliefState b = builtin::pd_beliefs(r_xy, belief_yx);
  RelationshipGame model(builtin::prisoners_dilemma(), b);
  return build_supposed_game(model, 0).game;
}

Game matching_pennies() {
  return Game({"a", "b"}, {{"H", "T"}, {"H", "T"}}, {{1, -1}, {-1, 1}, {-1, 1}, {1, -1}});
}

RelationshipGame underestimated_pd() {
  return {builtin::prisoners_dilemma(), builtin::pd_underestimated_beliefs()};
}

// --- dominance -------------------------------------------------------------

TEST(Dominance, HighRelationshipMakesCooperationStrictlyDominant) {
  // Oracle: with R = 3/4 the row payoffs are C: 3 + 3R = 21/4, 5R = 15/4 and
  // D: 5, 1 + R = 7/4; C wins both columns.
  auto d = dominant_strategies(supposed_pd(q(3, 4), 0), 0);
  EXPECT_EQ(d.kind, DominanceKind::Strict);
  EXPECT_EQ(d.strategy, C);
  ASSERT_EQ(d.certificate.size(), 2u);
  EXPECT_EQ(d.certificate[0].strategy_payoff, q(21, 4));
  EXPECT_EQ(d.certificate[0].rival_payoff, 5);
  EXPECT_EQ(d.certificate[1].strategy_payoff, q(15, 4));
  EXPECT_EQ(d.certificate[1].rival_payoff, q(7, 4));
}

TEST(Dominance, ClassicalPdDefects) {
  auto d = dominant_strategies(supposed_pd(0, 0), 0);
  EXPECT_EQ(d.kind, DominanceKind::Strict);
  EXPECT_EQ(d.strategy, D);
}

TEST(Dominance, UnderestimatedPdRowHasNoneColumnDefects) {
  Game x = build_supposed_game(underestimated_pd(), 0).game;
  auto row = dominant_strategies(x, 0);
  EXPECT_EQ(row.kind, DominanceKind::None);
  EXPECT_FALSE(row.strategy);
  EXPECT_EQ(row.certificate.size(), 2u);  // one losing comparison per strategy
  auto col = dominant_strategies(x, 1);
  EXPECT_EQ(col.kind, DominanceKind::Strict);
  EXPECT_EQ(col.strategy, D);
  EXPECT_EQ(col.certificate[0].strategy_payoff, 5);
  EXPECT_EQ(col.certificate[0].rival_payoff, q(18, 5));
  EXPECT_EQ(col.certificate[1].strategy_payoff, q(6, 5));
  EXPECT_EQ(col.certificate[1].rival_payoff, 1);
}

TEST(Dominance, ThresholdsAreWeakButNotStrict) {
  auto at_two_thirds = dominant_strategies(supposed_pd(q(2, 3), 0), 0);
  EXPECT_EQ(at_two_thirds.kind, DominanceKind::Weak);
  EXPECT_EQ(at_two_thirds.strategy, C);
  auto at_quarter = dominant_strategies(supposed_pd(q(1, 4), 0), 0);
  EXPECT_EQ(at_quarter.kind, DominanceKind::Weak);
  EXPECT_EQ(at_quarter.strategy, D);
}

TEST(Dominance, ConstantGameHasNoDominantStrategy) {
  Game flat({"a", "b"}, {{"u", "v"}, {"l", "r"}}, std::vector<PayoffVector>(4, PayoffVector{2, 2}));
  EXPECT_EQ(dominant_strategies(flat, 0).kind, DominanceKind::None);
}

TEST(Dominance, SingleStrategyIsTriviallyDominant) {
  Game g({"a", "b"}, {{"only"}, {"l", "r"}}, {{1, 0}, {2, 3}});
  EXPECT_EQ(dominant_strategies(g, 0).kind, DominanceKind::Strict);
}

// --- threshold regions -----------------------------------------------------

TEST(ThresholdRegions, PrisonersDilemmaConstants) {
  ThresholdRegions tr = pd_threshold_regions(builtin::prisoners_dilemma());
  EXPECT_EQ(tr.row.dominant[C].weak, Interval::at_least(q(2, 3)));
  EXPECT_EQ(tr.row.dominant[C].strict, Interval::at_least(q(2, 3), false));
  EXPECT_EQ(tr.row.dominant[D].weak, Interval::at_most(q(1, 4)));
  EXPECT_EQ(tr.row.dominant[D].strict, Interval::at_most(q(1, 4), false));
  EXPECT_EQ(tr.column.dominant[C].weak, Interval::at_least(q(2, 3)));
  EXPECT_EQ(tr.column.dominant[D].weak, Interval::at_most(q(1, 4)));

  ASSERT_EQ(tr.middle.size(), 1u);
  const MiddleRegion& mid = tr.middle[0];
  EXPECT_EQ(mid.relationship, Interval::open(q(1, 4), q(2, 3)));
  EXPECT_EQ(mid.best_response[C], D);
  EXPECT_EQ(mid.best_response[D], C);
  ASSERT_EQ(mid.rules.size(), 2u);
  EXPECT_EQ(mid.rules[0].opponent_strategy, C);
  EXPECT_EQ(mid.rules[0].belief, Interval::at_least(q(2, 3)));
  EXPECT_EQ(mid.rules[0].play, D);
  EXPECT_EQ(mid.rules[1].opponent_strategy, D);
  EXPECT_EQ(mid.rules[1].belief, Interval::at_most(q(1, 4)));
  EXPECT_EQ(mid.rules[1].play, C);
}

TEST(ThresholdRegions, AgreeWithConcreteDominanceOnAGrid) {
  ThresholdRegions tr = pd_threshold_regions(builtin::prisoners_dilemma());
  for (int k = -60; k <= 120; ++k) {
    Rational r = q(k, 60);
    auto d = dominant_strategies(supposed_pd(r, 0), 0);
    bool c_weak = d.kind != DominanceKind::None && d.strategy == C;
    bool d_weak = d.kind != DominanceKind::None && d.strategy == D;
    bool c_strict = d.kind == DominanceKind::Strict && d.strategy == C;
    EXPECT_EQ(tr.row.dominant[C].weak.contains(r), c_weak) << to_string(r);
    EXPECT_EQ(tr.row.dominant[D].weak.contains(r), d_weak) << to_string(r);
    EXPECT_EQ(tr.row.dominant[C].strict.contains(r), c_strict) << to_string(r);
    EXPECT_EQ(tr.middle[0].relationship.contains(r), d.kind == DominanceKind::None) << to_string(r);
  }
}

TEST(ThresholdRegions, MiddleRegionChoiceFollowsBelief) {
  // Row at R = 1/2; the column's believed relationship decides.
  for (int k = -20; k <= 40; ++k) {
    Rational b = q(k, 20);
    Game x = supposed_pd(q(1, 2), b);
    auto pure = enumerate_pure_nash(x);
    if (b < q(1, 4)) {
      ASSERT_EQ(pure.size(), 1u);
      EXPECT_EQ(pure[0][0], C);
    } else if (b > q(2, 3)) {
      ASSERT_EQ(pure.size(), 1u);
      EXPECT_EQ(pure[0][0], D);
    }
  }
}

TEST(ThresholdRegions, DegenerateGameIsWeakEverywhere) {
  Game flat({"a", "b"}, {{"u", "v"}, {"l", "r"}}, std::vector<PayoffVector>(4, PayoffVector{1, 1}));
  ThresholdRegions tr = pd_threshold_regions(flat);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(tr.row.dominant[s].weak, Interval::all());
    EXPECT_TRUE(tr.row.dominant[s].strict.is_empty());
  }
  EXPECT_TRUE(tr.middle.empty());
}

TEST(ThresholdRegions, RejectsNonTwoByTwo) {
  Game g({"a", "b"}, {{"u", "v", "w"}, {"l", "r"}}, std::vector<PayoffVector>(6, PayoffVector{0, 0}));
  EXPECT_THROW(pd_threshold_regions(g), DimensionError);
}

// --- pure equilibria -------------------------------------------------------

TEST(PureNash, Examples) {
  EXPECT_EQ(enumerate_pure_nash(builtin::prisoners_dilemma()), std::vector<StrategyProfile>{DD});
  EXPECT_EQ(enumerate_pure_nash(build_supposed_game(underestimated_pd(), 0).game),
            std::vector<StrategyProfile>{CD});
  // Oracle cells for all-ones: (6,6) (5,5) (5,5) (2,2).
  Game coop = build_supposed_game({builtin::prisoners_dilemma(), builtin::pd_beliefs(1, 1)}, 0).game;
  EXPECT_EQ(coop.payoffs(CC), (PayoffVector{6, 6}));
  EXPECT_EQ(coop.payoffs(DD), (PayoffVector{2, 2}));
  EXPECT_EQ(enumerate_pure_nash(coop), std::vector<StrategyProfile>{CC});
  EXPECT_TRUE(enumerate_pure_nash(matching_pennies()).empty());
}

TEST(PureNash, MatchesBruteForceOnRandomGames) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    oracle::RawGame raw = oracle::random_game(rng, 2 + trial % 2, 3);
    Game game = oracle::to_game(raw);
    auto found = enumerate_pure_nash(game);
    auto expected = oracle::material_pure_nash(raw);
    EXPECT_EQ(found, expected);
    for (const auto& p : found) EXPECT_TRUE(is_pure_nash(game, p));
  }
}

// --- mixed equilibria ------------------------------------------------------

bool is_mixed_equilibrium(const Game& g, const MixedProfile& m) {
  for (std::size_t i = 0; i < 2; ++i) {
    Rational sum = 0;
    for (const auto& p : m[i]) {
      if (p < 0) return false;
      sum += p;
    }
    if (sum != 1) return false;
  }
  auto expected = [&](std::size_t player, std::size_t pure) {
    Rational v = 0;
    std::size_t other = 1 - player;
    for (std::size_t t = 0; t < g.num_strategies(other); ++t) {
      StrategyProfile p(2);
      p[player] = pure;
      p[other] = t;
      v += m[other][t] * g.payoff(p, player);
    }
    return v;
  };
  for (std::size_t i = 0; i < 2; ++i) {
    Rational value = 0;
    for (std::size_t s = 0; s < g.num_strategies(i); ++s) value += m[i][s] * expected(i, s);
    for (std::size_t s = 0; s < g.num_strategies(i); ++s)
      if (expected(i, s) > value) return false;
  }
  return true;
}

TEST(MixedNash, MatchingPenniesIsUniform) {
  auto eqs = enumerate_mixed_nash_2p(matching_pennies());
  ASSERT_EQ(eqs.size(), 1u);
  EXPECT_EQ(eqs[0], (MixedProfile{{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}}));
}

TEST(MixedNash, PrisonersDilemmaIsPureDefection) {
  auto eqs = enumerate_mixed_nash_2p(builtin::prisoners_dilemma());
  EXPECT_EQ(eqs, (std::vector<MixedProfile>{{{0, 1}, {0, 1}}}));
}

TEST(MixedNash, UnderestimatedPdSupposedGameHasOnlyThePureEquilibrium) {
  auto eqs = enumerate_mixed_nash_2p(build_supposed_game(underestimated_pd(), 0).game);
  EXPECT_EQ(eqs, (std::vector<MixedProfile>{{{1, 0}, {0, 1}}}));
}

TEST(MixedNash, RockPaperScissors) {
  Game rps({"a", "b"}, {{"R", "P", "S"}, {"R", "P", "S"}},
           {{0, 0}, {-1, 1}, {1, -1}, {1, -1}, {0, 0}, {-1, 1}, {-1, 1}, {1, -1}, {0, 0}});
  auto eqs = enumerate_mixed_nash_2p(rps);
  ASSERT_EQ(eqs.size(), 1u);
  MixedStrategy third(3, q(1, 3));
  EXPECT_EQ(eqs[0], (MixedProfile{third, third}));
}

TEST(MixedNash, BattleOfTheSexesHasThreeEquilibria) {
  Game bos({"a", "b"}, {{"O", "F"}, {"O", "F"}}, {{2, 1}, {0, 0}, {0, 0}, {1, 2}});
  auto eqs = enumerate_mixed_nash_2p(bos);
  ASSERT_EQ(eqs.size(), 3u);
  EXPECT_EQ(eqs[0], (MixedProfile{{1, 0}, {1, 0}}));
  EXPECT_EQ(eqs[1], (MixedProfile{{0, 1}, {0, 1}}));
  EXPECT_EQ(eqs[2], (MixedProfile{{q(2, 3), q(1, 3)}, {q(1, 3), q(2, 3)}}));
}

TEST(MixedNash, EveryResultIsAnEquilibriumOnRandomGames) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Game game = oracle::to_game(oracle::random_game(rng, 2, 4));
    auto eqs = enumerate_mixed_nash_2p(game);
    EXPECT_FALSE(eqs.empty());
    for (const auto& m : eqs) EXPECT_TRUE(is_mixed_equilibrium(game, m));
    // Pure equilibria appear as point masses.
    for (const auto& p : enumerate_pure_nash(game)) {
      MixedProfile pm{point_mass(game.num_strategies(0), p[0]), point_mass(game.num_strategies(1), p[1])};
      EXPECT_NE(std::find(eqs.begin(), eqs.end(), pm), eqs.end());
    }
  }
}

TEST(MixedNash, BudgetAndPlayerCountErrors) {
  std::vector<std::string> nine;
  for (int i = 0; i < 9; ++i) nine.push_back(std::to_string(i));
  Game big({"a", "b"}, {nine, {"l", "r"}}, std::vector<PayoffVector>(18, PayoffVector{0, 0}));
  EXPECT_THROW(enumerate_mixed_nash_2p(big), GameTooLargeError);
  Game three({"a", "b", "c"}, {{"0", "1"}, {"0", "1"}, {"0", "1"}},
             std::vector<PayoffVector>(8, PayoffVector{0, 0, 0}));
  EXPECT_THROW(enumerate_mixed_nash_2p(three), AnalysisError);
}

// --- assembled profile and checks -------------------------------------------

TEST(AssembledProfile, UnderestimatedPdGivesMutualCooperation) {
  AssembledProfile a = assembled_profile(underestimated_pd());
  ASSERT_TRUE(a.is_pure());
  EXPECT_EQ(a.profile(), CC);
  EXPECT_EQ(a.components[0].source.pure_profile, CD);
  EXPECT_EQ(a.components[1].source.pure_profile, DC);
  EXPECT_TRUE(a.components[0].source.pure);
}

TEST(AssembledProfile, CompleteInformationCases) {
  auto run = [](const Rational& rxy, const Rational& ryx) {
    return assembled_profile({builtin::prisoners_dilemma(), builtin::pd_beliefs(rxy, ryx)}).profile();
  };
  EXPECT_EQ(run(0, 0), DD);
  EXPECT_EQ(run(q(3, 4), 0), CD);
  EXPECT_EQ(run(q(2, 3), q(1, 4)), CD);
  EXPECT_EQ(run(0, q(3, 4)), DC);
  EXPECT_EQ(run(1, 1), CC);
}

TEST(AssembledProfile, FallsBackToMixedForTwoPlayers) {
  AssembledProfile a = assembled_profile({matching_pennies(), BeliefState(2)});
  EXPECT_FALSE(a.is_pure());
  EXPECT_FALSE(a.components[0].source.pure);
  EXPECT_EQ(a.components[0].component, (MixedStrategy{q(1, 2), q(1, 2)}));
  EXPECT_THROW(a.profile(), AnalysisError);
}

TEST(AssembledProfile, ThreePlayersWithoutPureEquilibriumNamesPerspective) {
  // Players a and b play matching pennies; c is indifferent.
  std::vector<PayoffVector> table;
  for (int s0 = 0; s0 < 2; ++s0)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        int win = s0 == s1 ? 1 : -1;
        table.push_back({win, -win, 0});
      }
  Game g({"a", "b", "c"}, {{"H", "T"}, {"H", "T"}, {"x", "y"}}, table);
  try {
    assembled_profile({g, BeliefState(3)});
    FAIL() << "expected EquilibriumSelectionError";
  } catch (const EquilibriumSelectionError& e) {
    EXPECT_EQ(e.perspective(), 0u);
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
}

TEST(SubjectiveCheck, UnderestimatedPd) {
  RelationshipGame model = underestimated_pd();
  CheckResult cc = subjective_check(model, CC);
  EXPECT_TRUE(cc.players[0].passed);
  EXPECT_TRUE(cc.players[1].passed);
  EXPECT_EQ(cc.players[0].witness, CD);
  EXPECT_EQ(cc.players[1].witness, DC);
  CheckResult dd = subjective_check(model, DD);
  EXPECT_FALSE(dd.players[0].passed);
  EXPECT_FALSE(dd.players[1].passed);
}

TEST(ObjectiveCheck, UnderestimatedPdFailsBothWithCertificate) {
  CheckResult r = objective_check(underestimated_pd(), CC);
  for (const auto& p : r.players) {
    EXPECT_FALSE(p.passed);
    EXPECT_EQ(p.certificate, "D yields 5 > 4 against C");
    EXPECT_EQ(p.best_payoff, 5);
    EXPECT_EQ(p.current_payoff, 4);
  }
  EXPECT_EQ(r.players[0].witness, DC);
  EXPECT_EQ(r.players[1].witness, CD);
}

TEST(ObjectiveCheck, ClassicalDefectionPasses) {
  CheckResult r = objective_check({builtin::prisoners_dilemma(), BeliefState(2)}, DD);
  EXPECT_TRUE(r.all_passed());
}

TEST(AssembledProfile, PassesSubjectiveCheckOnRandomGames) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::RawGame raw = oracle::random_game(rng, 2 + trial % 2, 3);
    Game game = oracle::to_game(raw);
    RelationshipGame model(game, oracle::random_beliefs(rng, game.num_players()));
    bool all_pure = true;
    for (std::size_t k = 0; k < game.num_players(); ++k)
      all_pure = all_pure && !enumerate_pure_nash(build_supposed_game(model, k).game).empty();
    if (!all_pure) continue;
    AssembledProfile a = assembled_profile(model);
    EXPECT_TRUE(subjective_check(model, a.profile()).all_passed());
  }
}

TEST(AssembledProfile, CompleteInformationPassesObjectiveCheck) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::RawGame raw = oracle::random_game(rng, 2 + trial % 2, 3);
    Game game = oracle::to_game(raw);
    BeliefState random = oracle::random_beliefs(rng, game.num_players());
    RelationshipGame model(game, BeliefState::complete_information(random.relationship_matrix()));
    if (enumerate_pure_nash(build_supposed_game(model, 0).game).empty()) continue;
    StrategyProfile p = assembled_profile(model).profile();
    EXPECT_TRUE(objective_check(model, p).all_passed());
    EXPECT_TRUE(is_pure_nash(build_supposed_game(model, 0).game, p));
  }
}

// --- invariance --------------------------------------------------------------

struct Summary {
  std::vector<std::pair<DominanceKind, std::optional<std::size_t>>> dominance;
  std::vector<StrategyProfile> pure;
  bool operator==(const Summary&) const = default;
};

Summary summarize(const Game& g) {
  Summary s;
  for (const auto& d : dominance_report(g)) s.dominance.emplace_back(d.kind, d.strategy);
  s.pure = enumerate_pure_nash(g);
  return s;
}

TEST(Invariance, ScalingAndShiftingPreserveArgmaxOutputs) {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    Game game = oracle::to_game(oracle::random_game(rng, 2 + trial % 2, 3));
    BeliefState beliefs = oracle::random_beliefs(rng, game.num_players());
    std::vector<PayoffVector> scaled = game.payoff_table(), shifted = game.payoff_table();
    const std::size_t who = trial % game.num_players();
    for (auto& v : scaled)
      for (auto& u : v) u *= 7;
    for (auto& v : shifted) v[who] += q(5, 2);
    for (const auto& variant : {scaled, shifted}) {
      RelationshipGame a(game, beliefs), b(game.with_payoffs(variant), beliefs);
      EXPECT_EQ(summarize(game), summarize(game.with_payoffs(variant)));
      for (std::size_t k = 0; k < game.num_players(); ++k)
        EXPECT_EQ(summarize(build_supposed_game(a, k).game), summarize(build_supposed_game(b, k).game));
    }
  }
}

TEST(Invariance, AnalyzeEquilibriaIsDeterministic) {
  RelationshipGame model = underestimated_pd();
  EquilibriumReport a = analyze_equilibria(model), b = analyze_equilibria(model);
  EXPECT_EQ(a.material_pure, b.material_pure);
  EXPECT_EQ(a.assembled->profile(), b.assembled->profile());
  EXPECT_EQ(a.perspectives[1].mixed, b.perspectives[1].mixed);
}

}  // namespace
}  // namespace relgame
