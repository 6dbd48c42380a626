#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relgame/model.hpp"
#include "relgame/ultimatum.hpp"

namespace relgame::builtin {

/// Prisoner's dilemma: (C,C) = 3,3  (C,D) = 0,5  (D,C) = 5,0  (D,D) = 1,1.
inline Game prisoners_dilemma() {
  return Game({"x", "y"}, {{"C", "D"}, {"C", "D"}},
              {{3, 3}, {0, 5}, {5, 0}, {1, 1}});
}

/// Complete-information beliefs with R_xy = r_xy and R_yx = r_yx.
inline BeliefState pd_beliefs(const Rational& r_xy, const Rational& r_yx) {
  return BeliefState::complete_information({{1, r_xy}, {r_yx, 1}});
}

/// Both players care 1/3 for the other and each believes the other cares 1/5.
inline BeliefState pd_underestimated_beliefs() {
  BeliefState b = pd_beliefs(make_rational(1, 3), make_rational(1, 3));
  b.set_supposed(0, 1, 0, make_rational(1, 5));
  b.set_supposed(1, 0, 1, make_rational(1, 5));
  return b;
}

inline std::vector<std::string> game_names() {
  return {"pd-fig1", "pd-underestimated", "pd-cooperative"};
}

inline std::optional<RelationshipGame> named_game(const std::string& name) {
  if (name == "pd-fig1") return RelationshipGame(prisoners_dilemma(), BeliefState(2));
  if (name == "pd-underestimated") return RelationshipGame(prisoners_dilemma(), pd_underestimated_beliefs());
  if (name == "pd-cooperative") return RelationshipGame(prisoners_dilemma(), pd_beliefs(1, 1));
  return std::nullopt;
}

/// Both sides hostile at -1/2 and both beliefs correct.
inline std::optional<ultimatum::UltimatumConfig> named_ultimatum(const std::string& name) {
  if (name != "ultimatum-s3") return std::nullopt;
  ultimatum::UltimatumConfig config;
  config.r_rc = config.r_cr = config.belief_rc = config.belief_cr = make_rational(-1, 2);
  return config;
}

}  // namespace relgame::builtin
