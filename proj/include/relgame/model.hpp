#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relgame/rational.hpp"

namespace relgame {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not line up (wrong matrix sizes, missing payoff cells...).
class DimensionError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Well-shaped beliefs that break one of the relationship invariants.
class InvalidBeliefsError : public ModelError {
 public:
  using ModelError::ModelError;
};

using StrategyProfile = std::vector<std::size_t>;
using PayoffVector = std::vector<Rational>;
using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalTensor = std::vector<RationalMatrix>;

/// Finite normal-form game with a dense payoff table. Profiles are laid out
/// in mixed-radix order with the last player's strategy varying fastest.
class Game {
 public:
  Game(std::vector<std::string> players, std::vector<std::vector<std::string>> strategies,
       std::vector<PayoffVector> payoffs)
      : players_(std::move(players)),
        strategies_(std::move(strategies)),
        payoffs_(std::move(payoffs)) {
    const std::size_t n = players_.size();
    if (n < 2) throw DimensionError("a game needs at least 2 players");
    if (strategies_.size() != n)
      throw DimensionError("expected one strategy list per player");
    strides_.assign(n, 1);
    std::size_t total = 1;
    for (std::size_t i = n; i-- > 0;) {
      if (strategies_[i].empty())
        throw DimensionError("player " + players_[i] + " has no strategies");
      strides_[i] = total;
      total *= strategies_[i].size();
    }
    if (payoffs_.size() != total) {
      throw DimensionError("payoff table has " + std::to_string(payoffs_.size()) +
                           " cells, expected " + std::to_string(total));
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (payoffs_[idx].size() != n) {
        throw DimensionError("payoff cell " + std::to_string(idx) + " has " +
                             std::to_string(payoffs_[idx].size()) + " entries, expected " +
                             std::to_string(n));
      }
    }
  }

  std::size_t num_players() const { return players_.size(); }
  const std::vector<std::string>& players() const { return players_; }
  const std::string& player(std::size_t i) const { return players_.at(i); }
  const std::vector<std::string>& strategies(std::size_t i) const { return strategies_.at(i); }
  const std::vector<std::vector<std::string>>& all_strategies() const { return strategies_; }
  std::size_t num_strategies(std::size_t i) const { return strategies_.at(i).size(); }
  std::size_t num_profiles() const { return payoffs_.size(); }

  std::optional<std::size_t> player_index(const std::string& name) const {
    for (std::size_t i = 0; i < players_.size(); ++i)
      if (players_[i] == name) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> strategy_index(std::size_t player, const std::string& label) const {
    const auto& labels = strategies_.at(player);
    for (std::size_t s = 0; s < labels.size(); ++s)
      if (labels[s] == label) return s;
    return std::nullopt;
  }

  std::size_t profile_index(const StrategyProfile& profile) const {
    if (profile.size() != num_players())
      throw DimensionError("profile has wrong number of components");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (profile[i] >= strategies_[i].size())
        throw DimensionError("strategy index out of range for player " + players_[i]);
      idx += profile[i] * strides_[i];
    }
    return idx;
  }

  StrategyProfile profile_at(std::size_t index) const {
    StrategyProfile profile(num_players());
    for (std::size_t i = 0; i < profile.size(); ++i) {
      profile[i] = (index / strides_[i]) % strategies_[i].size();
    }
    return profile;
  }

  const PayoffVector& payoffs(std::size_t profile_index) const { return payoffs_.at(profile_index); }
  const PayoffVector& payoffs(const StrategyProfile& profile) const {
    return payoffs_[profile_index(profile)];
  }
  const Rational& payoff(const StrategyProfile& profile, std::size_t player) const {
    return payoffs(profile).at(player);
  }
  const std::vector<PayoffVector>& payoff_table() const { return payoffs_; }

  /// Same players and strategies, different payoff table.
  Game with_payoffs(std::vector<PayoffVector> payoffs) const {
    return Game(players_, strategies_, std::move(payoffs));
  }

  std::string profile_label(const StrategyProfile& profile) const {
    std::string out = "(";
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (i) out += ", ";
      out += strategies_.at(i).at(profile[i]);
    }
    return out + ")";
  }

  friend bool operator==(const Game& a, const Game& b) {
    return a.players_ == b.players_ && a.strategies_ == b.strategies_ &&
           a.payoffs_ == b.payoffs_;
  }

 private:
  std::vector<std::string> players_;
  std::vector<std::vector<std::string>> strategies_;
  std::vector<PayoffVector> payoffs_;
  std::vector<std::size_t> strides_;
};

/// Relationships R[i][j] (how much i cares for j's payoff) and supposed
/// relationships S[k][i][j] (how much k thinks i cares for j's payoff).
class BeliefState {
 public:
  /// Non-cooperative beliefs: identity relationships, everyone knows it.
  explicit BeliefState(std::size_t n)
      : n_(n), relationships_(n * n, Rational(0)), supposed_(n * n * n, Rational(0)) {
    for (std::size_t i = 0; i < n; ++i) {
      relationships_[i * n + i] = 1;
      for (std::size_t k = 0; k < n; ++k) supposed_[(k * n + i) * n + i] = 1;
    }
  }

  BeliefState(const RationalMatrix& relationships, const RationalTensor& supposed)
      : BeliefState(relationships.size()) {
    check_square(relationships, "relationships");
    if (supposed.size() != n_)
      throw DimensionError("supposed relationships need one n x n slice per player");
    for (std::size_t k = 0; k < n_; ++k) {
      check_square(supposed[k], "supposed[" + std::to_string(k) + "]");
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) set_supposed(k, i, j, supposed[k][i][j]);
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) set_relationship(i, j, relationships[i][j]);
  }

  /// Every player's supposed slice equals the true relationship matrix.
  static BeliefState complete_information(const RationalMatrix& relationships) {
    return BeliefState(relationships, RationalTensor(relationships.size(), relationships));
  }

  std::size_t size() const { return n_; }

  const Rational& relationship(std::size_t i, std::size_t j) const {
    return relationships_.at(i * n_ + j);
  }
  const Rational& supposed(std::size_t k, std::size_t i, std::size_t j) const {
    return supposed_.at((k * n_ + i) * n_ + j);
  }
  void set_relationship(std::size_t i, std::size_t j, Rational value) {
    relationships_.at(i * n_ + j) = std::move(value);
  }
  void set_supposed(std::size_t k, std::size_t i, std::size_t j, Rational value) {
    supposed_.at((k * n_ + i) * n_ + j) = std::move(value);
  }

  RationalMatrix relationship_matrix() const {
    RationalMatrix out(n_, std::vector<Rational>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = relationship(i, j);
    return out;
  }
  RationalMatrix supposed_slice(std::size_t k) const {
    RationalMatrix out(n_, std::vector<Rational>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = supposed(k, i, j);
    return out;
  }
  RationalTensor supposed_tensor() const {
    RationalTensor out;
    for (std::size_t k = 0; k < n_; ++k) out.push_back(supposed_slice(k));
    return out;
  }

  /// True when no player's slice differs from any other's.
  bool is_complete_information() const {
    for (std::size_t k = 1; k < n_; ++k)
      if (supposed_slice(k) != supposed_slice(0)) return false;
    return true;
  }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  void check_square(const RationalMatrix& m, const std::string& what) const {
    if (m.size() != n_) throw DimensionError(what + " must have " + std::to_string(n_) + " rows");
    for (const auto& row : m)
      if (row.size() != n_)
        throw DimensionError(what + " must have " + std::to_string(n_) + " columns");
  }

  std::size_t n_;
  std::vector<Rational> relationships_;
  std::vector<Rational> supposed_;
};

struct BeliefViolation {
  enum class Kind { RelationshipDiagonal, SupposedDiagonal, OwnBeliefMismatch };
  Kind kind;
  std::size_t k = 0, i = 0, j = 0;
  std::string message;
};

/// Lists every broken invariant; an empty result means the beliefs are valid.
/// Throws DimensionError if the beliefs are not sized for `n` players.
inline std::vector<BeliefViolation> validate_beliefs(const BeliefState& beliefs, std::size_t n) {
  if (beliefs.size() != n) {
    throw DimensionError("beliefs are sized for " + std::to_string(beliefs.size()) +
                         " players, game has " + std::to_string(n));
  }
  std::vector<BeliefViolation> out;
  auto idx = [](std::size_t v) { return "[" + std::to_string(v) + "]"; };
  for (std::size_t i = 0; i < n; ++i) {
    if (beliefs.relationship(i, i) != 1) {
      out.push_back({BeliefViolation::Kind::RelationshipDiagonal, i, i, i,
                     "R_ii must equal 1: R" + idx(i) + idx(i) + " = " +
                         to_string(beliefs.relationship(i, i))});
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (beliefs.supposed(k, i, i) != 1) {
        out.push_back({BeliefViolation::Kind::SupposedDiagonal, k, i, i,
                       "supposed R_ii must equal 1: supposed" + idx(k) + idx(i) + idx(i) +
                           " = " + to_string(beliefs.supposed(k, i, i))});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && beliefs.supposed(i, i, j) != beliefs.relationship(i, j)) {
        out.push_back({BeliefViolation::Kind::OwnBeliefMismatch, i, i, j,
                       "own belief must match own relationship: supposed" + idx(i) + idx(i) +
                           idx(j) + " = " + to_string(beliefs.supposed(i, i, j)) + " but R" +
                           idx(i) + idx(j) + " = " + to_string(beliefs.relationship(i, j))});
      }
    }
  }
  return out;
}

inline void require_valid_beliefs(const BeliefState& beliefs, std::size_t n) {
  auto violations = validate_beliefs(beliefs, n);
  if (!violations.empty()) throw InvalidBeliefsError(violations.front().message);
}

enum class Attitude { NonCooperative, Cooperative, SubCooperative, Hostile, Dedicated };

inline Attitude classify_attitude(const Rational& r) {
  if (r == 0) return Attitude::NonCooperative;
  if (r == 1) return Attitude::Cooperative;
  if (r < 0) return Attitude::Hostile;
  if (r > 1) return Attitude::Dedicated;
  return Attitude::SubCooperative;
}

inline std::string to_string(Attitude a) {
  switch (a) {
    case Attitude::NonCooperative: return "non-cooperative";
    case Attitude::Cooperative: return "cooperative";
    case Attitude::SubCooperative: return "sub-cooperative";
    case Attitude::Hostile: return "hostile";
    case Attitude::Dedicated: return "dedicated";
  }
  return "unknown";
}

/// A game together with validated beliefs. Every analysis entry point takes
/// one of these, so invalid beliefs are rejected once, here.
class RelationshipGame {
 public:
  RelationshipGame(Game game, BeliefState beliefs)
      : game_(std::move(game)), beliefs_(std::move(beliefs)) {
    require_valid_beliefs(beliefs_, game_.num_players());
  }

  const Game& game() const { return game_; }
  const BeliefState& beliefs() const { return beliefs_; }
  std::size_t num_players() const { return game_.num_players(); }

  RelationshipGame with_beliefs(BeliefState beliefs) const { return {game_, std::move(beliefs)}; }

 private:
  Game game_;
  BeliefState beliefs_;
};

/// Player `perspective`'s estimate of player `target`'s payoff at `profile`.
/// For target == perspective the supposed slice row is the player's own
/// relationship row (a validated invariant), so one weighted sum covers both.
inline Rational supposed_payoff(const RelationshipGame& model, std::size_t perspective,
                                std::size_t target, const StrategyProfile& profile) {
  const PayoffVector& material = model.game().payoffs(profile);
  Rational total = 0;
  for (std::size_t m = 0; m < material.size(); ++m)
    total += model.beliefs().supposed(perspective, target, m) * material[m];
  return total;
}

inline PayoffVector supposed_payoff_vector(const RelationshipGame& model, std::size_t perspective,
                                           const StrategyProfile& profile) {
  PayoffVector out;
  for (std::size_t j = 0; j < model.num_players(); ++j)
    out.push_back(supposed_payoff(model, perspective, j, profile));
  return out;
}

struct SupposedGame {
  std::size_t perspective;
  Game game;
};

inline SupposedGame build_supposed_game(const RelationshipGame& model, std::size_t perspective) {
  const Game& game = model.game();
  if (perspective >= game.num_players()) throw DimensionError("perspective out of range");
  std::vector<PayoffVector> table;
  table.reserve(game.num_profiles());
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx)
    table.push_back(supposed_payoff_vector(model, perspective, game.profile_at(idx)));
  return {perspective, game.with_payoffs(std::move(table))};
}

}  // namespace relgame
