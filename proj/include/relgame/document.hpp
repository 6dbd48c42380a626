#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relgame/equilibrium.hpp"
#include "relgame/interval.hpp"
#include "relgame/model.hpp"
#include "relgame/rational.hpp"

namespace relgame {

using json = nlohmann::json;

/// Input that cannot be turned into a valid game (syntax, schema, invariants).
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rationals and intervals in JSON

inline json rational_to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_unsigned()) return Rational(j.get<unsigned long long>());
    if (j.is_number_float()) {
      throw DocumentError(where + ": float literal " + j.dump() +
                          " is not accepted; write exact values as strings such as \"1/3\"");
    }
  } catch (const RationalFormatError& e) {
    throw DocumentError(where + ": " + e.what());
  }
  throw DocumentError(where + ": expected a rational string like \"p/q\", got " + j.dump());
}

inline json bound_to_json(const std::optional<Bound>& b) {
  return b ? rational_to_json(b->value) : json(nullptr);
}

inline json interval_to_json(const Interval& iv) {
  json j = {{"text", iv.to_string()}, {"empty", iv.is_empty()}};
  j["lower"] = bound_to_json(iv.lower());
  j["lower_closed"] = iv.lower() ? iv.lower()->closed : false;
  j["upper"] = bound_to_json(iv.upper());
  j["upper_closed"] = iv.upper() ? iv.upper()->closed : false;
  return j;
}

inline Interval interval_from_json(const json& j) {
  if (j.at("empty").get<bool>()) return Interval::empty();
  auto bound = [&](const char* key, const char* closed) -> std::optional<Bound> {
    if (j.at(key).is_null()) return std::nullopt;
    return Bound{rational_from_json(j.at(key), key), j.at(closed).get<bool>()};
  };
  return Interval(bound("lower", "lower_closed"), bound("upper", "upper_closed"));
}

inline json rational_vector_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rational_to_json(r));
  return out;
}

inline std::vector<Rational> rational_vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw DocumentError(where + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json rational_matrix_to_json(const RationalMatrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(rational_vector_to_json(row));
  return out;
}

inline RationalMatrix rational_matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw DocumentError(where + ": expected an array of rows");
  RationalMatrix out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_vector_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// ---------------------------------------------------------------------------
// Game documents

namespace detail {

inline std::string line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <typename T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw DocumentError(std::string("missing field \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DocumentError(std::string("field \"") + key + "\" has the wrong shape: " + e.what());
  }
}

}  // namespace detail

/// Builds a validated relationship game from a parsed document. A missing
/// "supposed" tensor means complete information.
inline RelationshipGame game_from_json(const json& doc) {
  if (!doc.is_object()) throw DocumentError("game document must be a JSON object");
  auto players = detail::required<std::vector<std::string>>(doc, "players");
  auto strategies = detail::required<std::vector<std::vector<std::string>>>(doc, "strategies");
  if (!doc.contains("payoffs")) throw DocumentError("missing field \"payoffs\"");
  if (!doc.contains("relationships")) throw DocumentError("missing field \"relationships\"");

  try {
    std::vector<PayoffVector> payoffs = rational_matrix_from_json(doc["payoffs"], "payoffs");
    Game game(std::move(players), std::move(strategies), std::move(payoffs));
    RationalMatrix relationships = rational_matrix_from_json(doc["relationships"], "relationships");
    std::optional<BeliefState> beliefs;
    if (doc.contains("supposed") && !doc["supposed"].is_null()) {
      const json& sup = doc["supposed"];
      if (!sup.is_array()) throw DocumentError("supposed: expected an array of slices");
      RationalTensor tensor;
      for (std::size_t k = 0; k < sup.size(); ++k)
        tensor.push_back(rational_matrix_from_json(sup[k], "supposed[" + std::to_string(k) + "]"));
      beliefs.emplace(relationships, tensor);
    } else {
      beliefs = BeliefState::complete_information(relationships);
    }
    return RelationshipGame(std::move(game), std::move(*beliefs));
  } catch (const ModelError& e) {
    throw DocumentError(e.what());
  }
}

inline RelationshipGame parse_game_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError("JSON parse error at " + detail::line_and_column(text, e.byte) + ": " +
                        e.what());
  }
  return game_from_json(doc);
}

inline RelationshipGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open game file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_game_document(buffer.str());
}

inline json game_to_json(const RelationshipGame& model) {
  const Game& game = model.game();
  json doc;
  doc["players"] = game.players();
  doc["strategies"] = game.all_strategies();
  doc["payoffs"] = rational_matrix_to_json(game.payoff_table());
  doc["relationships"] = rational_matrix_to_json(model.beliefs().relationship_matrix());
  json sup = json::array();
  for (std::size_t k = 0; k < model.num_players(); ++k)
    sup.push_back(rational_matrix_to_json(model.beliefs().supposed_slice(k)));
  doc["supposed"] = std::move(sup);
  return doc;
}

// ---------------------------------------------------------------------------
// Analysis reports

/// Label-based, exact-valued snapshot of a full analysis. Serializes to one
/// JSON record per line and parses back to an equal document.
struct ReportDocument {
  struct SupposedMatrix {
    std::string perspective;
    std::vector<PayoffVector> payoffs;  // profile order
    friend bool operator==(const SupposedMatrix&, const SupposedMatrix&) = default;
  };
  struct Dominance {
    std::string game;  // "material" or a perspective
    std::string player;
    std::string kind;
    std::optional<std::string> strategy;
    friend bool operator==(const Dominance&, const Dominance&) = default;
  };
  struct Equilibria {
    std::string game;
    std::vector<std::vector<std::string>> pure;
    std::vector<MixedProfile> mixed;
    friend bool operator==(const Equilibria&, const Equilibria&) = default;
  };
  struct Component {
    std::string player;
    MixedStrategy strategy;
    bool from_pure = true;
    std::size_t rank = 0;
    std::vector<std::string> source_pure;  // labels, when from a pure equilibrium
    MixedProfile source_mixed;
    friend bool operator==(const Component&, const Component&) = default;
  };
  struct Check {
    std::string player;
    bool passed;
    std::string certificate;
    friend bool operator==(const Check&, const Check&) = default;
  };
  struct RegionEntry {
    std::string strategy;
    Interval weak, strict;
    friend bool operator==(const RegionEntry&, const RegionEntry&) = default;
  };
  struct Rule {
    std::string opponent_strategy;
    Interval belief;
    std::string play;
    friend bool operator==(const Rule&, const Rule&) = default;
  };
  struct Middle {
    Interval relationship;
    std::vector<std::string> best_response;  // indexed by opponent strategy
    std::vector<Rule> rules;
    friend bool operator==(const Middle&, const Middle&) = default;
  };
  struct Regions {
    std::vector<RegionEntry> row, column;
    std::vector<Middle> middle;
    friend bool operator==(const Regions&, const Regions&) = default;
  };

  std::vector<std::string> players;
  std::vector<std::vector<std::string>> strategies;
  std::vector<std::vector<std::string>> attitudes;
  std::vector<SupposedMatrix> supposed_games;
  std::vector<Dominance> dominance;
  std::vector<Equilibria> equilibria;
  std::optional<Regions> regions;
  std::vector<Component> assembled;
  std::string assembly_error;
  std::vector<Check> subjective;
  std::vector<Check> objective;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

namespace detail {

inline std::vector<std::string> profile_labels(const Game& game, const StrategyProfile& p) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(game.strategies(i)[p[i]]);
  return out;
}

inline std::vector<ReportDocument::Check> checks_of(const Game& game, const CheckResult& r) {
  std::vector<ReportDocument::Check> out;
  for (const auto& p : r.players) out.push_back({game.player(p.player), p.passed, p.certificate});
  return out;
}

inline ReportDocument::Equilibria equilibria_of(const std::string& name, const Game& game,
                                                const std::vector<StrategyProfile>& pure,
                                                const std::vector<MixedProfile>& mixed) {
  ReportDocument::Equilibria e{name, {}, mixed};
  for (const auto& p : pure) e.pure.push_back(profile_labels(game, p));
  return e;
}

}  // namespace detail

/// Runs the full analysis. `perspective` limits the per-perspective sections
/// to one player; nullopt keeps all of them.
inline ReportDocument build_report(const RelationshipGame& model,
                                   std::optional<std::size_t> perspective = std::nullopt) {
  const Game& game = model.game();
  const std::size_t n = model.num_players();
  ReportDocument doc;
  doc.players = game.players();
  doc.strategies = game.all_strategies();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row;
    for (std::size_t j = 0; j < n; ++j)
      row.push_back(i == j ? "self" : to_string(classify_attitude(model.beliefs().relationship(i, j))));
    doc.attitudes.push_back(std::move(row));
  }

  auto add_dominance = [&](const std::string& name, const Game& g) {
    for (const auto& d : dominance_report(g)) {
      std::optional<std::string> label;
      if (d.strategy) label = g.strategies(d.player)[*d.strategy];
      doc.dominance.push_back({name, g.player(d.player), to_string(d.kind), label});
    }
  };

  EquilibriumReport eq = analyze_equilibria(model);
  add_dominance("material", game);
  doc.equilibria.push_back(detail::equilibria_of("material", game, eq.material_pure, eq.material_mixed));
  for (std::size_t k = 0; k < n; ++k) {
    if (perspective && *perspective != k) continue;
    SupposedGame sg = build_supposed_game(model, k);
    doc.supposed_games.push_back({game.player(k), sg.game.payoff_table()});
    add_dominance(game.player(k), sg.game);
    doc.equilibria.push_back(detail::equilibria_of(game.player(k), game, eq.perspectives[k].pure,
                                                   eq.perspectives[k].mixed));
  }

  if (n == 2 && game.num_strategies(0) == 2 && game.num_strategies(1) == 2) {
    ThresholdRegions tr = pd_threshold_regions(game);
    ReportDocument::Regions regions;
    auto entries = [&](const PlayerRegions& pr) {
      std::vector<ReportDocument::RegionEntry> out;
      for (const auto& d : pr.dominant)
        out.push_back({game.strategies(pr.player)[d.strategy], d.weak, d.strict});
      return out;
    };
    regions.row = entries(tr.row);
    regions.column = entries(tr.column);
    for (const auto& m : tr.middle) {
      ReportDocument::Middle mid{m.relationship, {}, {}};
      for (std::size_t b : m.best_response) mid.best_response.push_back(game.strategies(0)[b]);
      for (const auto& r : m.rules)
        mid.rules.push_back({game.strategies(1)[r.opponent_strategy], r.belief, game.strategies(0)[r.play]});
      regions.middle.push_back(std::move(mid));
    }
    doc.regions = std::move(regions);
  }

  if (eq.assembled) {
    for (const auto& c : eq.assembled->components) {
      ReportDocument::Component comp{game.player(c.perspective), c.component, c.source.pure,
                                     c.source.rank, {}, c.source.mixed_profile};
      if (c.source.pure) comp.source_pure = detail::profile_labels(game, c.source.pure_profile);
      doc.assembled.push_back(std::move(comp));
    }
  }
  doc.assembly_error = eq.assembly_error;
  if (eq.subjective) doc.subjective = detail::checks_of(game, *eq.subjective);
  if (eq.objective) doc.objective = detail::checks_of(game, *eq.objective);
  return doc;
}

// --- records ---------------------------------------------------------------

namespace detail {

inline json mixed_profile_to_json(const MixedProfile& p) { return rational_matrix_to_json(p); }

inline json region_entries_to_json(const std::vector<ReportDocument::RegionEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries)
    out.push_back({{"strategy", e.strategy},
                   {"weak", interval_to_json(e.weak)},
                   {"strict", interval_to_json(e.strict)}});
  return out;
}

inline std::vector<ReportDocument::RegionEntry> region_entries_from_json(const json& j) {
  std::vector<ReportDocument::RegionEntry> out;
  for (const auto& e : j)
    out.push_back({e.at("strategy").get<std::string>(), interval_from_json(e.at("weak")),
                   interval_from_json(e.at("strict"))});
  return out;
}

inline json checks_to_json(const std::vector<ReportDocument::Check>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    out.push_back({{"player", c.player}, {"passed", c.passed}, {"certificate", c.certificate}});
  return out;
}

inline std::vector<ReportDocument::Check> checks_from_json(const json& j) {
  std::vector<ReportDocument::Check> out;
  for (const auto& c : j)
    out.push_back({c.at("player").get<std::string>(), c.at("passed").get<bool>(),
                   c.at("certificate").get<std::string>()});
  return out;
}

}  // namespace detail

inline std::vector<json> report_to_records(const ReportDocument& doc) {
  std::vector<json> out;
  out.push_back({{"record", "game"}, {"players", doc.players}, {"strategies", doc.strategies}});
  out.push_back({{"record", "attitudes"}, {"matrix", doc.attitudes}});
  for (const auto& sg : doc.supposed_games) {
    out.push_back({{"record", "supposed_game"},
                   {"perspective", sg.perspective},
                   {"payoffs", rational_matrix_to_json(sg.payoffs)}});
  }
  for (const auto& d : doc.dominance) {
    out.push_back({{"record", "dominance"},
                   {"game", d.game},
                   {"player", d.player},
                   {"kind", d.kind},
                   {"strategy", d.strategy ? json(*d.strategy) : json(nullptr)}});
  }
  for (const auto& e : doc.equilibria) {
    json mixed = json::array();
    for (const auto& m : e.mixed) mixed.push_back(detail::mixed_profile_to_json(m));
    out.push_back({{"record", "equilibria"}, {"game", e.game}, {"pure", e.pure}, {"mixed", mixed}});
  }
  if (doc.regions) {
    json middle = json::array();
    for (const auto& m : doc.regions->middle) {
      json rules = json::array();
      for (const auto& r : m.rules)
        rules.push_back({{"opponent_strategy", r.opponent_strategy},
                         {"belief", interval_to_json(r.belief)},
                         {"play", r.play}});
      middle.push_back({{"relationship", interval_to_json(m.relationship)},
                        {"best_response", m.best_response},
                        {"rules", rules}});
    }
    out.push_back({{"record", "threshold_regions"},
                   {"row", detail::region_entries_to_json(doc.regions->row)},
                   {"column", detail::region_entries_to_json(doc.regions->column)},
                   {"middle", middle}});
  }
  json components = json::array();
  for (const auto& c : doc.assembled) {
    components.push_back({{"player", c.player},
                          {"strategy", rational_vector_to_json(c.strategy)},
                          {"from_pure", c.from_pure},
                          {"rank", c.rank},
                          {"source_pure", c.source_pure},
                          {"source_mixed", detail::mixed_profile_to_json(c.source_mixed)}});
  }
  out.push_back({{"record", "assembled_profile"},
                 {"components", components},
                 {"error", doc.assembly_error}});
  out.push_back({{"record", "subjective_check"}, {"players", detail::checks_to_json(doc.subjective)}});
  out.push_back({{"record", "objective_check"}, {"players", detail::checks_to_json(doc.objective)}});
  return out;
}

inline std::string records_to_text(const std::vector<json>& records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

inline ReportDocument report_from_records(const std::string& text) {
  ReportDocument doc;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json r = json::parse(line);
    const std::string kind = r.at("record").get<std::string>();
    if (kind == "game") {
      doc.players = r.at("players").get<std::vector<std::string>>();
      doc.strategies = r.at("strategies").get<std::vector<std::vector<std::string>>>();
    } else if (kind == "attitudes") {
      doc.attitudes = r.at("matrix").get<std::vector<std::vector<std::string>>>();
    } else if (kind == "supposed_game") {
      doc.supposed_games.push_back({r.at("perspective").get<std::string>(),
                                    rational_matrix_from_json(r.at("payoffs"), "payoffs")});
    } else if (kind == "dominance") {
      std::optional<std::string> s;
      if (!r.at("strategy").is_null()) s = r.at("strategy").get<std::string>();
      doc.dominance.push_back({r.at("game").get<std::string>(), r.at("player").get<std::string>(),
                               r.at("kind").get<std::string>(), s});
    } else if (kind == "equilibria") {
      ReportDocument::Equilibria e{r.at("game").get<std::string>(),
                                   r.at("pure").get<std::vector<std::vector<std::string>>>(),
                                   {}};
      for (const auto& m : r.at("mixed")) e.mixed.push_back(rational_matrix_from_json(m, "mixed"));
      doc.equilibria.push_back(std::move(e));
    } else if (kind == "threshold_regions") {
      ReportDocument::Regions regions;
      regions.row = detail::region_entries_from_json(r.at("row"));
      regions.column = detail::region_entries_from_json(r.at("column"));
      for (const auto& m : r.at("middle")) {
        ReportDocument::Middle mid{interval_from_json(m.at("relationship")),
                                   m.at("best_response").get<std::vector<std::string>>(),
                                   {}};
        for (const auto& rule : m.at("rules"))
          mid.rules.push_back({rule.at("opponent_strategy").get<std::string>(),
                               interval_from_json(rule.at("belief")),
                               rule.at("play").get<std::string>()});
        regions.middle.push_back(std::move(mid));
      }
      doc.regions = std::move(regions);
    } else if (kind == "assembled_profile") {
      for (const auto& c : r.at("components")) {
        doc.assembled.push_back({c.at("player").get<std::string>(),
                                 rational_vector_from_json(c.at("strategy"), "strategy"),
                                 c.at("from_pure").get<bool>(), c.at("rank").get<std::size_t>(),
                                 c.at("source_pure").get<std::vector<std::string>>(),
                                 rational_matrix_from_json(c.at("source_mixed"), "source_mixed")});
      }
      doc.assembly_error = r.at("error").get<std::string>();
    } else if (kind == "subjective_check") {
      doc.subjective = detail::checks_from_json(r.at("players"));
    } else if (kind == "objective_check") {
      doc.objective = detail::checks_from_json(r.at("players"));
    } else {
      throw DocumentError("unknown record type: " + kind);
    }
  }
  return doc;
}

}  // namespace relgame
