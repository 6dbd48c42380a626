#pragma once

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relgame/builtin.hpp"
#include "relgame/document.hpp"
#include "relgame/dynamics.hpp"
#include "relgame/equilibrium.hpp"
#include "relgame/ultimatum.hpp"

namespace relgame::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kAnalysis = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Argument helpers

inline Rational parse_rational_arg(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const RationalFormatError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

/// "<player>=<fixed|titfortat[:lo,hi]|rationalize[:lo,hi]>"
inline std::pair<std::size_t, UpdatePolicy> parse_policy(const Game& game, const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("policy \"" + text + "\" must look like player=policy");
  std::string name = text.substr(0, eq), spec = text.substr(eq + 1);
  auto player = game.player_index(name);
  if (!player) throw UsageError("policy names unknown player \"" + name + "\"");

  std::string kind = spec, box;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    kind = spec.substr(0, colon);
    box = spec.substr(colon + 1);
  }
  if (kind == "fixed") {
    if (!box.empty()) throw UsageError("fixed policy takes no parameters");
    return {*player, FixedPolicy{}};
  }
  if (kind != "rationalize" && kind != "titfortat")
    throw UsageError("unknown policy \"" + spec + "\" (expected fixed, titfortat or rationalize[:lo,hi])");

  RationalizingIntervalPolicy inference;
  if (!box.empty()) {
    auto comma = box.find(',');
    if (comma == std::string::npos) throw UsageError("policy prior must be written lo,hi");
    inference.prior_lower = parse_rational_arg("--policy", box.substr(0, comma));
    inference.prior_upper = parse_rational_arg("--policy", box.substr(comma + 1));
    if (inference.prior_lower > inference.prior_upper)
      throw UsageError("policy prior lower bound exceeds upper bound");
  }
  if (kind == "titfortat") return {*player, TitForTatMirrorPolicy{inference}};
  return {*player, inference};
}

inline RelationshipGame resolve_game(const std::string& file, const std::string& example) {
  if (!file.empty() && !example.empty()) throw UsageError("give either a game file or --example, not both");
  if (!example.empty()) {
    auto model = builtin::named_game(example);
    if (!model) {
      std::string names;
      for (const auto& n : builtin::game_names()) names += " " + n;
      throw UsageError("unknown example \"" + example + "\"; available:" + names);
    }
    return *model;
  }
  if (file.empty()) throw UsageError("a game file or --example is required");
  return load_game(file);
}

// ---------------------------------------------------------------------------
// Human rendering

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline std::string cell(const PayoffVector& v) {
  std::vector<std::string> parts;
  for (const auto& r : v) parts.push_back(to_string(r));
  return join(parts, ", ");
}

inline std::string mixed_label(const MixedProfile& m) {
  std::vector<std::string> players;
  for (const auto& s : m) {
    std::vector<std::string> parts;
    for (const auto& p : s) parts.push_back(to_string(p));
    players.push_back("(" + join(parts, ", ") + ")");
  }
  return "[" + join(players, " ") + "]";
}

inline void print_payoff_table(std::ostream& out, const Game& game,
                               const std::vector<PayoffVector>& payoffs) {
  if (game.num_players() == 2) {
    const auto& rows = game.strategies(0);
    const auto& cols = game.strategies(1);
    std::size_t width = 4;
    for (const auto& v : payoffs) width = std::max(width, cell(v).size() + 2);
    std::size_t label = 4;
    for (const auto& r : rows) label = std::max(label, r.size() + 2);
    out << std::string(label, ' ');
    for (const auto& c : cols) out << std::setw(static_cast<int>(width)) << c;
    out << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out << "  " << std::left << std::setw(static_cast<int>(label - 2)) << rows[r] << std::right;
      for (std::size_t c = 0; c < cols.size(); ++c)
        out << std::setw(static_cast<int>(width)) << cell(payoffs[game.profile_index({r, c})]);
      out << "\n";
    }
  } else {
    for (std::size_t idx = 0; idx < game.num_profiles(); ++idx)
      out << "  " << game.profile_label(game.profile_at(idx)) << ": " << cell(payoffs[idx]) << "\n";
  }
}

}  // namespace detail

inline void print_report(std::ostream& out, const RelationshipGame& model, const ReportDocument& doc) {
  using detail::join;
  const Game& game = model.game();
  out << "Players: " << join(doc.players, ", ") << "\n\nMaterial payoffs:\n";
  detail::print_payoff_table(out, game, game.payoff_table());

  out << "\nAttitudes:\n";
  for (std::size_t i = 0; i < doc.players.size(); ++i)
    for (std::size_t j = 0; j < doc.players.size(); ++j)
      if (i != j)
        out << "  " << doc.players[i] << " -> " << doc.players[j] << ": " << doc.attitudes[i][j]
            << " (R = " << to_string(model.beliefs().relationship(i, j)) << ")\n";

  for (const auto& sg : doc.supposed_games) {
    out << "\nSupposed payoffs of " << sg.perspective << ":\n";
    detail::print_payoff_table(out, game, sg.payoffs);
  }

  out << "\nDominance:\n";
  for (const auto& d : doc.dominance) {
    out << "  [" << d.game << "] " << d.player << ": " << d.kind;
    if (d.strategy) out << " " << *d.strategy;
    out << "\n";
  }

  out << "\nEquilibria:\n";
  for (const auto& e : doc.equilibria) {
    std::vector<std::string> pure;
    for (const auto& p : e.pure) pure.push_back("(" + join(p, ", ") + ")");
    out << "  [" << e.game << "] pure: " << (pure.empty() ? "none" : join(pure, " "));
    if (!e.mixed.empty()) {
      std::vector<std::string> mixed;
      for (const auto& m : e.mixed) mixed.push_back(detail::mixed_label(m));
      out << "; mixed: " << join(mixed, " ");
    }
    out << "\n";
  }

  if (doc.regions) {
    out << "\nThreshold regions (row relationship r, row's belief b about column):\n";
    for (const auto& e : doc.regions->row)
      out << "  row " << e.strategy << " dominant for r in " << e.weak.to_string() << " (strictly "
          << e.strict.to_string() << ")\n";
    for (const auto& e : doc.regions->column)
      out << "  column " << e.strategy << " dominant for b in " << e.weak.to_string() << " (strictly "
          << e.strict.to_string() << ")\n";
    for (const auto& m : doc.regions->middle) {
      out << "  r in " << m.relationship.to_string() << ": no dominant strategy\n";
      for (const auto& rule : m.rules)
        out << "    b in " << rule.belief.to_string() << " -> column plays " << rule.opponent_strategy
            << ", row plays " << rule.play << "\n";
    }
  }

  out << "\nAssembled profile:";
  if (!doc.assembly_error.empty()) {
    out << " unavailable (" << doc.assembly_error << ")\n";
    return;
  }
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < doc.assembled.size(); ++i) {
    auto s = pure_component(doc.assembled[i].strategy);
    parts.push_back(s ? doc.strategies[i][*s] : detail::mixed_label({doc.assembled[i].strategy}));
  }
  out << " (" << join(parts, ", ") << ")\n";
  for (const auto& c : doc.assembled) {
    out << "  " << c.player << ": from "
        << (c.from_pure ? "(" + join(c.source_pure, ", ") + ")" : detail::mixed_label(c.source_mixed))
        << " in " << c.player << "'s supposed game\n";
  }
  auto checks = [&](const char* title, const std::vector<ReportDocument::Check>& cs) {
    out << title << "\n";
    for (const auto& c : cs)
      out << "  " << c.player << ": " << (c.passed ? "pass" : "fail") << " (" << c.certificate << ")\n";
  };
  if (!doc.subjective.empty()) checks("Subjective check:", doc.subjective);
  if (!doc.objective.empty()) checks("Objective check:", doc.objective);
}

// ---------------------------------------------------------------------------
// Simulation and bargaining output

inline json round_to_json(const Game& game, const RoundRecord& r) {
  auto name = [&](std::size_t i) { return game.player(i); };
  json supposed = json::array();
  for (std::size_t k = 0; k < r.supposed.size(); ++k)
    supposed.push_back({{"perspective", name(k)}, {"payoffs", rational_vector_to_json(r.supposed[k])}});
  json sources = json::array();
  for (const auto& p : r.provenance) {
    sources.push_back({{"player", name(p.perspective)},
                       {"equilibrium", relgame::detail::profile_labels(game, p.source.pure_profile)}});
  }
  json updates = json::array();
  for (const auto& u : r.annotations) {
    json j = {{"observer", name(u.observer)},
              {"actor", name(u.actor)},
              {"entry", "supposed[" + name(u.observer) + "][" + name(u.actor) + "][" + name(u.observer) + "]"},
              {"observed", interval_to_json(u.observed)},
              {"tracked", interval_to_json(u.tracked)},
              {"previous", rational_to_json(u.previous_estimate)},
              {"estimate", rational_to_json(u.estimate)},
              {"reset", u.reset},
              {"unrationalizable", u.unrationalizable}};
    if (u.relationship) {
      j["relationship_entry"] = "R[" + name(u.observer) + "][" + name(u.actor) + "]";
      j["previous_relationship"] = rational_to_json(*u.previous_relationship);
      j["relationship"] = rational_to_json(*u.relationship);
    }
    updates.push_back(std::move(j));
  }
  json beliefs = {{"relationships", rational_matrix_to_json(r.beliefs.relationship_matrix())}};
  json tensor = json::array();
  for (std::size_t k = 0; k < game.num_players(); ++k)
    tensor.push_back(rational_matrix_to_json(r.beliefs.supposed_slice(k)));
  beliefs["supposed"] = std::move(tensor);

  return {{"record", "round"},
          {"round", r.round},
          {"actions", relgame::detail::profile_labels(game, r.profile)},
          {"material", rational_vector_to_json(r.material)},
          {"supposed", supposed},
          {"sources", sources},
          {"updates", updates},
          {"beliefs", beliefs}};
}

inline void print_trace_human(std::ostream& out, const Game& game, const SimulationTrace& trace) {
  for (const auto& r : trace.rounds) {
    out << "Round " << r.round << ": " << game.profile_label(r.profile) << "  material "
        << detail::cell(r.material) << "\n";
    for (const auto& u : r.annotations) {
      out << "  " << game.player(u.observer) << " on " << game.player(u.actor) << ": observed "
          << u.observed.to_string() << ", tracked " << u.tracked.to_string() << ", estimate "
          << to_string(u.previous_estimate) << " -> " << to_string(u.estimate);
      if (u.reset) out << " (reset)";
      if (u.unrationalizable) out << " (action not rationalizable, kept)";
      if (u.relationship)
        out << "; own R " << to_string(*u.previous_relationship) << " -> " << to_string(*u.relationship);
      out << "\n";
    }
  }
  if (trace.stopped_early) out << "Stopped early after round " << trace.rounds.size() << "\n";
}

inline std::string threshold_json_value(const ultimatum::ThresholdValue& t) { return to_string(t.value); }

inline std::vector<json> bargaining_records(const ultimatum::BargainingOutcome& o) {
  std::vector<json> out;
  for (const auto& r : o.rounds) {
    out.push_back({{"record", "ultimatum_round"},
                   {"round", r.round},
                   {"offer", rational_to_json(r.offer.value())},
                   {"accepted", r.accepted},
                   {"row_bound_before", rational_to_json(r.row_bound_before)},
                   {"row_bound_after", rational_to_json(r.row_bound_after)},
                   {"column_cap_bound", rational_to_json(r.column_cap_bound)}});
  }
  out.push_back({{"record", "ultimatum_outcome"},
                 {"agreement", o.agreement},
                 {"offer", o.offer ? rational_to_json(o.offer->value()) : json(nullptr)},
                 {"round", o.round},
                 {"rounds_played", o.rounds.size()},
                 {"reason", o.reason},
                 {"agreement_range", interval_to_json(o.true_range.range)},
                 {"cent_offers_in_range", o.true_range.cent_offers.size()},
                 {"row_believed_threshold", threshold_json_value(o.row_believed_threshold)},
                 {"column_believed_cap", threshold_json_value(o.column_believed_cap)}});
  return out;
}

inline std::string cents_label(const ultimatum::Offer& offer) {
  return std::to_string(offer.cents()) + (offer.cents() == 1 ? " cent" : " cents");
}

inline void print_bargaining_human(std::ostream& out, const ultimatum::BargainingOutcome& o) {
  for (const auto& r : o.rounds) {
    out << "Round " << r.round << ": offer " << to_string(r.offer.value()) << " (" << cents_label(r.offer)
        << ") " << (r.accepted ? "accepted" : "rejected") << "; Row's bound "
        << to_string(r.row_bound_after) << "\n";
  }
  if (o.agreement) {
    out << "Agreement at " << to_string(o.offer->value()) << " (" << cents_label(*o.offer)
        << ") in round " << o.round << "\n";
  } else {
    out << "No agreement: " << o.reason << "\n";
  }
  out << "Agreement range: " << o.true_range.range.to_string() << " with "
      << o.true_range.cent_offers.size() << " cent offers\n";
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relationship-model game analysis: supposed games, equilibria, repeated play "
               "and ultimatum bargaining"};
  app.name("relgame");
  app.require_subcommand(1);

  std::string file, example, perspective = "all", format = "human";
  auto* analyze = app.add_subcommand("analyze", "Supposed games, dominance and equilibria of a game");
  analyze->add_option("file", file, "Game document (JSON)");
  analyze->add_option("--example", example, "Built-in game: pd-fig1, pd-underestimated, pd-cooperative");
  analyze->add_option("--perspective", perspective, "Player name or 'all'");
  analyze->add_option("--format", format, "human or records")->check(CLI::IsMember({"human", "records"}));

  std::size_t rounds = 1;
  std::vector<std::string> policies;
  auto* sim = app.add_subcommand("simulate", "Repeated play with relationship updates");
  sim->add_option("file", file, "Game document (JSON)");
  sim->add_option("--example", example, "Built-in game");
  sim->add_option("--rounds", rounds, "Number of rounds")->check(CLI::PositiveNumber);
  sim->add_option("--policy", policies, "player=fixed|titfortat[:lo,hi]|rationalize[:lo,hi]");
  sim->add_option("--format", format, "human or records")->check(CLI::IsMember({"human", "records"}));

  std::string r_rc, r_cr, belief_rc, belief_cr, offers;
  std::size_t max_rounds = 200;
  auto* ult = app.add_subcommand("ultimatum", "Repeated ultimatum bargaining on a cent grid");
  ult->add_option("--example", example, "Built-in configuration: ultimatum-s3");
  ult->add_option("--r-rc", r_rc, "Row's relationship toward Column");
  ult->add_option("--r-cr", r_cr, "Column's relationship toward Row");
  ult->add_option("--belief-rc", belief_rc, "Column's belief about Row's relationship");
  ult->add_option("--belief-cr", belief_cr, "Row's belief about Column's relationship");
  ult->add_option("--offers", offers, "Fixed offer sequence, comma separated (otherwise ascent)");
  ult->add_option("--max-rounds", max_rounds, "Round limit");
  ult->add_option("--format", format, "human or records")->check(CLI::IsMember({"human", "records"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  const bool records = format == "records";
  try {
    if (analyze->parsed()) {
      RelationshipGame model = resolve_game(file, example);
      std::optional<std::size_t> only;
      if (perspective != "all") {
        only = model.game().player_index(perspective);
        if (!only) throw UsageError("unknown perspective \"" + perspective + "\"");
      }
      ReportDocument doc = build_report(model, only);
      if (records) out << records_to_text(report_to_records(doc));
      else print_report(out, model, doc);
      return kOk;
    }

    if (sim->parsed()) {
      RelationshipGame model = resolve_game(file, example);
      RepeatedGameConfig config{model.game(), model.beliefs(), rounds,
                                std::vector<UpdatePolicy>(model.num_players(), FixedPolicy{}), {}, {}};
      for (const auto& p : policies) {
        auto [player, policy] = parse_policy(model.game(), p);
        config.policies[player] = policy;
      }
      try {
        validate_config(config);
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
      SimulationTrace trace = simulate(config);
      if (records) {
        for (const auto& r : trace.rounds) out << round_to_json(model.game(), r).dump() << "\n";
      } else {
        print_trace_human(out, model.game(), trace);
      }
      return kOk;
    }

    if (ult->parsed()) {
      ultimatum::UltimatumConfig config;
      if (!example.empty()) {
        auto named = builtin::named_ultimatum(example);
        if (!named) throw UsageError("unknown example \"" + example + "\"; available: ultimatum-s3");
        config = *named;
      }
      if (!r_rc.empty()) config.r_rc = parse_rational_arg("--r-rc", r_rc);
      if (!r_cr.empty()) config.r_cr = parse_rational_arg("--r-cr", r_cr);
      // Beliefs default to the true values unless a built-in example supplies them.
      if (!belief_rc.empty()) config.belief_rc = parse_rational_arg("--belief-rc", belief_rc);
      else if (example.empty() || !r_rc.empty()) config.belief_rc = config.r_rc;
      if (!belief_cr.empty()) config.belief_cr = parse_rational_arg("--belief-cr", belief_cr);
      else if (example.empty() || !r_cr.empty()) config.belief_cr = config.r_cr;
      config.max_rounds = max_rounds;
      if (!offers.empty()) {
        config.policy = ultimatum::OfferPolicy::FixedSequence;
        std::stringstream ss(offers);
        std::string item;
        while (std::getline(ss, item, ',')) {
          try {
            config.fixed_offers.push_back(
                ultimatum::Offer::from_rational(parse_rational_arg("--offers", item)));
          } catch (const std::logic_error& e) {
            throw UsageError(std::string("--offers: ") + e.what());
          }
        }
      }
      auto outcome = ultimatum::bargain(config);
      if (records) out << records_to_text(bargaining_records(outcome));
      else print_bargaining_human(out, outcome);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DocumentError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ModelError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "analysis error: " << e.what() << "\n";
    return kAnalysis;
  }
  return kUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace relgame::cli
