#ifndef SHAPIQ_IO_HPP_
#define SHAPIQ_IO_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/games.hpp"
#include "shapiq/nsii.hpp"
#include "shapiq/scores.hpp"
#include "shapiq/shapiq.hpp"

namespace shapiq {

using json = nlohmann::json;

inline json players_json(Coalition s) { return json(s.players()); }

inline Coalition coalition_from_json(const json& players, int d) {
  if (!players.is_array()) throw SchemaError("player list must be an array");
  Mask m = 0;
  for (const auto& p : players) {
    if (!p.is_number_integer()) throw SchemaError("player ids must be integers");
    const int i = p.get<int>();
    if (i < 0 || i >= d) throw SchemaError("player id " + std::to_string(i) + " outside [0, d)");
    m |= Mask{1} << i;
  }
  return Coalition(m);
}

// { "kind", "d", "s0", "scores": [{"players": [...], "value": v}] }, subsets
// in (|S|, mask) order.
inline json scores_to_json(const InteractionScores& scores, std::string kind_label = "") {
  json j;
  j["kind"] = kind_label.empty() ? std::string(to_string(scores.kind().tag)) : kind_label;
  j["d"] = scores.players();
  j["s0"] = scores.max_order();
  json arr = json::array();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    arr.push_back({{"players", players_json(scores.subsets()[i])}, {"value", scores.at(i)}});
  }
  j["scores"] = std::move(arr);
  return j;
}

inline json nsii_to_json(const NsiiScores& n) { return scores_to_json(n.scores, "n-SII"); }

inline json report_to_json(const EstimateReport& r, const std::string& estimator, std::string kind_label = "") {
  json j = scores_to_json(r.scores, std::move(kind_label));
  j["estimator"] = estimator;
  json var = json::array();
  for (std::size_t i = 0; i < r.variances.size(); ++i) {
    var.push_back({{"players", players_json(r.scores.subsets()[i])}, {"value", r.variances[i]}});
  }
  j["variances"] = std::move(var);
  j["k0"] = r.k0;
  j["samples_drawn"] = r.samples_drawn;
  j["budget_used"] = r.budget_used;
  j["seed"] = r.seed;
  j["order_covered"] = r.order_covered;
  j["variance_undefined"] = r.variance_undefined;
  if (!r.extras.empty()) j["extras"] = r.extras;
  return j;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

// Writes to a sibling temp file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline SoumGame soum_from_json(const json& j) {
  if (!j.contains("d") || !j.contains("terms")) throw SchemaError("SOUM file needs \"d\" and \"terms\"");
  const int d = j.at("d").get<int>();
  check_player_count(d);
  std::vector<SoumGame::Term> terms;
  for (const auto& t : j.at("terms")) {
    terms.push_back({coalition_from_json(t.at("players"), d), t.at("coefficient").get<double>()});
  }
  return SoumGame(d, std::move(terms));
}

inline json soum_to_json(const SoumGame& g) {
  json terms = json::array();
  for (const auto& t : g.terms()) terms.push_back({{"players", players_json(t.players)}, {"coefficient", t.coefficient}});
  return {{"d", g.players()}, {"terms", std::move(terms)}};
}

inline TabularGame tabular_from_json(const json& j) {
  if (!j.contains("d") || !j.contains("values")) throw SchemaError("tabular file needs \"d\" and \"values\"");
  const int d = j.at("d").get<int>();
  if (d < 0 || d > kMaxPowersetPlayers) {
    throw CapacityError("tabular games support at most " + std::to_string(kMaxPowersetPlayers) + " players");
  }
  if (j.contains("empty_value_included") && !j.at("empty_value_included").get<bool>()) {
    throw SchemaError("tabular files must include the empty-coalition value");
  }
  return TabularGame(d, j.at("values").get<std::vector<double>>());
}

inline json tabular_to_json(const TabularGame& g) {
  return {{"d", g.players()}, {"empty_value_included", true}, {"values", g.values()}};
}

// Either file format; "terms" marks a SOUM.
inline std::unique_ptr<Game> load_game(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    if (j.contains("terms")) return std::make_unique<SoumGame>(soum_from_json(j));
    return std::make_unique<TabularGame>(tabular_from_json(j));
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace shapiq

#endif  // SHAPIQ_IO_HPP_
