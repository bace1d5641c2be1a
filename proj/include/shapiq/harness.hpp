#ifndef SHAPIQ_HARNESS_HPP_
#define SHAPIQ_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "shapiq/baselines.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/exact.hpp"
#include "shapiq/games.hpp"
#include "shapiq/io.hpp"
#include "shapiq/metrics.hpp"
#include "shapiq/nsii.hpp"
#include "shapiq/rng.hpp"
#include "shapiq/scores.hpp"
#include "shapiq/shapiq.hpp"
#include "shapiq/weights.hpp"

namespace shapiq {

// Indices the harness can score. n-SII is SII aggregated after estimation.
enum class HarnessIndex { SII, STI, FSI, NSII };

inline std::string harness_label(HarnessIndex k) {
  switch (k) {
    case HarnessIndex::SII: return "SII";
    case HarnessIndex::STI: return "STI";
    case HarnessIndex::FSI: return "FSI";
    case HarnessIndex::NSII: return "n-SII";
  }
  return "?";
}

inline HarnessIndex parse_harness_index(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "n-sii" || lower == "nsii") return HarnessIndex::NSII;
  switch (parse_index(lower)) {
    case Index::SII: return HarnessIndex::SII;
    case Index::STI: return HarnessIndex::STI;
    case Index::FSI: return HarnessIndex::FSI;
    case Index::SV: return HarnessIndex::SII;
  }
  throw ConfigError("unknown index " + name);
}

// Kind actually estimated: n-SII runs as SII.
inline IndexKind estimated_kind(HarnessIndex k, int s0) {
  switch (k) {
    case HarnessIndex::STI: return {Index::STI, s0};
    case HarnessIndex::FSI: return {Index::FSI, s0};
    default: return {Index::SII, s0};
  }
}

struct EstimatorSpec {
  std::string name;  // shapiq, pb_sii, pb_sti, kb_fsi
  HarnessIndex index = HarnessIndex::SII;
};

struct GameSource {
  enum class Type { Soum, Tabular } type = Type::Soum;
  int d = 8;
  int n_terms = 50;
  int max_order = 0;  // 0 means d
  std::vector<std::string> paths;
};

inline const std::vector<std::string>& known_metrics() {
  static const std::vector<std::string> names = {"mse",           "mse_at_k",        "prec_at_k",
                                                 "efficiency_gap", "runtime_seconds", "budget_used"};
  return names;
}

struct ExperimentConfig {
  GameSource game;
  int order = 2;
  std::vector<EstimatorSpec> estimators;
  std::vector<std::uint64_t> budgets;
  int instances = 50;
  std::uint64_t seed = 0;
  std::vector<std::string> metrics = known_metrics();
  std::size_t top_k = 10;
  SamplingScheme scheme = SamplingScheme::ShapleyKernel;
  // SHAP-IQ and KB-FSI draw from the same coalition stream per (instance, budget).
  bool paired_streams = false;

  int players() const { return game.d; }

  void validate() const {
    if (instances < 1) throw ConfigError("instances must be >= 1");
    if (budgets.empty()) throw ConfigError("budget grid is empty");
    for (std::size_t i = 1; i < budgets.size(); ++i) {
      if (budgets[i] <= budgets[i - 1]) throw ConfigError("budget grid must be strictly increasing");
    }
    if (estimators.empty()) throw ConfigError("no estimators configured");
    if (order < 1 || order > game.d) throw ConfigError("order must lie in [1, d]");
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (game.type == GameSource::Type::Soum) {
      check_player_count(game.d);
      if (game.n_terms < 1) throw ConfigError("SOUM needs n_terms >= 1");
      if (game.max_order < 0 || game.max_order > game.d) throw ConfigError("SOUM max_order outside [1, d]");
    } else if (static_cast<int>(game.paths.size()) != instances) {
      throw ConfigError("tabular source needs one path per instance");
    }
    for (const auto& m : metrics) {
      if (std::find(known_metrics().begin(), known_metrics().end(), m) == known_metrics().end()) {
        throw ConfigError("unknown metric " + m);
      }
    }
    for (const auto& e : estimators) {
      const bool ok = (e.name == "shapiq") ||
                      (e.name == "pb_sii" && (e.index == HarnessIndex::SII || e.index == HarnessIndex::NSII)) ||
                      (e.name == "pb_sti" && e.index == HarnessIndex::STI) ||
                      (e.name == "kb_fsi" && e.index == HarnessIndex::FSI);
      if (!ok) throw ConfigError("estimator " + e.name + " cannot estimate " + harness_label(e.index));
    }
  }

  // Orders scored for one index: FSI only has ground truth at the top order.
  std::vector<int> orders_for(HarnessIndex k) const {
    if (k == HarnessIndex::FSI) return {order};
    std::vector<int> out;
    for (int s = 1; s <= order; ++s) out.push_back(s);
    return out;
  }
};

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    const json& g = j.at("game");
    const std::string type = g.value("type", "soum");
    if (type == "soum") {
      c.game.type = GameSource::Type::Soum;
      c.game.d = g.at("d").get<int>();
      c.game.n_terms = g.value("n_terms", 50);
      c.game.max_order = g.value("max_order", 0);
    } else if (type == "tabular") {
      c.game.type = GameSource::Type::Tabular;
      c.game.paths = g.at("paths").get<std::vector<std::string>>();
    } else {
      throw ConfigError("unknown game type " + type);
    }
    c.order = j.value("order", 2);
    c.instances = j.value("instances", c.game.type == GameSource::Type::Tabular
                                           ? static_cast<int>(c.game.paths.size())
                                           : 50);
    c.seed = j.value("seed", std::uint64_t{0});
    c.top_k = j.value("top_k", std::size_t{10});
    c.paired_streams = j.value("paired_streams", false);
    if (j.contains("scheme")) c.scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (j.contains("metrics")) c.metrics = j.at("metrics").get<std::vector<std::string>>();
    c.budgets = j.at("budgets").get<std::vector<std::uint64_t>>();
    for (const auto& e : j.at("estimators")) {
      EstimatorSpec spec;
      if (e.is_string()) {
        spec.name = e.get<std::string>();
        if (spec.name == "pb_sti") spec.index = HarnessIndex::STI;
        else if (spec.name == "kb_fsi") spec.index = HarnessIndex::FSI;
        else spec.index = HarnessIndex::SII;
      } else {
        spec.name = e.at("name").get<std::string>();
        spec.index = parse_harness_index(e.at("index").get<std::string>());
      }
      c.estimators.push_back(spec);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  if (c.game.type == GameSource::Type::Tabular && !c.game.paths.empty()) {
    c.game.d = load_game(c.game.paths.front())->players();
  }
  c.validate();
  return c;
}

struct ResultRow {
  int instance_id = 0;
  std::string estimator;
  std::string kind;
  int order = 0;
  std::uint64_t budget = 0;
  std::string metric;
  double value = 0.0;
  std::uint64_t seed = 0;
};

// FNV-1a, so seeds do not depend on the standard library's string hash.
inline std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t run_seed(const ExperimentConfig& c, int instance, const EstimatorSpec& e,
                              std::uint64_t budget) {
  const bool paired = c.paired_streams && (e.name == "shapiq" || e.name == "kb_fsi");
  const std::uint64_t tag = paired ? name_hash("paired") : name_hash(e.name + "/" + harness_label(e.index));
  return hash_seed({c.seed, static_cast<std::uint64_t>(instance), tag, budget});
}

inline std::uint64_t game_seed(const ExperimentConfig& c, int instance) {
  return hash_seed({c.seed, static_cast<std::uint64_t>(instance), name_hash("game")});
}

// Estimates for one run, as scored against ground truth.
struct RunOutcome {
  InteractionScores scores;
  std::uint64_t budget_used = 0;
};

inline RunOutcome run_estimator(const Game& game, const EstimatorSpec& e, int s0, std::uint64_t budget,
                                SamplingScheme scheme, std::uint64_t seed) {
  const IndexKind kind = estimated_kind(e.index, s0);
  EstimateReport r;
  if (e.name == "shapiq") r = shapiq_estimate(game, kind, budget, scheme, seed);
  else if (e.name == "pb_sii") r = pb_sii(game, s0, budget, seed);
  else if (e.name == "pb_sti") r = pb_sti(game, s0, budget, seed);
  else if (e.name == "kb_fsi") r = kb_fsi(game, s0, budget, seed);
  else throw ConfigError("unknown estimator " + e.name);
  RunOutcome out{std::move(r.scores), r.budget_used};
  if (e.index == HarnessIndex::NSII) out.scores = aggregate_nsii(out.scores, s0).scores;
  return out;
}

namespace detail {

inline std::vector<ResultRow> run_instance(const ExperimentConfig& c, int instance) {
  std::unique_ptr<Game> game;
  std::optional<SoumGame> soum;
  if (c.game.type == GameSource::Type::Soum) {
    soum.emplace(soum_random(c.game.d, c.game.n_terms, game_seed(c, instance),
                             c.game.max_order == 0 ? c.game.d : c.game.max_order));
  } else {
    game = load_game(c.game.paths[static_cast<std::size_t>(instance)]);
  }
  const Game& g = soum ? static_cast<const Game&>(*soum) : *game;

  std::map<HarnessIndex, InteractionScores> truth;
  for (const auto& e : c.estimators) {
    if (truth.count(e.index)) continue;
    const IndexKind kind = estimated_kind(e.index, c.order);
    InteractionScores t = soum ? soum_ground_truth(*soum, kind) : exact_cii_representation(g, kind);
    if (e.index == HarnessIndex::NSII) t = aggregate_nsii(t, c.order).scores;
    truth.emplace(e.index, std::move(t));
  }

  std::vector<ResultRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& e : c.estimators) {
    const InteractionScores& gt = truth.at(e.index);
    for (std::uint64_t budget : c.budgets) {
      const std::uint64_t seed = run_seed(c, instance, e, budget);
      std::optional<RunOutcome> out;
      double seconds = nan;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        out = run_estimator(g, e, c.order, budget, c.scheme, seed);
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (const InsufficientBudget&) {
        // Budget below the estimator's minimum: rows are kept, values are NaN.
      }
      const double gap = out ? efficiency_gap(out->scores, g) : nan;
      for (int s : c.orders_for(e.index)) {
        for (const auto& m : c.metrics) {
          double v = nan;
          if (out) {
            if (m == "mse") v = mse(out->scores, gt, s);
            else if (m == "mse_at_k") v = mse_at_k(out->scores, gt, s, c.top_k);
            else if (m == "prec_at_k") v = prec_at_k(out->scores, gt, s, c.top_k);
            else if (m == "efficiency_gap") v = gap;
            else if (m == "runtime_seconds") v = seconds;
            else if (m == "budget_used") v = static_cast<double>(out->budget_used);
          }
          rows.push_back({instance, e.name, harness_label(e.index), s, budget, m, v, seed});
        }
      }
    }
  }
  return rows;
}

}  // namespace detail

// Runs every (instance, estimator, budget). Instances are spread over
// `workers` threads; rows come back in (instance, estimator, budget, order,
// metric) order regardless of scheduling.
inline std::vector<ResultRow> run_budget_sweep(const ExperimentConfig& config, unsigned workers = 1) {
  config.validate();
  const int n = config.instances;
  std::vector<std::vector<ResultRow>> per_instance(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        per_instance[static_cast<std::size_t>(i)] = detail::run_instance(config, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& chunk : per_instance) rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

inline std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "instance_id,estimator,kind,order,budget,metric,value,seed\n";
  for (const auto& r : rows) {
    os << r.instance_id << ',' << r.estimator << ',' << r.kind << ',' << r.order << ',' << r.budget << ','
       << r.metric << ',' << format_value(r.value) << ',' << r.seed << '\n';
  }
  return os.str();
}

inline std::string rows_to_jsonl(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    json j = {{"instance_id", r.instance_id}, {"estimator", r.estimator}, {"kind", r.kind},
              {"order", r.order},             {"budget", r.budget},       {"metric", r.metric},
              {"seed", r.seed}};
    j["value"] = std::isnan(r.value) ? json(nullptr) : json(r.value);
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace shapiq

#endif  // SHAPIQ_HARNESS_HPP_
