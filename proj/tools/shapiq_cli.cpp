// shapiq: exact and sampled interaction indices from the command line.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error or unreadable input.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "shapiq/baselines.hpp"
#include "shapiq/exact.hpp"
#include "shapiq/games.hpp"
#include "shapiq/harness.hpp"
#include "shapiq/io.hpp"
#include "shapiq/nsii.hpp"
#include "shapiq/shapiq.hpp"

namespace fs = std::filesystem;
using namespace shapiq;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

// Raised for problems the caller can fix by changing the invocation.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string game_file;
  std::string index = "sii";
  int order = 2;
  std::uint64_t budget = std::uint64_t{1} << 14;
  std::uint64_t seed = 0;
  std::string scheme = "shapley_kernel";
  std::string method;
  std::string out;
  std::string out_csv;
  std::string config_file;
  std::optional<unsigned> workers;
  int players = 30;
  int terms = 50;
  int max_order = 0;
};

std::unique_ptr<Game> open_game(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("game file not found: " + path);
  return load_game(path);
}

// The index flag plus n-SII, which is computed from SII.
struct IndexChoice {
  IndexKind kind;
  bool nsii = false;
  std::string label;
};

IndexChoice resolve_index(const std::string& name, int order) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "n-sii" || lower == "nsii") return {IndexKind(Index::SII, order), true, "n-SII"};
  Index tag;
  try {
    tag = parse_index(lower);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (tag == Index::SV) return {IndexKind::sv(), false, "SV"};
  return {IndexKind(tag, order), false, std::string(to_string(tag))};
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out, text);
  }
}

int cmd_exact(const Options& o) {
  const auto game = open_game(o.game_file);
  const IndexChoice ix = resolve_index(o.index, o.order);
  std::cerr << "exact: d=" << game->players() << " index=" << ix.label << " order=" << ix.kind.s0 << "\n";
  InteractionScores scores = ix.kind.tag == Index::SV ? exact_sv_representation(*game)
                                                      : exact_cii_representation(*game, ix.kind);
  if (ix.nsii) {
    emit(nsii_to_json(aggregate_nsii(scores, ix.kind.s0)), o.out);
  } else {
    emit(scores_to_json(scores), o.out);
  }
  return 0;
}

int cmd_estimate(const Options& o) {
  const auto game = open_game(o.game_file);
  const IndexChoice ix = resolve_index(o.index, o.order);
  const SamplingScheme scheme = parse_scheme(o.scheme);
  EstimateReport r = ix.kind.tag == Index::SV ? shapiq_sv(*game, o.budget, o.seed)
                                              : shapiq_estimate(*game, ix.kind, o.budget, scheme, o.seed);
  std::cerr << "estimate: d=" << game->players() << " index=" << ix.label << " order=" << ix.kind.s0
            << " budget=" << o.budget << " scheme=" << to_string(scheme) << " seed=" << r.seed << " k0=" << r.k0
            << " samples=" << r.samples_drawn << " budget_used=" << r.budget_used << "\n";
  if (ix.nsii) r.scores = aggregate_nsii(r.scores, ix.kind.s0).scores;
  emit(report_to_json(r, "shapiq", ix.label), o.out);
  return 0;
}

int cmd_baseline(const Options& o) {
  const auto game = open_game(o.game_file);
  EstimateReport r;
  if (o.method == "pb_sii") r = pb_sii(*game, o.order, o.budget, o.seed);
  else if (o.method == "pb_sti") r = pb_sti(*game, o.order, o.budget, o.seed);
  else if (o.method == "kb_fsi") r = kb_fsi(*game, o.order, o.budget, o.seed);
  else throw UsageError("unknown method " + o.method + " (pb_sii, pb_sti, kb_fsi)");
  std::cerr << "baseline: method=" << o.method << " d=" << game->players() << " order=" << o.order
            << " budget=" << o.budget << " seed=" << r.seed << " budget_used=" << r.budget_used << "\n";
  emit(report_to_json(r, o.method), o.out);
  return 0;
}

int cmd_soum_gen(const Options& o) {
  const int max_order = o.max_order == 0 ? o.players : o.max_order;
  const SoumGame g = soum_random(o.players, o.terms, o.seed, max_order);
  std::cerr << "soum-gen: d=" << o.players << " terms=" << o.terms << " max_order=" << max_order
            << " seed=" << o.seed << "\n";
  emit(soum_to_json(g), o.out);
  return 0;
}

unsigned resolve_workers(const Options& o) {
  if (o.workers) return std::max(1u, *o.workers);
  if (const char* env = std::getenv("SHAPIQ_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("SHAPIQ_WORKERS must be a positive integer, got ") + env);
  }
  return 1;
}

int cmd_bench(const Options& o) {
  if (!fs::is_regular_file(o.config_file)) throw UsageError("config file not found: " + o.config_file);
  const ExperimentConfig c = config_from_json(read_json_file(o.config_file));
  const unsigned workers = resolve_workers(o);
  std::cerr << "bench: d=" << c.players() << " order=" << c.order << " instances=" << c.instances
            << " budgets=" << c.budgets.size() << " estimators=" << c.estimators.size() << " seed=" << c.seed
            << " scheme=" << to_string(c.scheme) << " workers=" << workers << "\n";
  const auto rows = run_budget_sweep(c, workers);
  const std::string csv = rows_to_csv(rows);
  if (o.out_csv.empty()) {
    std::cout << csv;
  } else {
    write_file_atomic(o.out_csv, csv);
  }
  std::cerr << "bench: " << rows.size() << " rows\n";
  return 0;
}

void add_index_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--index", o.index, "sii, sti, fsi, sv or n-sii")->capture_default_str();
  cmd->add_option("--order", o.order, "maximum interaction order s0")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_budget_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--budget", o.budget, "model evaluations (benchmark protocol default 2^14)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed; always echoed to stderr")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley-based interaction indices: exact computation, sampling estimates and benchmarks"};
  app.require_subcommand(1);
  Options o;

  auto* exact = app.add_subcommand("exact", "exact scores by full enumeration (d <= 24)");
  exact->add_option("game", o.game_file, "game JSON (SOUM or tabular)")->required();
  add_index_flags(exact, o);
  exact->add_option("--out", o.out, "output JSON path (stdout if omitted)");

  auto* estimate = app.add_subcommand("estimate", "SHAP-IQ sampling estimate");
  estimate->add_option("game", o.game_file, "game JSON (SOUM or tabular)")->required();
  add_index_flags(estimate, o);
  add_budget_flags(estimate, o);
  estimate->add_option("--scheme", o.scheme, "size weights: shapley_kernel (benchmark protocol default) or sii_tail")
      ->capture_default_str();
  estimate->add_option("--out", o.out, "output JSON path (stdout if omitted)");

  auto* baseline = app.add_subcommand("baseline", "permutation and kernel baselines");
  baseline->add_option("game", o.game_file, "game JSON (SOUM or tabular)")->required();
  baseline->add_option("--method", o.method, "pb_sii, pb_sti or kb_fsi")->required();
  baseline->add_option("--order", o.order, "maximum interaction order s0")->capture_default_str()->check(CLI::PositiveNumber);
  add_budget_flags(baseline, o);
  baseline->add_option("--out", o.out, "output JSON path (stdout if omitted)");

  auto* soum = app.add_subcommand("soum-gen", "random sum of unanimity models");
  soum->add_option("--players", o.players, "number of players d")->capture_default_str();
  soum->add_option("--terms", o.terms, "number of unanimity terms (benchmark protocol default 50)")->capture_default_str();
  soum->add_option("--max-order", o.max_order, "largest term size; 0 means d")->capture_default_str();
  soum->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  soum->add_option("--out", o.out, "output JSON path (stdout if omitted)");

  auto* bench = app.add_subcommand("bench", "budget sweep over estimators and game instances");
  bench->add_option("config", o.config_file, "experiment config JSON")->required();
  bench->add_option("--out-csv", o.out_csv, "CSV path, written atomically (stdout if omitted)");
  bench->add_option("--workers", o.workers, "worker threads (falls back to SHAPIQ_WORKERS, then 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*exact) return cmd_exact(o);
    if (*estimate) return cmd_estimate(o);
    if (*baseline) return cmd_baseline(o);
    if (*soum) return cmd_soum_gen(o);
    if (*bench) return cmd_bench(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
