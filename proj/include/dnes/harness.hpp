#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dnes/compressors.hpp"
#include "dnes/dynamics.hpp"
#include "dnes/games.hpp"
#include "dnes/graph.hpp"
#include "dnes/metrics.hpp"
#include "dnes/triggers.hpp"

namespace dnes {

enum class Preset { CDNES, ETNE, SETNE, ETCDNES1, ETCDNES2, SETCDNES };

const std::vector<Preset>& all_presets();
std::string preset_name(Preset p);
/// Case-insensitive; accepts the dashed spellings too (e.g. "ETC-DNES-2").
Preset parse_preset(const std::string& name);

/// Fully specified algorithm: compressor, trigger and stepsizes.
struct AlgorithmSpec {
  std::string label = "custom";
  std::string compressor = "quantize";  ///< identity | quantize | topk | normsign
  int quantize_bits = 2;
  int topk_k = 1;
  std::string trigger = "always";       ///< always | deterministic | stochastic
  std::string schedule = "zero";        ///< zero | fractional | exponential
  double schedule_a = 10.0;             ///< fractional numerator
  double schedule_b = 0.0;              ///< fractional offset
  double schedule_c = 2.0;              ///< fractional exponent
  double schedule_scale = 50.0;         ///< exponential scale
  double schedule_p = 0.99;             ///< exponential ratio
  double kappa = 1.5;
  double zeta_low = 0.5;
  double eta = 0.01;
  double gamma = 0.5;
  double alpha = 0.05;
  bool uncompressed_baseline = false;

  std::unique_ptr<Compressor> make_compressor() const;
  TriggerPolicy make_trigger() const;
  std::string description() const;
};

/// Parameter rows of the comparison table.
AlgorithmSpec expand_preset(Preset p);

struct ExperimentConfig {
  // Graph
  std::string graph_file;   ///< edge list; empty selects the random generator
  double graph_p = 0.3;
  std::uint64_t graph_seed = 1;
  // Game
  std::string game = "connectivity";  ///< connectivity | quadratic
  int game_n = 50;
  std::string game_matrix;
  std::string game_vector;
  int game_action_dim = 1;
  // Algorithms: presets, each optionally overridden by explicit keys.
  std::vector<std::string> presets;
  std::map<std::string, std::string> algorithm_overrides;
  // Run
  long iters = 100000;
  double target = 0.01;
  std::vector<std::uint64_t> seeds{1};
  int scalar_bits = 32;
  std::string out = "out";

  /// Resolved algorithm list (one "custom" entry when no preset is given).
  std::vector<AlgorithmSpec> algorithms() const;
};

/// Parses flat `key = value` text; '#' starts a comment. Unknown keys throw
/// std::invalid_argument naming the key and line.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
/// Applies one key/value pair (shared by the file parser and CLI overrides).
void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Graph, weights and game described by a config.
struct Scenario {
  DiGraph graph;
  WeightMatrix weights;
  std::unique_ptr<AffineGame> game;
  Vector x_star;
  std::string ne_source;  ///< "known" or "oracle"
};

Scenario build_scenario(const ExperimentConfig& cfg);

struct RunResult {
  std::string label;
  std::uint64_t seed = 0;
  RunTrace trace;
  std::optional<std::string> error;  ///< divergence or other failure
  long failed_iteration = -1;
};

struct PresetSummary {
  std::string label;
  std::string description;
  int runs = 0;
  int converged = 0;
  int failed = 0;
  double mean_bits = 0.0;       ///< over converged runs: bits to reach the target
  double mean_rounds = 0.0;
  double mean_iterations = 0.0;
  double mean_final_residual = 0.0;
  double mean_communication_rate = 0.0;
};

struct ExperimentResult {
  std::vector<RunResult> runs;
  std::vector<PresetSummary> presets;
  long iters = 0;
  double target = 0.0;
  int agents = 0;
  std::size_t edges = 0;
  std::string ne_source;

  bool any_failed() const;
  const PresetSummary* find(const std::string& label) const;
};

/// Runs every (algorithm, seed) pair. X_0 ~ U[0, 1) per coordinate, H_0 = 0.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_experiment_summary(std::ostream& out, const ExperimentResult& res);

/// Writes `<label>_seed<s>.csv`, `<label>_seed<s>_triggers.csv` per run and
/// `summary.txt`. Creates `dir` if needed; I/O failures throw with the path.
/// Returns the written paths.
std::vector<std::string> emit_outputs(const ExperimentResult& res, const std::string& dir);

}  // namespace dnes
