#include "dnes/harness.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dnes {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string normalize_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long d = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

const std::vector<std::string>& algorithm_keys() {
  static const std::vector<std::string> keys = {
      "compressor",         "quantize.bits",      "topk.k",          "trigger",
      "trigger.schedule",   "trigger.schedule.a", "trigger.schedule.b", "trigger.schedule.c",
      "trigger.schedule.scale", "trigger.schedule.p", "trigger.kappa", "trigger.zeta_low",
      "eta",                "gamma",              "alpha"};
  return keys;
}

void apply_algorithm_key(AlgorithmSpec& a, const std::string& key, const std::string& v) {
  if (key == "compressor") {
    if (v != "identity" && v != "quantize" && v != "topk" && v != "normsign") {
      throw std::invalid_argument("config: unknown compressor '" + v + "'");
    }
    a.compressor = v;
  } else if (key == "quantize.bits") {
    a.quantize_bits = static_cast<int>(to_long(key, v));
  } else if (key == "topk.k") {
    a.topk_k = static_cast<int>(to_long(key, v));
  } else if (key == "trigger") {
    if (v != "always" && v != "deterministic" && v != "stochastic") {
      throw std::invalid_argument("config: unknown trigger '" + v + "'");
    }
    a.trigger = v;
  } else if (key == "trigger.schedule") {
    if (v != "zero" && v != "fractional" && v != "exponential") {
      throw std::invalid_argument("config: unknown schedule '" + v + "'");
    }
    a.schedule = v;
  } else if (key == "trigger.schedule.a") {
    a.schedule_a = to_double(key, v);
  } else if (key == "trigger.schedule.b") {
    a.schedule_b = to_double(key, v);
  } else if (key == "trigger.schedule.c") {
    a.schedule_c = to_double(key, v);
  } else if (key == "trigger.schedule.scale") {
    a.schedule_scale = to_double(key, v);
  } else if (key == "trigger.schedule.p") {
    a.schedule_p = to_double(key, v);
  } else if (key == "trigger.kappa") {
    a.kappa = to_double(key, v);
  } else if (key == "trigger.zeta_low") {
    a.zeta_low = to_double(key, v);
  } else if (key == "eta") {
    a.eta = to_double(key, v);
  } else if (key == "gamma") {
    a.gamma = to_double(key, v);
  } else if (key == "alpha") {
    a.alpha = to_double(key, v);
  } else {
    throw std::invalid_argument("config: unknown algorithm key '" + key + "'");
  }
}

}  // namespace

// ------------------------------------------------------------------ presets

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> all = {Preset::CDNES,    Preset::ETNE,     Preset::SETNE,
                                          Preset::ETCDNES1, Preset::ETCDNES2, Preset::SETCDNES};
  return all;
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::CDNES: return "CDNES";
    case Preset::ETNE: return "ETNE";
    case Preset::SETNE: return "SETNE";
    case Preset::ETCDNES1: return "ETCDNES1";
    case Preset::ETCDNES2: return "ETCDNES2";
    case Preset::SETCDNES: return "SETCDNES";
  }
  return "?";
}

Preset parse_preset(const std::string& name) {
  const std::string key = normalize_name(name);
  for (Preset p : all_presets()) {
    if (preset_name(p) == key) return p;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

AlgorithmSpec expand_preset(Preset p) {
  AlgorithmSpec a;
  a.label = preset_name(p);
  a.eta = 0.01;
  a.gamma = 0.5;
  a.alpha = 0.05;
  a.compressor = "quantize";
  a.quantize_bits = 2;
  switch (p) {
    case Preset::CDNES:
      a.trigger = "always";
      a.schedule = "zero";
      break;
    case Preset::ETNE:
      a.compressor = "identity";
      a.alpha = 1.0;
      a.uncompressed_baseline = true;
      [[fallthrough]];
    case Preset::ETCDNES1:
      a.trigger = "deterministic";
      a.schedule = "fractional";
      a.schedule_a = 10.0;
      a.schedule_b = 0.0;
      a.schedule_c = 1.1;
      break;
    case Preset::ETCDNES2:
      a.trigger = "deterministic";
      a.schedule = "exponential";
      a.schedule_scale = 50.0;
      a.schedule_p = 0.99;
      break;
    case Preset::SETNE:
      a.compressor = "identity";
      a.alpha = 1.0;
      a.uncompressed_baseline = true;
      a.trigger = "stochastic";
      a.kappa = 1.075;
      a.zeta_low = 0.05;
      break;
    case Preset::SETCDNES:
      a.trigger = "stochastic";
      a.kappa = 1.5;
      a.zeta_low = 0.5;
      break;
  }
  return a;
}

std::unique_ptr<Compressor> AlgorithmSpec::make_compressor() const {
  if (compressor == "identity") return std::make_unique<IdentityCompressor>();
  if (compressor == "quantize") return std::make_unique<StochasticQuantizer>(quantize_bits);
  if (compressor == "topk") return std::make_unique<TopKCompressor>(topk_k);
  if (compressor == "normsign") return std::make_unique<NormSignCompressor>();
  throw std::invalid_argument("unknown compressor '" + compressor + "'");
}

TriggerPolicy AlgorithmSpec::make_trigger() const {
  if (trigger == "always") return AlwaysTrigger{};
  if (trigger == "deterministic") {
    if (schedule == "zero") return DeterministicTrigger{ThresholdSchedule::zero()};
    if (schedule == "fractional") {
      return DeterministicTrigger{ThresholdSchedule::fractional(schedule_a, schedule_b, schedule_c)};
    }
    if (schedule == "exponential") {
      return DeterministicTrigger{ThresholdSchedule::exponential(schedule_scale, schedule_p)};
    }
    throw std::invalid_argument("unknown schedule '" + schedule + "'");
  }
  if (trigger == "stochastic") {
    StochasticTriggerParams params{kappa, zeta_low};
    params.validate();
    return StochasticTrigger{params};
  }
  throw std::invalid_argument("unknown trigger '" + trigger + "'");
}

std::string AlgorithmSpec::description() const {
  std::ostringstream s;
  if (uncompressed_baseline) s << "uncompressed event-triggered baseline (approx.); ";
  s << "compressor=" << compressor;
  if (compressor == "quantize") s << "(b=" << quantize_bits << ")";
  if (compressor == "topk") s << "(k=" << topk_k << ")";
  s << " trigger=" << trigger;
  if (trigger == "deterministic") {
    if (schedule == "fractional") {
      s << "(tau_k=" << schedule_a << "/(k+" << schedule_b << ")^" << schedule_c << ")";
    } else if (schedule == "exponential") {
      s << "(tau_k=" << schedule_scale << "*" << schedule_p << "^k)";
    } else {
      s << "(tau_k=0)";
    }
  } else if (trigger == "stochastic") {
    s << "(kappa=" << kappa << ", zeta~U(" << zeta_low << ",1))";
  }
  s << " eta=" << eta << " gamma=" << gamma << " alpha=" << alpha;
  return s.str();
}

// ------------------------------------------------------------------- config

std::vector<AlgorithmSpec> ExperimentConfig::algorithms() const {
  std::vector<AlgorithmSpec> out;
  if (presets.empty()) {
    out.emplace_back();
  } else {
    for (const auto& name : presets) out.push_back(expand_preset(parse_preset(name)));
  }
  for (auto& a : out) {
    for (const auto& [k, v] : algorithm_overrides) apply_algorithm_key(a, k, v);
  }
  return out;
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "graph.file") {
    cfg.graph_file = v;
  } else if (key == "graph.p") {
    cfg.graph_p = to_double(key, v);
  } else if (key == "graph.seed") {
    cfg.graph_seed = static_cast<std::uint64_t>(to_long(key, v));
  } else if (key == "game") {
    if (v != "connectivity" && v != "quadratic") throw std::invalid_argument("config: unknown game '" + v + "'");
    cfg.game = v;
  } else if (key == "game.n") {
    cfg.game_n = static_cast<int>(to_long(key, v));
  } else if (key == "game.matrix") {
    cfg.game_matrix = v;
  } else if (key == "game.vector") {
    cfg.game_vector = v;
  } else if (key == "game.action_dim") {
    cfg.game_action_dim = static_cast<int>(to_long(key, v));
  } else if (key == "preset" || key == "presets") {
    cfg.presets = split_list(v);
    if (cfg.presets.size() == 1 && normalize_name(cfg.presets[0]) == "ALL") {
      cfg.presets.clear();
      for (Preset p : all_presets()) cfg.presets.push_back(preset_name(p));
    }
    for (const auto& p : cfg.presets) parse_preset(p);
  } else if (key == "iters") {
    cfg.iters = to_long(key, v);
  } else if (key == "target") {
    cfg.target = to_double(key, v);
  } else if (key == "seed" || key == "seeds") {
    cfg.seeds.clear();
    for (const auto& s : split_list(v)) cfg.seeds.push_back(static_cast<std::uint64_t>(to_long(key, s)));
    if (cfg.seeds.empty()) throw std::invalid_argument("config: empty seed list");
  } else if (key == "scalar_bits") {
    cfg.scalar_bits = static_cast<int>(to_long(key, v));
  } else if (key == "out") {
    cfg.out = v;
  } else if (std::find(algorithm_keys().begin(), algorithm_keys().end(), key) != algorithm_keys().end()) {
    // Validate eagerly so bad values are reported with the key.
    AlgorithmSpec probe;
    apply_algorithm_key(probe, key, v);
    cfg.algorithm_overrides[key] = v;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      apply_config_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_config(in);
}

// ----------------------------------------------------------------- scenario

Scenario build_scenario(const ExperimentConfig& cfg) {
  std::unique_ptr<AffineGame> game;
  if (cfg.game == "connectivity") {
    game = std::make_unique<ConnectivityGame>(cfg.game_n);
  } else {
    if (cfg.game_matrix.empty() || cfg.game_vector.empty()) {
      throw std::invalid_argument("quadratic game needs game.matrix and game.vector");
    }
    game = std::make_unique<QuadraticGame>(load_quadratic_game(cfg.game_matrix, cfg.game_vector, cfg.game_action_dim));
  }
  const int n = game->players();
  DiGraph g = cfg.graph_file.empty() ? random_strongly_connected_digraph(n, cfg.graph_p, cfg.graph_seed)
                                     : read_edge_list_file(cfg.graph_file);
  if (g.size() != n) {
    throw std::invalid_argument("graph has " + std::to_string(g.size()) + " agents but the game has " +
                                std::to_string(n) + " players");
  }
  WeightMatrix w = build_row_stochastic_weights(g);
  Vector x_star;
  std::string source;
  if (auto ne = game->known_ne(); ne && cfg.game == "connectivity") {
    x_star = *ne;
    source = "known";
  } else {
    x_star = quadratic_ne_oracle(*game);
    source = "oracle";
  }
  return Scenario{std::move(g), std::move(w), std::move(game), std::move(x_star), source};
}

// --------------------------------------------------------------- experiment

bool ExperimentResult::any_failed() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.error.has_value(); });
}

const PresetSummary* ExperimentResult::find(const std::string& label) const {
  for (const auto& p : presets) {
    if (p.label == label) return &p;
  }
  return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Scenario sc = build_scenario(cfg);
  const auto algos = cfg.algorithms();
  const int n = sc.game->players();
  const int dim = sc.game->dim();

  ExperimentResult res;
  res.iters = cfg.iters;
  res.target = cfg.target;
  res.agents = n;
  res.edges = sc.graph.edge_count();
  res.ne_source = sc.ne_source;

  for (const auto& algo : algos) {
    const auto compressor = algo.make_compressor();
    const TriggerPolicy trigger = algo.make_trigger();
    PresetSummary ps;
    ps.label = algo.label;
    ps.description = algo.description();
    for (std::uint64_t seed : cfg.seeds) {
      RunConfig rc;
      rc.params = {algo.eta, algo.gamma, algo.alpha, cfg.iters};
      rc.X0 = sample_initial_estimates(n, dim, seed);
      rc.H0 = Matrix::Zero(n, dim);
      rc.Xstar = consensual(sc.x_star, n);
      rc.target = cfg.target;
      rc.seed = seed;
      rc.scalar_bits = cfg.scalar_bits;

      RunResult rr;
      rr.label = algo.label;
      rr.seed = seed;
      try {
        rr.trace = run(sc.weights, *sc.game, *compressor, trigger, rc);
      } catch (const DivergenceError& e) {
        rr.error = e.what();
        rr.failed_iteration = e.iteration();
      }
      ++ps.runs;
      if (rr.error) {
        ++ps.failed;
      } else {
        const auto& s = rr.trace.summary;
        ps.mean_final_residual += s.final_residual;
        ps.mean_communication_rate += s.communication_rate;
        if (s.reached_target) {
          ++ps.converged;
          ps.mean_bits += static_cast<double>(s.total_bits);
          ps.mean_rounds += static_cast<double>(s.total_rounds);
          ps.mean_iterations += static_cast<double>(s.iterations);
        }
      }
      res.runs.push_back(std::move(rr));
    }
    const int ok = ps.runs - ps.failed;
    if (ok > 0) {
      ps.mean_final_residual /= ok;
      ps.mean_communication_rate /= ok;
    }
    if (ps.converged > 0) {
      ps.mean_bits /= ps.converged;
      ps.mean_rounds /= ps.converged;
      ps.mean_iterations /= ps.converged;
    }
    res.presets.push_back(std::move(ps));
  }
  return res;
}

void write_experiment_summary(std::ostream& out, const ExperimentResult& res) {
  out << std::setprecision(12);
  out << "agents = " << res.agents << '\n'
      << "edges = " << res.edges << '\n'
      << "ne_source = " << res.ne_source << '\n'
      << "iters = " << res.iters << '\n'
      << "target = " << res.target << '\n';
  for (const auto& p : res.presets) {
    const std::string k = "preset." + p.label + ".";
    out << k << "description = " << p.description << '\n'
        << k << "runs = " << p.runs << '\n'
        << k << "converged = " << p.converged << '\n'
        << k << "failed = " << p.failed << '\n';
    if (p.converged == p.runs) {
      out << k << "status = converged\n";
    } else if (p.failed > 0) {
      out << k << "status = diverged\n";
    } else {
      out << k << "status = not converged at K=" << res.iters << '\n';
    }
    if (p.converged > 0) {
      out << k << "mean_bits_to_target = " << p.mean_bits << '\n'
          << k << "mean_rounds_to_target = " << p.mean_rounds << '\n'
          << k << "mean_iterations_to_target = " << p.mean_iterations << '\n';
    }
    out << k << "mean_final_residual = " << p.mean_final_residual << '\n'
        << k << "mean_communication_rate = " << p.mean_communication_rate << '\n';
  }
  for (const auto& r : res.runs) {
    if (r.error) {
      out << "failure." << r.label << ".seed" << r.seed << " = iteration " << r.failed_iteration << ": " << *r.error
          << '\n';
    }
  }
  // Fully converged presets first, cheapest first.
  std::vector<const PresetSummary*> order;
  for (const auto& p : res.presets) {
    if (p.converged == p.runs && p.runs > 0) order.push_back(&p);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const PresetSummary* a, const PresetSummary* b) { return a->mean_bits < b->mean_bits; });
  out << "ranking_by_bits =";
  for (std::size_t i = 0; i < order.size(); ++i) out << (i ? ", " : " ") << order[i]->label;
  out << '\n';
}

std::vector<std::string> emit_outputs(const ExperimentResult& res, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());

  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    written.push_back(path);
    return f;
  };
  auto close = [&](std::ofstream& f) {
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + written.back() + "'");
  };

  for (const auto& r : res.runs) {
    const std::string stem = r.label + "_seed" + std::to_string(r.seed);
    auto csv = open(stem + ".csv");
    write_trace_csv(csv, r.trace);
    close(csv);
    auto log = open(stem + "_triggers.csv");
    write_trigger_log(log, r.trace);
    close(log);
  }
  auto summary = open("summary.txt");
  write_experiment_summary(summary, res);
  close(summary);
  return written;
}

}  // namespace dnes
