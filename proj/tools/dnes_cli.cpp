#include <CLI11.hpp>

#include <exception>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "dnes/compressors.hpp"
#include "dnes/games.hpp"
#include "dnes/graph.hpp"
#include "dnes/harness.hpp"
#include "dnes/theory.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> presets;
  std::vector<std::string> sets;
};

dnes::ExperimentConfig load_config(const CommonOptions& o) {
  dnes::ExperimentConfig cfg = o.config.empty() ? dnes::ExperimentConfig{} : dnes::parse_config_file(o.config);
  if (!o.presets.empty()) {
    std::string joined;
    for (const auto& p : o.presets) joined += (joined.empty() ? "" : ",") + p;
    dnes::apply_config_key(cfg, "presets", joined);
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    dnes::apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

int cmd_run(const CommonOptions& o, const std::vector<long>& seeds, long iters, double target,
            const std::string& out) {
  dnes::ExperimentConfig cfg = load_config(o);
  if (cfg.presets.empty() && cfg.algorithm_overrides.empty()) {
    for (auto p : dnes::all_presets()) cfg.presets.push_back(dnes::preset_name(p));
  }
  if (!seeds.empty()) {
    cfg.seeds.clear();
    for (long s : seeds) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (iters > 0) cfg.iters = iters;
  if (target >= 0.0) cfg.target = target;
  if (!out.empty()) cfg.out = out;

  const dnes::ExperimentResult res = dnes::run_experiment(cfg);
  dnes::write_experiment_summary(std::cout, res);
  const auto paths = dnes::emit_outputs(res, cfg.out);
  std::cerr << "wrote " << paths.size() << " files to " << cfg.out << '\n';
  if (res.any_failed()) {
    for (const auto& r : res.runs) {
      if (r.error) std::cerr << "error: " << r.label << " seed " << r.seed << ": " << *r.error << '\n';
    }
    return 3;
  }
  return 0;
}

int cmd_certify(const CommonOptions& o) {
  dnes::ExperimentConfig cfg = load_config(o);
  if (cfg.presets.empty() && cfg.algorithm_overrides.empty()) cfg.presets = {"SETCDNES"};
  const dnes::Scenario sc = dnes::build_scenario(cfg);
  const auto gc = dnes::estimate_game_constants(*sc.game);
  const auto sq = dnes::spectral_quantities(sc.weights);
  const int n = sc.game->players();
  const int d = sc.game->dim();

  for (const auto& algo : cfg.algorithms()) {
    const auto comp = algo.make_compressor();
    const auto cc = comp->constants(d);
    dnes::TheoryInputs in;
    in.n = n;
    in.L_m = gc.L_m;
    in.mu_r = gc.mu_r;
    in.fro_I_minus_W = sq.fro_I_minus_W;
    in.lambda_min_tilde = sq.lambda_min_tilde;
    in.C = cc.C;
    in.delta = cc.delta;
    in.r = cc.r;
    in.alpha = algo.alpha;
    in.kappa = algo.kappa;
    in.zeta_low = algo.zeta_low;

    std::cout << "# " << algo.label << ": " << algo.description() << '\n';
    std::cout << "L_mapping = " << gc.L_mapping << '\n';
    const dnes::TheoryReport rep = dnes::evaluate_theory(in, algo.eta);
    dnes::write_theory_report(std::cout, in, rep);
    const dnes::Theorem which =
        algo.trigger == "stochastic" ? dnes::Theorem::theorem2 : dnes::Theorem::theorem1;
    const double eta_c = dnes::certified_eta(in, which);
    std::cout << "certified_eta = " << eta_c << '\n';
    if (eta_c > 0.0) {
      const dnes::TheoryReport at = dnes::evaluate_theory(in, eta_c);
      std::cout << "certified_gamma = " << at.gamma_star << '\n'
                << "certified_rho = " << (which == dnes::Theorem::theorem2 ? at.rho_C : at.rho_A) << '\n';
    } else {
      std::cout << "certified = none (stepsize condition infeasible for this compressor and alpha)\n";
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_bench(const std::string& name, int bits, int k, const std::vector<int>& dims, int samples, long seed) {
  dnes::AlgorithmSpec spec;
  spec.compressor = name;
  spec.quantize_bits = bits;
  spec.topk_k = k;
  const auto comp = spec.make_compressor();
  std::cout << "d,samples,C_declared,delta_declared,r,C_mean,C_stderr,C_max,delta_estimate,bias_mean,bias_stderr,"
               "within_declared\n";
  std::cout << std::setprecision(8);
  bool ok = true;
  for (int d : dims) {
    const auto e = dnes::estimate_constants(*comp, d, samples, static_cast<std::uint64_t>(seed));
    const bool w = e.within_declared();
    ok = ok && w;
    std::cout << d << ',' << e.samples << ',' << e.declared.C << ',' << e.declared.delta << ',' << e.declared.r << ','
              << e.C_mean << ',' << e.C_stderr << ',' << e.C_max << ',' << e.delta_estimate << ',' << e.bias_mean
              << ',' << e.bias_stderr << ',' << (w ? "yes" : "no") << '\n';
  }
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed, event-triggered distributed Nash equilibrium seeking"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::vector<long> seeds;
  long iters = 0;
  double target = -1.0;
  std::string out;
  auto* run = app.add_subcommand("run", "Run presets on a scenario and write traces");
  run->add_option("--config", run_opts.config, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--preset", run_opts.presets, "Preset name(s), or 'all'")->delimiter(',');
  run->add_option("--set", run_opts.sets, "Extra key=value config entries");
  run->add_option("--seed", seeds, "Run seed(s)")->delimiter(',');
  run->add_option("--iters", iters, "Iteration budget K");
  run->add_option("--target", target, "Residual target");
  run->add_option("--out", out, "Output directory");

  CommonOptions cert_opts;
  auto* cert = app.add_subcommand("certify", "Evaluate the convergence constants for a scenario");
  cert->add_option("--config", cert_opts.config, "key = value config file")->check(CLI::ExistingFile);
  cert->add_option("--preset", cert_opts.presets, "Preset name(s), or 'all'")->delimiter(',');
  cert->add_option("--set", cert_opts.sets, "Extra key=value config entries");

  std::string bench_name = "quantize";
  int bench_bits = 2, bench_k = 1, bench_samples = 2000;
  long bench_seed = 1;
  std::vector<int> bench_dims{5, 50};
  auto* bench = app.add_subcommand("compress-bench", "Monte Carlo check of compressor constants");
  bench->add_option("--compressor", bench_name, "identity | quantize | topk | normsign")
      ->check(CLI::IsMember({"identity", "quantize", "topk", "normsign"}));
  bench->add_option("--bits", bench_bits, "Quantizer bits b");
  bench->add_option("--k", bench_k, "Top-k size");
  bench->add_option("--d", bench_dims, "Dimension(s)")->delimiter(',');
  bench->add_option("--samples", bench_samples, "Samples per dimension");
  bench->add_option("--seed", bench_seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts, seeds, iters, target, out);
    if (*cert) return cmd_certify(cert_opts);
    if (*bench) return cmd_bench(bench_name, bench_bits, bench_k, bench_dims, bench_samples, bench_seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
