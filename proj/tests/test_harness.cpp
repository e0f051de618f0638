#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnes/harness.hpp"

using namespace dnes;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("dnes_test_" + name);
  std::filesystem::remove_all(p);
  return p.string();
}

ExperimentConfig small_config() {
  std::istringstream in(
      "game.n = 6\n"
      "graph.p = 0.4\n"
      "graph.seed = 5\n"
      "iters = 3000\n"
      "target = 0.01\n");
  return parse_config(in);
}

}  // namespace

TEST(Presets, Expansion) {
  const auto e2 = expand_preset(Preset::ETCDNES2);
  EXPECT_EQ(e2.schedule, "exponential");
  EXPECT_EQ(e2.schedule_scale, 50.0);
  EXPECT_EQ(e2.schedule_p, 0.99);
  const auto s = expand_preset(Preset::SETCDNES);
  EXPECT_EQ(s.trigger, "stochastic");
  EXPECT_EQ(s.kappa, 1.5);
  EXPECT_EQ(s.zeta_low, 0.5);
  const auto c = expand_preset(Preset::CDNES);
  EXPECT_EQ(c.trigger, "always");
  for (Preset p : {Preset::CDNES, Preset::ETCDNES1, Preset::ETCDNES2, Preset::SETCDNES}) {
    const auto a = expand_preset(p);
    EXPECT_EQ(a.compressor, "quantize");
    EXPECT_EQ(a.eta, 0.01);
    EXPECT_EQ(a.gamma, 0.5);
    EXPECT_EQ(a.alpha, 0.05);
  }
  const auto setne = expand_preset(Preset::SETNE);
  EXPECT_EQ(setne.compressor, "identity");
  EXPECT_EQ(setne.kappa, 1.075);
  EXPECT_EQ(setne.zeta_low, 0.05);
  EXPECT_NE(setne.description().find("uncompressed event-triggered baseline (approx.)"), std::string::npos);
  EXPECT_EQ(parse_preset("etc-dnes-2"), Preset::ETCDNES2);
  EXPECT_THROW(parse_preset("nope"), std::invalid_argument);
}

TEST(Config, ParsesAndRejects) {
  std::istringstream in("# comment\npresets = SETCDNES, ETNE\nseeds = 1,2\ntrigger.kappa = 1.7\n");
  const auto cfg = parse_config(in);
  ASSERT_EQ(cfg.presets.size(), 2u);
  ASSERT_EQ(cfg.seeds.size(), 2u);
  const auto algos = cfg.algorithms();
  EXPECT_EQ(algos[0].kappa, 1.7);
  std::istringstream bad("bogus.key = 1\n");
  EXPECT_THROW(parse_config(bad), std::invalid_argument);
  std::istringstream bad_value("eta = fast\n");
  EXPECT_THROW(parse_config(bad_value), std::invalid_argument);
  std::istringstream bad_preset("preset = XYZ\n");
  EXPECT_THROW(parse_config(bad_preset), std::invalid_argument);
}

TEST(Experiment, FanOutAndDeterminism) {
  ExperimentConfig cfg = small_config();
  cfg.presets = {"SETCDNES"};
  cfg.seeds = {1, 2};
  const auto dir_a = temp_dir("a"), dir_b = temp_dir("b");
  const auto paths = emit_outputs(run_experiment(cfg), dir_a);
  EXPECT_EQ(paths.size(), 5u);
  emit_outputs(run_experiment(cfg), dir_b);
  for (const auto& name : {"SETCDNES_seed1.csv", "SETCDNES_seed2.csv", "SETCDNES_seed1_triggers.csv", "summary.txt"}) {
    EXPECT_EQ(slurp(dir_a + "/" + name), slurp(dir_b + "/" + name)) << name;
  }
}

TEST(Experiment, AllPresetsFileCount) {
  ExperimentConfig cfg = small_config();
  for (Preset p : all_presets()) cfg.presets.push_back(preset_name(p));
  const auto res = run_experiment(cfg);
  const auto paths = emit_outputs(res, temp_dir("all"));
  EXPECT_EQ(paths.size(), 13u);
  EXPECT_FALSE(res.any_failed());
}

TEST(Experiment, UnreachedTargetIsMarked) {
  ExperimentConfig cfg = small_config();
  cfg.presets = {"CDNES"};
  cfg.iters = 5;
  const auto res = run_experiment(cfg);
  std::ostringstream s;
  write_experiment_summary(s, res);
  EXPECT_NE(s.str().find("not converged at K=5"), std::string::npos);
}

TEST(Experiment, DivergenceIsCaptured) {
  ExperimentConfig cfg = small_config();
  cfg.presets = {"ETNE"};
  cfg.algorithm_overrides["eta"] = "40";
  cfg.algorithm_overrides["gamma"] = "1";
  const auto res = run_experiment(cfg);
  ASSERT_TRUE(res.any_failed());
  EXPECT_GT(res.runs[0].failed_iteration, 0);
  std::ostringstream s;
  write_experiment_summary(s, res);
  EXPECT_NE(s.str().find("failure.ETNE.seed1"), std::string::npos);
}

TEST(Experiment, OutputErrorNamesPath) {
  ExperimentConfig cfg = small_config();
  cfg.presets = {"CDNES"};
  cfg.iters = 2;
  const auto res = run_experiment(cfg);
  const std::string blocker = temp_dir("blocker");
  std::ofstream(blocker) << "x";
  try {
    emit_outputs(res, blocker + "/sub");
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(blocker), std::string::npos);
  }
}
