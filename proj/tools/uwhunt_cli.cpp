#include <CLI11.hpp>
#include <iostream>

#include "uwhunt/config.hpp"
#include "uwhunt/errors.hpp"
#include "uwhunt/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-vehicle underwater target hunting: simulation, training and analysis"};
  app.set_version_flag("--version", std::string(UWHUNT_VERSION));

  std::string command;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> delay;
  std::optional<double> disturbance;
  std::optional<int> episodes;
  bool strict_escape = false;
  std::optional<std::string> checkpoint;
  std::optional<std::string> log;
  std::string evader = "analytic";
  double eval_epsilon = 1.0;
  int checkpoint_every = 0;
  bool verbose = false;

  app.add_option("command", command, "simulate | train | eval | analyze")
      ->required()
      ->check(CLI::IsMember({"simulate", "train", "eval", "analyze"}));
  app.add_option("--config", config_path, "scenario file (TOML); defaults apply when omitted")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--seed", seed, "run seed (overrides the config)");
  app.add_option("--delay", delay, "acoustic delay on|off")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--disturbance", disturbance, "disturbance bound, m/s^2")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--episodes", episodes, "episode count")->check(CLI::PositiveNumber);
  app.add_flag("--strict-escape", strict_escape, "escape as soon as any pursuer loses the target");
  app.add_option("--checkpoint", checkpoint, "eval: checkpoint file (default <out>/checkpoint.bin)");
  app.add_option("--log", log, "analyze: training log (default <out>/training_log.csv)");
  app.add_option("--evader", evader, "simulate: evader strategy")
      ->check(CLI::IsMember({"analytic", "flee"}));
  app.add_option("--greedy", eval_epsilon, "eval: probability of the greedy action")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--checkpoint-every", checkpoint_every, "train: checkpoint interval in episodes")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--verbose", verbose, "simulate: write per-slot solver diagnostics");

  CLI11_PARSE(app, argc, argv);

  try {
    uwh::ScenarioConfig config =
        config_path.empty() ? uwh::ScenarioConfig{} : uwh::load_config(config_path);
    if (seed) config.seed = *seed;
    if (delay) config.delay_mode = *delay == "on" ? uwh::DelayMode::Acoustic : uwh::DelayMode::Off;
    if (disturbance) config.disturbance_bound = *disturbance;
    if (strict_escape) config.termination.strict_escape = true;
    config.validate();

    uwh::RunOptions opts;
    opts.episodes = episodes;
    if (checkpoint) opts.checkpoint = *checkpoint;
    if (log) opts.training_log = *log;
    opts.analytic_evader = evader == "analytic";
    opts.eval_epsilon = eval_epsilon;
    opts.checkpoint_every = checkpoint_every;
    opts.verbose = verbose;
    opts.config_source = config_path.empty() ? "<defaults>" : config_path;

    const auto manifest = uwh::run(*uwh::command_from_string(command), config, out_dir, opts);
    std::cout << manifest.command << ": " << manifest.status << " (config " << manifest.config_hash
              << ", seed " << manifest.seed << ")\n";
    for (const auto& [k, v] : manifest.summary) std::cout << "  " << k << " = " << v << '\n';
    for (const auto& f : manifest.outputs) std::cout << "  wrote " << f << '\n';
    return 0;
  } catch (const uwh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
