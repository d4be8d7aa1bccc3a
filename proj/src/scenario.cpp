#include "uwhunt/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "uwhunt/analytic.hpp"
#include "uwhunt/checkpoint.hpp"
#include "uwhunt/csv_io.hpp"
#include "uwhunt/dqn.hpp"
#include "uwhunt/errors.hpp"
#include "uwhunt/metrics.hpp"
#include "uwhunt/parallel.hpp"

namespace uwh {

namespace fs = std::filesystem;

std::optional<Command> command_from_string(std::string_view text) {
  if (text == "simulate") return Command::Simulate;
  if (text == "train") return Command::Train;
  if (text == "eval") return Command::Eval;
  if (text == "analyze") return Command::Analyze;
  return std::nullopt;
}

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Simulate: return "simulate";
    case Command::Train: return "train";
    case Command::Eval: return "eval";
    case Command::Analyze: return "analyze";
  }
  return "?";
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["status"] = m.status;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["config_source"] = m.config_source;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["outputs"] = m.outputs;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.summary) summary[k] = v;
  j["summary"] = summary;
  if (!m.error.empty()) j["error"] = m.error;
  return j.dump(2) + "\n";
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Outputs {
 public:
  Outputs(fs::path dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {}

  void write(const std::string& name, const std::string& content) {
    write_file(dir_ / name, content);
    if (std::find(manifest_.outputs.begin(), manifest_.outputs.end(), name) == manifest_.outputs.end())
      manifest_.outputs.push_back(name);
  }
  void write_binary_checkpoint(const std::string& name, const Checkpoint& ckpt) {
    write(name, encode_checkpoint(ckpt));
  }
  void remove_all() {
    for (const auto& name : manifest_.outputs) {
      std::error_code ec;
      fs::remove(dir_ / name, ec);
    }
    manifest_.outputs.clear();
  }

 private:
  fs::path dir_;
  RunManifest& manifest_;
};

void summarize(RunManifest& m, const std::string& key, double value) {
  m.summary.emplace_back(key, format_number(value));
}

std::string outcomes_header(int m) {
  std::string h = "episode,outcome,steps,system_payoff";
  for (int i = 0; i < m; ++i) h += ",payoff_" + std::to_string(i);
  return h;
}

void run_simulate(const ScenarioConfig& config, const RunOptions& opt, Outputs& out, RunManifest& man) {
  const int episodes = opt.episodes.value_or(1);
  ClosedLoopOptions clo;
  clo.analytic_evader = opt.analytic_evader;
  clo.verbose = opt.verbose;
  const auto results = closed_loop_batch(config, episodes, clo);

  std::ostringstream traj, outcomes;
  std::vector<TrajectoryRow> rows;
  outcomes << outcomes_header(config.num_pursuers) << ",aborted\n";
  int captures = 0;
  for (int e = 0; e < episodes; ++e) {
    const auto& r = results[e];
    const auto part = trajectory_rows(e, r.states, {}, r.outcome.kind);
    rows.insert(rows.end(), part.begin(), part.end());
    outcomes << e << ',' << to_string(r.outcome.kind) << ',' << r.trajectory.steps.size() << ','
             << format_number(r.outcome.system_payoff);
    for (double p : r.outcome.per_pursuer_payoff) outcomes << ',' << format_number(p);
    outcomes << ',' << (r.aborted ? 1 : 0) << '\n';
    captures += r.outcome.kind == Outcome::Capture;
  }
  write_trajectory_csv(traj, rows);
  out.write("trajectory.csv", traj.str());
  out.write("outcomes.csv", outcomes.str());
  if (opt.verbose) {
    std::ostringstream diag;
    diag << "episode,slot,gain_norm_pursuers,gain_norm_evader,hamiltonian,hjb_residual\n";
    for (int e = 0; e < episodes; ++e)
      for (const auto& d : results[e].diagnostics)
        diag << e << ',' << d.slot << ',' << format_number(d.gain_norm_pursuers) << ','
             << format_number(d.gain_norm_evader) << ',' << format_number(d.hamiltonian) << ','
             << format_number(d.hjb_residual) << '\n';
    out.write("diagnostics.csv", diag.str());
  }
  summarize(man, "episodes", episodes);
  summarize(man, "capture_rate", episodes > 0 ? static_cast<double>(captures) / episodes : 0.0);
}

void run_train(const ScenarioConfig& config, const RunOptions& opt, Outputs& out, RunManifest& man) {
  const int episodes = opt.episodes.value_or(config.dqn.episodes);
  TrainingRun run = start_training(config);
  int done = 0;
  while (done < episodes) {
    const int chunk = opt.checkpoint_every > 0 ? std::min(opt.checkpoint_every, episodes - done)
                                               : episodes - done;
    continue_training(config, run, done, chunk);
    done += chunk;
    out.write_binary_checkpoint("checkpoint.bin", make_checkpoint(config, run.learner, done));
  }
  std::ostringstream log;
  write_training_log(log, run.log);
  out.write("training_log.csv", log.str());
  int captures = 0;
  for (const auto& row : run.log) captures += row.outcome == Outcome::Capture;
  summarize(man, "episodes", episodes);
  summarize(man, "capture_rate", episodes > 0 ? static_cast<double>(captures) / episodes : 0.0);
  summarize(man, "gradient_steps", static_cast<double>(run.learner.gradient_steps));
}

void run_eval(const ScenarioConfig& config, const fs::path& dir, const RunOptions& opt, Outputs& out,
              RunManifest& man) {
  const fs::path ckpt_path = opt.checkpoint.value_or(dir / "checkpoint.bin");
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const Mlp policy = restore_policy(ckpt);
  const int episodes = opt.episodes.value_or(100);
  const auto results = evaluate_policy(config, policy, episodes, opt.eval_epsilon, true);

  std::ostringstream traj, outcomes;
  std::vector<TrajectoryRow> rows;
  outcomes << outcomes_header(config.num_pursuers) << ",total_reward,delay_mean_slots\n";
  int captures = 0;
  for (int e = 0; e < episodes; ++e) {
    const auto& r = results[e];
    const auto part = trajectory_rows(e, trajectory_states(r.trajectory), r.step_rewards, r.outcome.kind);
    rows.insert(rows.end(), part.begin(), part.end());
    outcomes << e << ',' << to_string(r.outcome.kind) << ',' << r.steps << ','
             << format_number(r.outcome.system_payoff);
    for (double p : r.outcome.per_pursuer_payoff) outcomes << ',' << format_number(p);
    outcomes << ',' << format_number(r.total_reward) << ',' << format_number(r.delay_mean_slots)
             << '\n';
    captures += r.outcome.kind == Outcome::Capture;
  }
  write_trajectory_csv(traj, rows);
  out.write("eval_trajectory.csv", traj.str());
  out.write("eval_outcomes.csv", outcomes.str());
  summarize(man, "episodes", episodes);
  summarize(man, "capture_rate", episodes > 0 ? static_cast<double>(captures) / episodes : 0.0);
  man.summary.emplace_back("checkpoint", ckpt_path.string());
}

void run_analyze(const ScenarioConfig& config, const fs::path& dir, const RunOptions& opt,
                 Outputs& out, RunManifest& man) {
  const fs::path log_path = opt.training_log.value_or(dir / "training_log.csv");
  std::istringstream in(read_file(log_path));
  const auto log = read_training_log(in);
  if (log.empty()) throw DomainError("analyze: training log has no rows");
  const int m = static_cast<int>(log.front().payoffs.size());
  if (m < 2) throw DomainError("analyze: training log needs at least two payoff columns");

  std::vector<std::vector<double>> series(static_cast<std::size_t>(m));
  std::vector<double> reward, steps, capture;
  for (const auto& row : log) {
    for (int i = 0; i < m; ++i) series[i].push_back(row.payoffs[i]);
    reward.push_back(row.total_reward);
    steps.push_back(row.steps);
    capture.push_back(row.outcome == Outcome::Capture ? 1.0 : 0.0);
  }

  const int window = config.smoothing_window;
  std::ostringstream curves;
  const auto rs = smooth_curve(reward, window);
  const auto ss = smooth_curve(steps, window);
  const auto cs = smooth_curve(capture, window);
  std::vector<CurveRow> curve_rows;
  for (std::size_t k = 0; k < log.size(); ++k)
    curve_rows.push_back({log[k].episode, reward[k], rs[k], steps[k], ss[k], capture[k], cs[k]});
  write_curve_csv(curves, curve_rows);
  out.write("curves.csv", curves.str());

  std::ostringstream cons;
  const auto rows = log.size() >= 2
                        ? windowed_consistency(series, config.kendall_window, 1,
                                               config.kendall_pair_normalized)
                        : std::vector<ConsistencyRow>{};
  std::vector<double> kappa;
  for (const auto& r : rows) kappa.push_back(r.kappa);
  write_consistency_csv(cons, rows, m, smooth_curve(kappa, window));
  out.write("consistency.csv", cons.str());
  summarize(man, "episodes", static_cast<double>(log.size()));
  if (!rows.empty()) summarize(man, "final_kappa", rows.back().kappa);
}

}  // namespace

RunManifest run(Command command, const ScenarioConfig& config, const fs::path& output_dir,
                const RunOptions& options) {
  config.validate();
  fs::create_directories(output_dir);
  RunManifest man;
  man.command = std::string(to_string(command));
  man.config_hash = config_hash(config);
  man.seed = config.seed;
  man.version = UWHUNT_VERSION;
  man.config_source = options.config_source;
  man.started_at = utc_now();
  man.status = "running";
  write_file(output_dir / kManifestName, manifest_json(man));

  Outputs out(output_dir, man);
  try {
    out.write("config.toml", to_toml(config));
    switch (command) {
      case Command::Simulate: run_simulate(config, options, out, man); break;
      case Command::Train: run_train(config, options, out, man); break;
      case Command::Eval: run_eval(config, output_dir, options, out, man); break;
      case Command::Analyze: run_analyze(config, output_dir, options, out, man); break;
    }
  } catch (const std::exception& e) {
    out.remove_all();
    man.status = "failed";
    man.error = e.what();
    man.finished_at = utc_now();
    write_file(output_dir / kManifestName, manifest_json(man));
    throw;
  }
  man.status = "complete";
  man.finished_at = utc_now();
  write_file(output_dir / kManifestName, manifest_json(man));
  return man;
}

}  // namespace uwh
