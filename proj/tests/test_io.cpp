#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "uwhunt/checkpoint.hpp"
#include "uwhunt/csv_io.hpp"
#include "uwhunt/errors.hpp"

using namespace uwh;
namespace fs = std::filesystem;

TEST(FormatNumber, RoundTripsExactly) {
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.uniform_index(200)) - 100);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(INFINITY), "inf");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(TrajectoryCsv, RoundTripAndSchema) {
  std::vector<GameState> states(3);
  for (int k = 0; k < 3; ++k) {
    states[k].slot = k;
    states[k].pursuers = {{1.0 * k, 2.0}, {3.0, 0.1 * k}};
    states[k].target = {5.0, 1.0 / 3.0};
    states[k].headings = {0.1, 0.2, -0.3};
    states[k].velocities = {{1, 0, 0}, {0, 1, 0}, {0.5, 0.5, 0}};
  }
  const auto rows = trajectory_rows(7, states, {0.25, -1.0}, Outcome::Capture);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_TRUE(rows.back().terminated);
  EXPECT_FALSE(rows.front().terminated);
  std::ostringstream out;
  write_trajectory_csv(out, rows);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "episode,slot,agent_id,x,y,heading,speed,reward_step,terminated_flag");
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::istringstream in(text);
  const auto back = read_trajectory_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(back[k].agent_id, rows[k].agent_id);
    EXPECT_EQ(back[k].y, rows[k].y);
    EXPECT_EQ(back[k].speed, rows[k].speed);
    EXPECT_EQ(back[k].reward_step, rows[k].reward_step);
    EXPECT_EQ(back[k].terminated, rows[k].terminated);
  }
  std::ostringstream again;
  write_trajectory_csv(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(TrainingLog, RoundTrip) {
  std::vector<TrainingLogRow> rows{
      {0, -1.5, 100, Outcome::Escape, 0.9, std::nullopt, 0.0, {1.0, 2.0, INFINITY}},
      {1, 10.25, 40, Outcome::Capture, 0.9, 0.125, 3.5, {0.1 / 3, -2.0, 5.0}}};
  std::ostringstream out;
  write_training_log(out, rows);
  std::istringstream in(out.str());
  const auto back = read_training_log(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_FALSE(back[0].loss_mean.has_value());
  EXPECT_EQ(back[1].loss_mean, 0.125);
  EXPECT_EQ(back[0].payoffs, rows[0].payoffs);
  EXPECT_EQ(back[1].outcome, Outcome::Capture);
  std::ostringstream again;
  write_training_log(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(TrainingLog, MalformedRejected) {
  std::istringstream bad("episode,total_reward\n1,2\n");
  EXPECT_THROW(read_training_log(bad), std::exception);
}

TEST(ConsistencyCsv, RoundTrip) {
  const std::vector<ConsistencyRow> rows{{100, 0.5, {0.1, 0.2, 0.3}}, {101, 0.25, {0.0, -0.5, 1.0}}};
  std::ostringstream out;
  write_consistency_csv(out, rows, 3, {0.4, 0.3});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "episode_window_end,kappa,kappa_pair_0_1,kappa_pair_0_2,kappa_pair_1_2,kappa_smoothed");
  std::istringstream in(out.str());
  const auto back = read_consistency_csv(in);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].pairs, rows[1].pairs);
  EXPECT_EQ(back.smoothed, (std::vector<double>{0.4, 0.3}));
}

TEST(CurveCsv, RoundTrip) {
  const std::vector<CurveRow> rows{{0, 1, 2, 3, 4, 1, 0.5}, {1, -1, 0.1, 7, 8, 0, 0.25}};
  std::ostringstream out;
  write_curve_csv(out, rows);
  std::istringstream in(out.str());
  const auto back = read_curve_csv(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].reward_smoothed, 0.1);
  EXPECT_EQ(back[0].capture_smoothed, 0.5);
}

TEST(Files, AtomicWriteAndRead) {
  const fs::path dir = fs::temp_directory_path() / "uwhunt_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_file(dir / "a.txt", "hello\n");
  EXPECT_EQ(read_file(dir / "a.txt"), "hello\n");
  EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
  EXPECT_THROW(read_file(dir / "missing.txt"), std::exception);
  fs::remove_all(dir);
}

TEST(Checkpoint, RoundTripRestoresLearner) {
  ScenarioConfig cfg;
  cfg.dqn.hidden_sizes = {8, 8};
  cfg.dqn.batch_size = 8;
  TrainingRun run = start_training(cfg);
  Rng fill(3);
  for (int k = 0; k < 32; ++k)
    run.learner.replay.push({Observation::Constant(0.1 * (k % 5)), static_cast<int>(fill.uniform_index(21)),
                             fill.uniform(), Observation::Constant(-0.05 * (k % 3)), false});
  for (int k = 0; k < 5; ++k) train_step(run.learner, cfg.dqn, run.learner.replay_rng);

  const Checkpoint ckpt = make_checkpoint(cfg, run.learner, 17);
  const std::string bytes = encode_checkpoint(ckpt);
  const Checkpoint back = decode_checkpoint(bytes);
  EXPECT_EQ(back.episodes_done, 17);
  EXPECT_EQ(config_hash(back.config), config_hash(cfg));
  EXPECT_EQ(encode_checkpoint(back), bytes);

  const Learner restored = restore_learner(back);
  EXPECT_TRUE(restored.online == run.learner.online);
  EXPECT_TRUE(restored.target == run.learner.target);
  EXPECT_TRUE(restored.replay_rng == run.learner.replay_rng);
  EXPECT_EQ(restored.gradient_steps, run.learner.gradient_steps);
  EXPECT_EQ(restored.optimizer.first_moment(), run.learner.optimizer.first_moment());
  EXPECT_TRUE(restore_policy(back) == run.learner.online);
}

TEST(Checkpoint, CorruptInputRejected) {
  ScenarioConfig cfg;
  cfg.dqn.hidden_sizes = {4, 4};
  const TrainingRun run = start_training(cfg);
  std::string bytes = encode_checkpoint(make_checkpoint(cfg, run.learner, 0));
  EXPECT_THROW(decode_checkpoint(bytes.substr(0, bytes.size() / 2)), DomainError);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bad_magic), DomainError);
  std::string bad_version = bytes;
  bad_version[4] = static_cast<char>(99);
  EXPECT_THROW(decode_checkpoint(bad_version), DomainError);
}
