#include "uwhunt/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "uwhunt/errors.hpp"

namespace uwh {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& column, int line) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw DomainError("csv line " + std::to_string(line) + ", column " + column +
                      ": not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& column, int line) {
  const double v = parse_double(text, column, line);
  if (v != std::floor(v))
    throw DomainError("csv line " + std::to_string(line) + ", column " + column +
                      ": not an integer: '" + text + "'");
  return static_cast<int>(v);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw DomainError("csv: missing header row");
  t.header = split(line);
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != t.header.size())
      throw DomainError("csv line " + std::to_string(n) + ": expected " +
                        std::to_string(t.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  return t;
}

void expect_prefix(const Table& t, const std::vector<std::string>& names) {
  if (t.header.size() < names.size())
    throw DomainError("csv: header has too few columns");
  for (std::size_t i = 0; i < names.size(); ++i)
    if (t.header[i] != names[i])
      throw DomainError("csv: expected column '" + names[i] + "' at position " +
                        std::to_string(i) + ", found '" + t.header[i] + "'");
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<TrajectoryRow> trajectory_rows(int episode, const std::vector<GameState>& states,
                                           const std::vector<double>& step_rewards,
                                           Outcome outcome) {
  std::vector<TrajectoryRow> rows;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const GameState& s = states[k];
    const int m = s.num_pursuers();
    const bool last = k + 1 == states.size();
    const double reward = (k > 0 && k - 1 < step_rewards.size()) ? step_rewards[k - 1] : 0.0;
    for (int a = 0; a <= m; ++a) {
      TrajectoryRow r;
      r.episode = episode;
      r.slot = s.slot;
      r.agent_id = a;
      const Vec2 p = a < m ? s.pursuers[a] : s.target;
      r.x = p.x();
      r.y = p.y();
      r.heading = a < static_cast<int>(s.headings.size()) ? s.headings[a] : 0.0;
      r.speed = a < static_cast<int>(s.velocities.size()) ? s.velocities[a].norm() : 0.0;
      r.reward_step = reward;
      r.terminated = last && outcome != Outcome::Continue;
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<GameState> trajectory_states(const Trajectory& traj) {
  std::vector<GameState> out;
  for (const auto& step : traj.steps) out.push_back(step.state);
  out.push_back(traj.final_state);
  return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  out << "episode,slot,agent_id,x,y,heading,speed,reward_step,terminated_flag\n";
  for (const auto& r : rows)
    out << r.episode << ',' << r.slot << ',' << r.agent_id << ',' << format_number(r.x) << ','
        << format_number(r.y) << ',' << format_number(r.heading) << ','
        << format_number(r.speed) << ',' << format_number(r.reward_step) << ','
        << (r.terminated ? 1 : 0) << '\n';
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  const Table t = read_table(in);
  expect_prefix(t, {"episode", "slot", "agent_id", "x", "y", "heading", "speed", "reward_step",
                    "terminated_flag"});
  std::vector<TrajectoryRow> rows;
  int line = 1;
  for (const auto& f : t.rows) {
    ++line;
    TrajectoryRow r;
    r.episode = parse_int(f[0], "episode", line);
    r.slot = parse_int(f[1], "slot", line);
    r.agent_id = parse_int(f[2], "agent_id", line);
    r.x = parse_double(f[3], "x", line);
    r.y = parse_double(f[4], "y", line);
    r.heading = parse_double(f[5], "heading", line);
    r.speed = parse_double(f[6], "speed", line);
    r.reward_step = parse_double(f[7], "reward_step", line);
    r.terminated = parse_int(f[8], "terminated_flag", line) != 0;
    rows.push_back(r);
  }
  return rows;
}

void write_training_log(std::ostream& out, const std::vector<TrainingLogRow>& rows) {
  const std::size_t m = rows.empty() ? 0 : rows.front().payoffs.size();
  out << "episode,total_reward,steps,outcome,epsilon,loss_mean,delay_mean_slots";
  for (std::size_t i = 0; i < m; ++i) out << ",payoff_" << i;
  out << '\n';
  for (const auto& r : rows) {
    if (r.payoffs.size() != m) throw DomainError("write_training_log: ragged payoff columns");
    out << r.episode << ',' << format_number(r.total_reward) << ',' << r.steps << ','
        << to_string(r.outcome) << ',' << format_number(r.epsilon) << ','
        << (r.loss_mean ? format_number(*r.loss_mean) : std::string()) << ','
        << format_number(r.delay_mean_slots);
    for (double p : r.payoffs) out << ',' << format_number(p);
    out << '\n';
  }
}

std::vector<TrainingLogRow> read_training_log(std::istream& in) {
  const Table t = read_table(in);
  expect_prefix(t, {"episode", "total_reward", "steps", "outcome", "epsilon", "loss_mean",
                    "delay_mean_slots"});
  for (std::size_t c = 7; c < t.header.size(); ++c)
    if (t.header[c] != "payoff_" + std::to_string(c - 7))
      throw DomainError("training log: unexpected column '" + t.header[c] + "'");
  std::vector<TrainingLogRow> rows;
  int line = 1;
  for (const auto& f : t.rows) {
    ++line;
    TrainingLogRow r;
    r.episode = parse_int(f[0], "episode", line);
    r.total_reward = parse_double(f[1], "total_reward", line);
    r.steps = parse_int(f[2], "steps", line);
    const auto outcome = outcome_from_string(f[3]);
    if (!outcome) throw DomainError("training log line " + std::to_string(line) + ": bad outcome '" + f[3] + "'");
    r.outcome = *outcome;
    r.epsilon = parse_double(f[4], "epsilon", line);
    if (!f[5].empty()) r.loss_mean = parse_double(f[5], "loss_mean", line);
    r.delay_mean_slots = parse_double(f[6], "delay_mean_slots", line);
    for (std::size_t c = 7; c < f.size(); ++c) r.payoffs.push_back(parse_double(f[c], t.header[c], line));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_consistency_csv(std::ostream& out, const std::vector<ConsistencyRow>& rows,
                           int num_pursuers, const std::vector<double>& smoothed) {
  if (smoothed.size() != rows.size())
    throw DomainError("write_consistency_csv: smoothed column length differs");
  out << "episode_window_end,kappa";
  for (int i = 0; i < num_pursuers; ++i)
    for (int j = i + 1; j < num_pursuers; ++j) out << ",kappa_pair_" << i << '_' << j;
  out << ",kappa_smoothed\n";
  const std::size_t pairs = static_cast<std::size_t>(num_pursuers * (num_pursuers - 1) / 2);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.pairs.size() != pairs) throw DomainError("write_consistency_csv: wrong pair count");
    out << r.window_end << ',' << format_number(r.kappa);
    for (double p : r.pairs) out << ',' << format_number(p);
    out << ',' << format_number(smoothed[k]) << '\n';
  }
}

ConsistencyTable read_consistency_csv(std::istream& in) {
  const Table t = read_table(in);
  expect_prefix(t, {"episode_window_end", "kappa"});
  if (t.header.size() < 4 || t.header.back() != "kappa_smoothed")
    throw DomainError("consistency csv: missing kappa_smoothed column");
  ConsistencyTable out;
  int line = 1;
  for (const auto& f : t.rows) {
    ++line;
    ConsistencyRow r;
    r.window_end = parse_int(f[0], "episode_window_end", line);
    r.kappa = parse_double(f[1], "kappa", line);
    for (std::size_t c = 2; c + 1 < f.size(); ++c) r.pairs.push_back(parse_double(f[c], t.header[c], line));
    out.smoothed.push_back(parse_double(f.back(), "kappa_smoothed", line));
    out.rows.push_back(std::move(r));
  }
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "episode,total_reward,total_reward_smoothed,steps,steps_smoothed,capture,capture_smoothed\n";
  for (const auto& r : rows)
    out << r.episode << ',' << format_number(r.total_reward) << ','
        << format_number(r.reward_smoothed) << ',' << format_number(r.steps) << ','
        << format_number(r.steps_smoothed) << ',' << format_number(r.capture) << ','
        << format_number(r.capture_smoothed) << '\n';
}

std::vector<CurveRow> read_curve_csv(std::istream& in) {
  const Table t = read_table(in);
  expect_prefix(t, {"episode", "total_reward", "total_reward_smoothed", "steps", "steps_smoothed",
                    "capture", "capture_smoothed"});
  std::vector<CurveRow> rows;
  int line = 1;
  for (const auto& f : t.rows) {
    ++line;
    rows.push_back({parse_int(f[0], "episode", line), parse_double(f[1], "total_reward", line),
                    parse_double(f[2], "total_reward_smoothed", line),
                    parse_double(f[3], "steps", line), parse_double(f[4], "steps_smoothed", line),
                    parse_double(f[5], "capture", line),
                    parse_double(f[6], "capture_smoothed", line)});
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace uwh
