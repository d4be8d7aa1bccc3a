#include "uwhunt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "uwhunt/errors.hpp"

namespace uwh {

void DqnHyperparams::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("dqn.learning_rate: must be > 0");
  if (episodes < 1) throw ConfigError("dqn.episodes: must be >= 1");
  if (!(discount >= 0.0 && discount <= 1.0)) throw ConfigError("dqn.discount: must be in [0, 1]");
  if (batch_size < 1) throw ConfigError("dqn.batch_size: must be >= 1");
  if (memory_capacity < batch_size)
    throw ConfigError("dqn.memory_capacity must be >= dqn.batch_size");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("dqn.epsilon: must be in [0, 1]");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0))
    throw ConfigError("dqn.epsilon_start: must be in [0, 1]");
  if (target_sync_interval < 1) throw ConfigError("dqn.target_sync_interval: must be >= 1");
  if (hidden_sizes.size() != 2) throw ConfigError("dqn.hidden_sizes: need exactly two layers");
  for (int h : hidden_sizes)
    if (h < 1) throw ConfigError("dqn.hidden_sizes: sizes must be >= 1");
  if (warmup_slots < 0) throw ConfigError("dqn.warmup_slots: must be >= 0");
  if (heading_bins < 2) throw ConfigError("dqn.heading_bins: must be >= 2");
  if (!(reward_floor > 0.0)) throw ConfigError("dqn.reward_floor: must be > 0");
  if (!std::isfinite(progress_weight) || progress_weight < 0.0)
    throw ConfigError("dqn.progress_weight: must be finite and >= 0");
  if (anneal_episodes < 1) throw ConfigError("dqn.anneal_episodes: must be >= 1");
  if (train_interval < 1) throw ConfigError("dqn.train_interval: must be >= 1");
}

double DqnHyperparams::epsilon_at(int episode) const {
  if (!epsilon_anneal) return epsilon;
  const double frac = std::min(1.0, static_cast<double>(episode) / anneal_episodes);
  return epsilon_start + (epsilon - epsilon_start) * frac;
}

PayoffWeights ScenarioConfig::weights() const {
  return PayoffWeights::uniform(num_pursuers, alpha_d, beta_c, constraint_c);
}

void ScenarioConfig::validate() const {
  if (num_pursuers < 2) throw ConfigError("scenario.num_pursuers: must be >= 2");
  if (!(initial_distance > 0.0)) throw ConfigError("scenario.initial_distance: must be > 0");
  if (!(slot_seconds > 0.0)) throw ConfigError("scenario.slot_seconds: must be > 0");
  termination.validate();
  if (!(initial_distance > termination.attack_radius))
    throw ConfigError("scenario.initial_distance must exceed game.attack_radius");
  if (!(speed.pursuer > 0.0)) throw ConfigError("vehicles.max_speed_pursuer_knots: must be > 0");
  if (!(speed.evader > 0.0)) throw ConfigError("vehicles.max_speed_target_knots: must be > 0");
  if (!(accel.pursuer > 0.0)) throw ConfigError("vehicles.accel_pursuer_knots_per_s: must be > 0");
  if (!(accel.evader > 0.0)) throw ConfigError("vehicles.accel_target_knots_per_s: must be > 0");
  if (!(accel.pursuer > accel.evader))
    throw ConfigError(
        "vehicles.accel_pursuer_knots_per_s must exceed vehicles.accel_target_knots_per_s");
  if (!(pursuer_heading.lo < pursuer_heading.hi && pursuer_heading.lo >= -kPi &&
        pursuer_heading.hi <= kPi))
    throw ConfigError("vehicles.heading_range_pursuer: need lo < hi within [-pi, pi]");
  if (!(evader_heading.lo < evader_heading.hi && evader_heading.lo >= -kPi - 1e-12 &&
        evader_heading.hi <= kPi + 1e-12))
    throw ConfigError("vehicles.heading_range_target: need lo < hi within [-pi, pi]");
  if (!(initial_speed_pursuer >= 0.0 && initial_speed_pursuer <= speed.pursuer))
    throw ConfigError("vehicles.initial_speed_pursuer_knots: must be in [0, V1]");
  if (!(initial_speed_target >= 0.0 && initial_speed_target <= speed.evader))
    throw ConfigError("vehicles.initial_speed_target_knots: must be in [0, V2]");
  vehicle.validate();
  if (!(disturbance_bound >= 0.0)) throw ConfigError("vehicles.disturbance_bound: must be >= 0");
  weights().validate(num_pursuers);
  try {
    water.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(sound_speed(water) > speed.pursuer && sound_speed(water) > speed.evader))
    throw ConfigError("acoustics: sound speed must exceed every vehicle speed cap");
  if (!(delay_scale >= 0.0)) throw ConfigError("acoustics.delay_scale: must be >= 0");
  if (!(length_scale > 0.0)) throw ConfigError("analytic.length_scale: must be > 0");
  if (!(riccati_step > 0.0)) throw ConfigError("analytic.riccati_step: must be > 0");
  if (!(lookahead >= 0.0)) throw ConfigError("analytic.lookahead: must be >= 0");
  dqn.validate();
  if (smoothing_window < 1 || smoothing_window % 2 == 0)
    throw ConfigError("metrics.smoothing_window: must be odd and >= 1");
  if (kendall_window < 2) throw ConfigError("metrics.kendall_window: must be >= 2");
}

std::string_view to_string(DelayMode mode) { return mode == DelayMode::Off ? "off" : "acoustic"; }

// ---------------------------------------------------------------------------
// TOML subset: [table] headers, key = value, numbers, booleans, strings and
// flat arrays. Enough for the configuration schema, nothing more.

namespace {

struct Value {
  enum class Kind { Number, Bool, String, Array } kind = Kind::Number;
  double number = 0.0;
  bool integer = false;
  bool boolean = false;
  std::string text;
  std::vector<Value> items;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  std::map<std::string, Value> parse() {
    std::map<std::string, Value> out;
    std::string table;
    while (true) {
      skip_blank_lines();
      if (pos_ >= text_.size()) break;
      if (peek() == '[') {
        ++pos_;
        skip_ws();
        table = read_key();
        skip_ws();
        expect(']');
        end_of_line();
        continue;
      }
      const std::string key = read_key();
      skip_ws();
      expect('=');
      skip_ws();
      Value v = read_value();
      end_of_line();
      const std::string full = table.empty() ? key : table + "." + key;
      if (!out.emplace(full, std::move(v)).second) fail("duplicate key '" + full + "'");
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line()) + ": " + msg);
  }
  int line() const {
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos_), '\n'));
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }
  void skip_blank_lines() {
    while (pos_ < text_.size()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (pos_ < text_.size() && peek() != '\n') fail("unexpected trailing characters");
    if (pos_ < text_.size()) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string read_key() {
    std::string key;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
        key += c;
        ++pos_;
      } else {
        break;
      }
    }
    if (key.empty()) fail("expected a key");
    return key;
  }
  Value read_value() {
    Value v;
    const char c = peek();
    if (c == '"') {
      ++pos_;
      v.kind = Value::Kind::String;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') fail("unterminated string");
        v.text += text_[pos_++];
      }
      expect('"');
    } else if (c == '[') {
      ++pos_;
      v.kind = Value::Kind::Array;
      skip_array_ws();
      while (peek() != ']') {
        v.items.push_back(read_value());
        skip_array_ws();
        if (peek() == ',') {
          ++pos_;
          skip_array_ws();
        } else if (peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      ++pos_;
    } else if (text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      v.kind = Value::Kind::Bool;
      v.boolean = true;
    } else if (text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      v.kind = Value::Kind::Bool;
    } else {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '+' || text_[pos_] == '-' ||
                                     text_[pos_] == '.' || text_[pos_] == '_'))
        ++pos_;
      std::string token = text_.substr(start, pos_ - start);
      std::erase(token, '_');
      if (token.empty()) fail("expected a value");
      char* end = nullptr;
      v.number = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) fail("malformed number '" + token + "'");
      v.integer = token.find_first_of(".eE") == std::string::npos;
    }
    return v;
  }
  void skip_array_ws() {
    while (pos_ < text_.size()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

double as_number(const std::string& key, const Value& v) {
  if (v.kind != Value::Kind::Number) throw ConfigError(key + ": expected a number");
  if (!std::isfinite(v.number)) throw ConfigError(key + ": must be finite");
  return v.number;
}

int as_int(const std::string& key, const Value& v) {
  const double x = as_number(key, v);
  if (!v.integer || x != std::floor(x)) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(x);
}

bool as_bool(const std::string& key, const Value& v) {
  if (v.kind != Value::Kind::Bool) throw ConfigError(key + ": expected true or false");
  return v.boolean;
}

std::vector<double> as_numbers(const std::string& key, const Value& v, std::size_t n) {
  if (v.kind != Value::Kind::Array || v.items.size() != n)
    throw ConfigError(key + ": expected an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(as_number(key, item));
  return out;
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&, const Value&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename Member>
Field number_field(std::string key, Member member, double scale = 1.0) {
  return {std::move(key),
          [member, scale](ScenarioConfig& c, const std::string& k, const Value& v) {
            member(c) = as_number(k, v) * scale;
          },
          [member, scale](const ScenarioConfig& c) {
            return fmt_double(member(const_cast<ScenarioConfig&>(c)) / scale);
          }};
}

template <typename Member>
Field int_field(std::string key, Member member) {
  return {std::move(key),
          [member](ScenarioConfig& c, const std::string& k, const Value& v) {
            member(c) = as_int(k, v);
          },
          [member](const ScenarioConfig& c) {
            return std::to_string(member(const_cast<ScenarioConfig&>(c)));
          }};
}

template <typename Member>
Field bool_field(std::string key, Member member) {
  return {std::move(key),
          [member](ScenarioConfig& c, const std::string& k, const Value& v) {
            member(c) = as_bool(k, v);
          },
          [member](const ScenarioConfig& c) {
            return std::string(member(const_cast<ScenarioConfig&>(c)) ? "true" : "false");
          }};
}

template <typename Member>
Field vec3_field(std::string key, Member member) {
  return {std::move(key),
          [member](ScenarioConfig& c, const std::string& k, const Value& v) {
            const auto xs = as_numbers(k, v, 3);
            member(c) = Eigen::Vector3d(xs[0], xs[1], xs[2]);
          },
          [member](const ScenarioConfig& c) {
            const Eigen::Vector3d& x = member(const_cast<ScenarioConfig&>(c));
            return "[" + fmt_double(x[0]) + ", " + fmt_double(x[1]) + ", " + fmt_double(x[2]) +
                   "]";
          }};
}

template <typename Member>
Field range_field(std::string key, Member member) {
  return {std::move(key),
          [member](ScenarioConfig& c, const std::string& k, const Value& v) {
            const auto xs = as_numbers(k, v, 2);
            member(c) = HeadingRange{xs[0], xs[1]};
          },
          [member](const ScenarioConfig& c) {
            const HeadingRange& r = member(const_cast<ScenarioConfig&>(c));
            return "[" + fmt_double(r.lo) + ", " + fmt_double(r.hi) + "]";
          }};
}

#define UWH_M(expr) [](ScenarioConfig& c) -> auto& { return expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"seed",
                 [](ScenarioConfig& c, const std::string& k, const Value& v) {
                   const double x = as_number(k, v);
                   if (!v.integer || x < 0) throw ConfigError(k + ": expected a non-negative integer");
                   c.seed = static_cast<std::uint64_t>(x);
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.seed); }});
    f.push_back(vec3_field("scenario.start_point", UWH_M(c.start_point)));
    f.push_back(int_field("scenario.num_pursuers", UWH_M(c.num_pursuers)));
    f.push_back(number_field("scenario.initial_distance", UWH_M(c.initial_distance)));
    f.push_back(number_field("scenario.slot_seconds", UWH_M(c.slot_seconds)));
    f.push_back(int_field("scenario.max_slots", UWH_M(c.termination.horizon)));

    f.push_back(number_field("vehicles.max_speed_pursuer_knots", UWH_M(c.speed.pursuer), kKnot));
    f.push_back(number_field("vehicles.max_speed_target_knots", UWH_M(c.speed.evader), kKnot));
    f.push_back(number_field("vehicles.accel_pursuer_knots_per_s", UWH_M(c.accel.pursuer), kKnot));
    f.push_back(number_field("vehicles.accel_target_knots_per_s", UWH_M(c.accel.evader), kKnot));
    f.push_back(range_field("vehicles.heading_range_pursuer", UWH_M(c.pursuer_heading)));
    f.push_back(range_field("vehicles.heading_range_target", UWH_M(c.evader_heading)));
    f.push_back(number_field("vehicles.initial_speed_pursuer_knots",
                             UWH_M(c.initial_speed_pursuer), kKnot));
    f.push_back(number_field("vehicles.initial_speed_target_knots",
                             UWH_M(c.initial_speed_target), kKnot));
    f.push_back(vec3_field("vehicles.inertia", UWH_M(c.vehicle.inertia_diag)));
    f.push_back(vec3_field("vehicles.damping", UWH_M(c.vehicle.damping_diag)));
    f.push_back(vec3_field("vehicles.restoring", UWH_M(c.vehicle.restoring)));
    f.push_back(bool_field("vehicles.coriolis", UWH_M(c.vehicle.coriolis_mode)));
    f.push_back(number_field("vehicles.disturbance_bound", UWH_M(c.disturbance_bound)));

    f.push_back(number_field("game.safe_radius", UWH_M(c.termination.safety_radius)));
    f.push_back(number_field("game.sensing_radius", UWH_M(c.termination.sense_radius)));
    f.push_back(number_field("game.attack_radius", UWH_M(c.termination.attack_radius)));
    f.push_back(number_field("game.constraint_a", UWH_M(c.termination.escape_value)));
    f.push_back(number_field("game.constraint_b", UWH_M(c.termination.capture_value)));
    f.push_back(number_field("game.constraint_c", UWH_M(c.constraint_c)));
    f.push_back(number_field("game.alpha_d", UWH_M(c.alpha_d)));
    f.push_back(number_field("game.beta_c", UWH_M(c.beta_c)));
    f.push_back(bool_field("game.strict_escape", UWH_M(c.termination.strict_escape)));

    f.push_back(number_field("acoustics.temperature", UWH_M(c.water.temperature)));
    f.push_back(number_field("acoustics.salinity", UWH_M(c.water.salinity)));
    f.push_back(number_field("acoustics.pressure", UWH_M(c.water.pressure)));
    f.push_back({"acoustics.delay_mode",
                 [](ScenarioConfig& c, const std::string& k, const Value& v) {
                   if (v.kind == Value::Kind::String && v.text == "off") {
                     c.delay_mode = DelayMode::Off;
                   } else if (v.kind == Value::Kind::String && v.text == "acoustic") {
                     c.delay_mode = DelayMode::Acoustic;
                   } else {
                     throw ConfigError(k + ": expected \"off\" or \"acoustic\"");
                   }
                 },
                 [](const ScenarioConfig& c) {
                   return "\"" + std::string(to_string(c.delay_mode)) + "\"";
                 }});
    f.push_back(number_field("acoustics.delay_scale", UWH_M(c.delay_scale)));

    f.push_back(number_field("analytic.length_scale", UWH_M(c.length_scale)));
    f.push_back(number_field("analytic.riccati_step", UWH_M(c.riccati_step)));
    f.push_back(number_field("analytic.lookahead", UWH_M(c.lookahead)));

    f.push_back(number_field("dqn.learning_rate", UWH_M(c.dqn.learning_rate)));
    f.push_back(int_field("dqn.episodes", UWH_M(c.dqn.episodes)));
    f.push_back(number_field("dqn.discount", UWH_M(c.dqn.discount)));
    f.push_back(int_field("dqn.batch_size", UWH_M(c.dqn.batch_size)));
    f.push_back(int_field("dqn.memory_capacity", UWH_M(c.dqn.memory_capacity)));
    f.push_back(number_field("dqn.epsilon", UWH_M(c.dqn.epsilon)));
    f.push_back(int_field("dqn.target_sync_interval", UWH_M(c.dqn.target_sync_interval)));
    f.push_back({"dqn.hidden_sizes",
                 [](ScenarioConfig& c, const std::string& k, const Value& v) {
                   if (v.kind != Value::Kind::Array) throw ConfigError(k + ": expected an array");
                   c.dqn.hidden_sizes.clear();
                   for (const auto& item : v.items) c.dqn.hidden_sizes.push_back(as_int(k, item));
                 },
                 [](const ScenarioConfig& c) {
                   std::string s = "[";
                   for (std::size_t i = 0; i < c.dqn.hidden_sizes.size(); ++i)
                     s += (i ? ", " : "") + std::to_string(c.dqn.hidden_sizes[i]);
                   return s + "]";
                 }});
    f.push_back(int_field("dqn.warmup_slots", UWH_M(c.dqn.warmup_slots)));
    f.push_back(int_field("dqn.heading_bins", UWH_M(c.dqn.heading_bins)));
    f.push_back(number_field("dqn.reward_floor", UWH_M(c.dqn.reward_floor)));
    f.push_back(number_field("dqn.progress_weight", UWH_M(c.dqn.progress_weight)));
    f.push_back(bool_field("dqn.epsilon_anneal", UWH_M(c.dqn.epsilon_anneal)));
    f.push_back(number_field("dqn.epsilon_start", UWH_M(c.dqn.epsilon_start)));
    f.push_back(int_field("dqn.anneal_episodes", UWH_M(c.dqn.anneal_episodes)));
    f.push_back(int_field("dqn.train_interval", UWH_M(c.dqn.train_interval)));

    f.push_back(int_field("metrics.smoothing_window", UWH_M(c.smoothing_window)));
    f.push_back(int_field("metrics.kendall_window", UWH_M(c.kendall_window)));
    f.push_back(bool_field("metrics.pair_normalized", UWH_M(c.kendall_pair_normalized)));
    return f;
  }();
  return table;
}

#undef UWH_M

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig config;
  const auto values = Parser(text).parse();
  const auto& table = fields();
  for (const auto& [key, value] : values) {
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
    it->set(config, key, value);
  }
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_toml(const ScenarioConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string table = dot == std::string::npos ? "" : f.key.substr(0, dot);
    const std::string name = dot == std::string::npos ? f.key : f.key.substr(dot + 1);
    if (table != section) {
      out += "\n[" + table + "]\n";
      section = table;
    }
    out += name + " = " + f.get(config) + "\n";
  }
  return out;
}

std::string config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_toml(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace uwh
