#include "uwhunt/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "uwhunt/csv_io.hpp"
#include "uwhunt/errors.hpp"

namespace uwh {

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'U', 'W', 'H', 'Q'};

class Writer {
 public:
  template <typename T>
  void pod(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void str(const std::string& s) {
    pod<std::uint64_t>(s.size());
    out_ += s;
  }
  void vec(const Eigen::VectorXd& v) {
    pod<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
    out_.append(reinterpret_cast<const char*>(v.data()), sizeof(double) * v.size());
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}
  template <typename T>
  T pod() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint64_t>();
    need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Eigen::VectorXd vec() {
    const auto n = pod<std::uint64_t>();
    need(n * sizeof(double));
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    std::memcpy(v.data(), in_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
    return v;
  }
  [[nodiscard]] bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw DomainError("checkpoint: truncated data");
  }
  const std::string& in_;
  std::size_t pos_ = 0;
};

}  // namespace

Checkpoint make_checkpoint(const ScenarioConfig& config, const Learner& learner, int episodes_done) {
  Checkpoint c;
  c.config = config;
  c.episodes_done = episodes_done;
  c.layer_sizes = learner.online.layer_sizes();
  c.online = learner.online.parameters();
  c.target = learner.target.parameters();
  c.adam_steps = learner.optimizer.steps();
  c.adam_m = learner.optimizer.first_moment();
  c.adam_v = learner.optimizer.second_moment();
  c.gradient_steps = learner.gradient_steps;
  c.replay_rng = learner.replay_rng.serialize();
  return c;
}

Learner restore_learner(const Checkpoint& ckpt) {
  Rng init(0);
  Rng replay(0);
  replay.deserialize(ckpt.replay_rng);
  Learner l(ckpt.config.dqn, ckpt.layer_sizes.back(), init, replay);
  if (l.online.layer_sizes() != ckpt.layer_sizes)
    throw DomainError("checkpoint: architecture does not match its hyperparameters");
  l.online.set_parameters(ckpt.online);
  l.target.set_parameters(ckpt.target);
  l.optimizer.restore(ckpt.adam_steps, ckpt.adam_m, ckpt.adam_v);
  l.gradient_steps = ckpt.gradient_steps;
  return l;
}

Mlp restore_policy(const Checkpoint& ckpt) {
  Rng init(0);
  std::vector<int> hidden(ckpt.layer_sizes.begin() + 1, ckpt.layer_sizes.end() - 1);
  Mlp net(ckpt.layer_sizes.front(), hidden, ckpt.layer_sizes.back(), init);
  net.set_parameters(ckpt.online);
  return net;
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
  Writer w;
  for (char ch : kMagic) w.pod(ch);
  w.pod<std::uint32_t>(kCheckpointVersion);
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(ckpt.layer_sizes.size()));
  for (int s : ckpt.layer_sizes) w.pod<std::int32_t>(s);
  w.vec(ckpt.online);
  w.vec(ckpt.target);
  w.pod<std::int64_t>(ckpt.adam_steps);
  w.vec(ckpt.adam_m);
  w.vec(ckpt.adam_v);
  w.pod<std::int64_t>(ckpt.gradient_steps);
  w.pod<std::int32_t>(ckpt.episodes_done);
  w.str(to_toml(ckpt.config));
  w.str(ckpt.replay_rng);
  return w.take();
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  for (char ch : kMagic)
    if (r.pod<char>() != ch) throw DomainError("checkpoint: bad magic");
  const auto version = r.pod<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw DomainError("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint c;
  const auto layers = r.pod<std::uint32_t>();
  if (layers < 2 || layers > 64) throw DomainError("checkpoint: implausible layer count");
  for (std::uint32_t i = 0; i < layers; ++i) c.layer_sizes.push_back(r.pod<std::int32_t>());
  c.online = r.vec();
  c.target = r.vec();
  c.adam_steps = r.pod<std::int64_t>();
  c.adam_m = r.vec();
  c.adam_v = r.vec();
  c.gradient_steps = r.pod<std::int64_t>();
  c.episodes_done = r.pod<std::int32_t>();
  c.config = parse_config(r.str());
  c.replay_rng = r.str();
  if (!r.done()) throw DomainError("checkpoint: trailing bytes");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace uwh
