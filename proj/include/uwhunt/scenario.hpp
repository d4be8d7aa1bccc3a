#pragma once

// Experiment orchestration behind the command line: each command writes its
// CSV outputs and a manifest (manifest.json) into the output directory.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uwhunt/config.hpp"

namespace uwh {

enum class Command { Simulate, Train, Eval, Analyze };

std::optional<Command> command_from_string(std::string_view text);
std::string_view to_string(Command command);

struct RunOptions {
  std::optional<int> episodes;  // simulate/eval episode count, train overrides dqn.episodes
  std::optional<std::filesystem::path> checkpoint;  // eval input, default <out>/checkpoint.bin
  std::optional<std::filesystem::path> training_log;  // analyze input, default <out>/training_log.csv
  bool analytic_evader = true;  // simulate: evader plays the feedback strategy
  double eval_epsilon = 1.0;    // eval: greedy probability
  int checkpoint_every = 0;     // train: also checkpoint every n episodes
  bool verbose = false;         // simulate: per-slot solver diagnostics
  std::string config_source;    // recorded in the manifest
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  std::string config_source;
  std::string started_at;
  std::string finished_at;
  std::string status;  // running, complete, failed
  std::string error;
  std::vector<std::string> outputs;  // file names relative to the output directory
  std::vector<std::pair<std::string, std::string>> summary;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Runs `command`. The manifest is written with status "running" before any
/// output and finalized afterwards. On failure the outputs written so far are
/// removed, the manifest records the error and the exception is rethrown.
RunManifest run(Command command, const ScenarioConfig& config,
                const std::filesystem::path& output_dir, const RunOptions& options = {});

std::string manifest_json(const RunManifest& manifest);

}  // namespace uwh
