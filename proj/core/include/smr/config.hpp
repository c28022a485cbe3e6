#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smr/attributes.hpp"
#include "smr/filters.hpp"
#include "smr/mlp.hpp"

namespace smr {

/// Every pipeline knob. Keys in config files and CLI flags use the field
/// names given in keys().
struct RunConfig {
  std::size_t seq_len = 4;
  std::size_t rank_depth = 3;
  std::size_t group_half_window = 2;
  double epsilon = 1e-9;
  std::size_t tolerance = 2;
  double trust_threshold = 0.5;
  double restoration_threshold = 0.91;
  std::size_t restoration_depth = 3;
  std::size_t folds = 5;
  std::uint64_t seed = 7;
  TrainConfig train;

  SmoothingParams smoothing() const { return {group_half_window, epsilon}; }
  FilterConfig filter() const { return {trust_threshold, restoration_depth, restoration_threshold}; }

  /// Sets one field from text. ConfigError on an unknown key or bad value.
  void set(std::string_view key, std::string_view value);
  /// ConfigError if a value is outside its documented domain.
  void validate() const;

  static const std::vector<std::string>& keys();
};

/// Flat key=value text; blank lines and '#' comments are ignored.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
void apply_config_text(RunConfig& cfg, std::string_view text);

/// SMR_SEED, when set, overrides cfg.seed.
void apply_environment(RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);

}  // namespace smr
