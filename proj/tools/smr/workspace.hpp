#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "smr/config.hpp"

namespace smr::cli {

namespace fs = std::filesystem;

/// 64-bit FNV-1a over the file's bytes, as 16 hex digits.
std::string fnv1a_file(const fs::path& path);
std::string fnv1a_hex(std::string_view bytes);

/// Stage files of one scenario inside a working directory.
struct ScenarioFiles {
  std::string name;
  fs::path matrix;     // <name>.smrm
  fs::path truth;      // <name>.gt.csv
  fs::path seq;        // <name>.seq.smrm
  fs::path attrs;      // <name>.attrs.bin or .csv
  fs::path preds;      // <name>.pred.csv
  fs::path decisions;  // <name>.decisions.csv

  fs::path report(const std::string& system) const;  // <name>.<system>.json
};

ScenarioFiles scenario_files(const fs::path& dir, const std::string& name, bool csv_attrs = false);

/// Names of the raw matrices in dir (*.smrm other than *.seq.smrm), sorted,
/// or `requested` when non-empty.
std::vector<std::string> list_scenarios(const fs::path& dir, const std::vector<std::string>& requested);

/// Finds the attribute file of a scenario in either format.
fs::path existing_attrs(const ScenarioFiles& f);

/// Inputs and outputs of one command, written as manifest-<command>.json.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv, const RunConfig& cfg);

  void input(const fs::path& path);
  void output(const fs::path& path);
  void write(const fs::path& dir) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::string config_json_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace smr::cli
