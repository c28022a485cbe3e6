#include "workspace.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "smr/error.hpp"

namespace smr::cli {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return hex64(h);
}

std::string fnv1a_file(const fs::path& path) { return fnv1a_hex(read_text(path)); }

fs::path ScenarioFiles::report(const std::string& system) const {
  return matrix.parent_path() / (name + "." + system + ".json");
}

ScenarioFiles scenario_files(const fs::path& dir, const std::string& name, bool csv_attrs) {
  ScenarioFiles f;
  f.name = name;
  f.matrix = dir / (name + ".smrm");
  f.truth = dir / (name + ".gt.csv");
  f.seq = dir / (name + ".seq.smrm");
  f.attrs = dir / (name + (csv_attrs ? ".attrs.csv" : ".attrs.bin"));
  f.preds = dir / (name + ".pred.csv");
  f.decisions = dir / (name + ".decisions.csv");
  return f;
}

std::vector<std::string> list_scenarios(const fs::path& dir, const std::vector<std::string>& requested) {
  if (!requested.empty()) return requested;
  if (!fs::is_directory(dir)) throw IoError("no such directory " + dir.string());
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto file = entry.path().filename().string();
    const std::string ext = ".smrm";
    if (file.size() <= ext.size() || file.compare(file.size() - ext.size(), ext.size(), ext) != 0) continue;
    const auto stem = file.substr(0, file.size() - ext.size());
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".seq") == 0) continue;
    names.push_back(stem);
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw IoError("no distance matrices (*.smrm) in " + dir.string());
  return names;
}

fs::path existing_attrs(const ScenarioFiles& f) {
  auto bin = f.attrs;
  bin.replace_extension(".bin");
  auto csv = f.attrs;
  csv.replace_extension(".csv");
  if (fs::exists(f.attrs)) return f.attrs;
  if (fs::exists(bin)) return bin;
  if (fs::exists(csv)) return csv;
  throw IoError("missing attributes for " + f.name + " (run attrs first)");
}

Manifest::Manifest(std::string command, std::vector<std::string> argv, const RunConfig& cfg)
    : command_(std::move(command)), argv_(std::move(argv)), config_json_(config_to_json(cfg)) {}

void Manifest::input(const fs::path& path) { inputs_.emplace_back(path.generic_string(), fnv1a_file(path)); }

void Manifest::output(const fs::path& path) { outputs_.emplace_back(path.generic_string(), fnv1a_file(path)); }

void Manifest::write(const fs::path& dir) const {
  using nlohmann::json;
  json in = json::array();
  for (const auto& [p, h] : inputs_) in.push_back({{"path", p}, {"fnv1a64", h}});
  json out = json::array();
  for (const auto& [p, h] : outputs_) out.push_back({{"path", p}, {"fnv1a64", h}});
  json doc = {{"tool", "smr"},
              {"version", SMR_VERSION},
              {"command", command_},
              {"arguments", argv_},
              {"config", json::parse(config_json_)},
              {"inputs", std::move(in)},
              {"outputs", std::move(out)}};
  write_text(dir / ("manifest-" + command_ + ".json"), doc.dump(1) + "\n");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw IoError("cannot write " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace smr::cli
