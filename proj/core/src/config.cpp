#include "smr/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smr/error.hpp"

namespace smr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

std::vector<std::size_t> parse_list(std::string_view key, std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(',', start);
    const auto part = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    if (!trim(part).empty()) out.push_back(parse_number<std::size_t>(key, part));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "seqLen",       "rankDepth",  "W",         "epsilon",       "tolerance",      "trustThreshold",
      "restorationThreshold", "restorationDepth", "folds", "seed",  "learningRate", "l2Alpha",
      "batchSize",    "maxEpochs",  "patience",  "minDelta",      "smoteNeighbors", "hidden"};
  return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "seqLen" || key == "L") {
    seq_len = parse_number<std::size_t>(key, value);
  } else if (key == "rankDepth" || key == "K") {
    rank_depth = parse_number<std::size_t>(key, value);
  } else if (key == "W") {
    group_half_window = parse_number<std::size_t>(key, value);
  } else if (key == "epsilon") {
    epsilon = parse_number<double>(key, value);
  } else if (key == "tolerance") {
    tolerance = parse_number<std::size_t>(key, value);
  } else if (key == "trustThreshold") {
    trust_threshold = parse_number<double>(key, value);
  } else if (key == "restorationThreshold") {
    restoration_threshold = parse_number<double>(key, value);
  } else if (key == "restorationDepth") {
    restoration_depth = parse_number<std::size_t>(key, value);
  } else if (key == "folds") {
    folds = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "learningRate") {
    train.learning_rate = parse_number<double>(key, value);
  } else if (key == "l2Alpha") {
    train.l2_alpha = parse_number<double>(key, value);
  } else if (key == "batchSize") {
    train.batch_size = parse_number<std::size_t>(key, value);
  } else if (key == "maxEpochs") {
    train.max_epochs = parse_number<std::size_t>(key, value);
  } else if (key == "patience") {
    train.patience = parse_number<std::size_t>(key, value);
  } else if (key == "minDelta") {
    train.min_delta = parse_number<double>(key, value);
  } else if (key == "smoteNeighbors") {
    train.smote_neighbors = parse_number<std::size_t>(key, value);
  } else if (key == "hidden") {
    train.hidden = parse_list(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  if (seq_len == 0) throw ConfigError("seqLen must be >= 1");
  if (rank_depth == 0) throw ConfigError("rankDepth must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (trust_threshold < 0.0 || trust_threshold > 1.0) throw ConfigError("trustThreshold must lie in [0, 1]");
  if (restoration_threshold < 0.0 || restoration_threshold > 1.0) {
    throw ConfigError("restorationThreshold must lie in [0, 1]");
  }
  if (restoration_depth == 0) throw ConfigError("restorationDepth must be >= 1");
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (!(train.learning_rate > 0.0) || train.l2_alpha < 0.0 || train.max_epochs == 0) {
    throw ConfigError("learningRate > 0, l2Alpha >= 0 and maxEpochs >= 1 are required");
  }
  for (auto h : train.hidden) {
    if (h == 0) throw ConfigError("hidden layer widths must be positive");
  }
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(base, buf.str());
  return base;
}

void apply_environment(RunConfig& cfg) {
  if (const char* s = std::getenv("SMR_SEED"); s && *s) cfg.seed = parse_number<std::uint64_t>("SMR_SEED", s);
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::json doc = {{"seqLen", cfg.seq_len},
                        {"rankDepth", cfg.rank_depth},
                        {"W", cfg.group_half_window},
                        {"epsilon", cfg.epsilon},
                        {"tolerance", cfg.tolerance},
                        {"trustThreshold", cfg.trust_threshold},
                        {"restorationThreshold", cfg.restoration_threshold},
                        {"restorationDepth", cfg.restoration_depth},
                        {"folds", cfg.folds},
                        {"seed", cfg.seed},
                        {"learningRate", cfg.train.learning_rate},
                        {"l2Alpha", cfg.train.l2_alpha},
                        {"batchSize", cfg.train.batch_size},
                        {"maxEpochs", cfg.train.max_epochs},
                        {"patience", cfg.train.patience},
                        {"minDelta", cfg.train.min_delta},
                        {"smoteNeighbors", cfg.train.smote_neighbors},
                        {"hidden", cfg.train.hidden}};
  return doc.dump(1);
}

}  // namespace smr
