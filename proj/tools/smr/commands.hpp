#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smr/config.hpp"

namespace smr::cli {

struct Context {
  std::filesystem::path dir = ".";
  std::vector<std::string> scenarios;  // empty: every matrix in dir
  std::vector<std::string> argv;
  RunConfig cfg;
};

struct GenOptions {
  std::string spec = "battery";  // battery | clean
  double noise_scale = 1.0;
  std::size_t size = 600;        // clean only
};

struct AttrsOptions {
  std::string format = "bin";  // bin | csv
};

struct TrainOptions {
  std::string model = "model.json";
  std::string split = "half";  // half | all
  bool cross_validate = false;
};

struct FilterOptions {
  std::string model = "model.json";
  bool restore = true;
};

struct EvalOptions {
  std::string baseline;  // report files; both set selects comparison mode
  std::string filtered;
  std::string split = "half";
};

struct AblateOptions {
  std::vector<std::size_t> seq_lens{2, 4, 6, 8, 10};
  std::vector<double> taus{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> rhos{0.5, 0.7, 0.8, 0.9, 0.91, 0.95, 0.99};
  bool attributes = true;
};

int cmd_gen(const Context& ctx, const GenOptions& opt);
int cmd_seqmatch(const Context& ctx);
int cmd_attrs(const Context& ctx, const AttrsOptions& opt);
int cmd_label(const Context& ctx);
int cmd_train(const Context& ctx, const TrainOptions& opt);
int cmd_predict(const Context& ctx, const TrainOptions& opt);
int cmd_filter(const Context& ctx, const FilterOptions& opt);
int cmd_eval(const Context& ctx, const EvalOptions& opt);
int cmd_ablate(const Context& ctx, const AblateOptions& opt);

}  // namespace smr::cli
