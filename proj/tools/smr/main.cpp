// smr: staged sequence-matching receptiveness pipeline.
//
//   smr gen --spec battery --seed 7 --dir run
//   smr seqmatch --L 4 --dir run
//   smr attrs / label / train / predict / filter --dir run
//   smr eval --dir run
//   smr eval --baseline a.json --filtered b.json
//   smr ablate --L 2,4,6,8,10 --dir ablation
//
// Exit status: 0 on success, 2 on a usage error, otherwise a per-category
// code; stderr then carries one line "error: <category>: <message>".

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "smr/error.hpp"

namespace {

int exit_code(const std::string& category) {
  static const std::map<std::string, int> codes = {{"io", 3},    {"format", 4},   {"range", 5},
                                                   {"shape", 6}, {"data", 7},     {"numerics", 8},
                                                   {"coverage", 9}, {"spec", 10}, {"config", 11}};
  const auto it = codes.find(category);
  return it == codes.end() ? 1 : it->second;
}

int fail(const std::string& category, const std::string& message) {
  std::string line = message;
  for (auto& c : line) {
    if (c == '\n') c = ' ';
  }
  std::fprintf(stderr, "error: %s: %s\n", category.c_str(), line.c_str());
  return exit_code(category);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace smr::cli;

  CLI::App app{"Sequence-matching receptiveness pipeline"};
  app.set_version_flag("--version", std::string("smr ") + SMR_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  std::string dir = ".";
  std::string config_file;
  std::map<std::string, std::string> flags;
  app.add_option("--dir", dir, "Working directory holding the stage files")->capture_default_str();
  app.add_option("--scenario", ctx.scenarios, "Restrict to these scenario names");
  app.add_option("--config", config_file, "Flat key=value configuration file");
  for (const auto& key : smr::RunConfig::keys()) {
    std::string names = "--" + key;
    if (key == "seqLen") names += ",--L";
    if (key == "rankDepth") names += ",--K";
    app.add_option(names, flags[key], "Run configuration: " + key);
  }

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic scenarios");
  gen_cmd->add_option("--spec", gen.spec, "battery or clean")->capture_default_str();
  gen_cmd->add_option("--noise-scale", gen.noise_scale, "Multiplier on battery noise")->capture_default_str();
  gen_cmd->add_option("--size", gen.size, "R = Q of the clean scenario")->capture_default_str();

  auto* seq_cmd = app.add_subcommand("seqmatch", "Sequence-match every distance matrix");

  AttrsOptions attrs;
  auto* attrs_cmd = app.add_subcommand("attrs", "Extract receptiveness attributes");
  attrs_cmd->add_option("--format", attrs.format, "bin or csv")->capture_default_str();

  auto* label_cmd = app.add_subcommand("label", "Label queries by sequence-matching outcome");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train the predictor on labelled attributes");
  train_cmd->add_option("--model", train.model, "Model file")->capture_default_str();
  train_cmd->add_option("--split", train.split, "half: first half of the queries; all")->capture_default_str();
  train_cmd->add_flag("--cv", train.cross_validate, "Also report stratified k-fold macro F1");

  TrainOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Score every query with a trained predictor");
  predict_cmd->add_option("--model", predict.model, "Model file")->capture_default_str();
  predict_cmd->add_option("--split", predict.split, "Queries scored for macro F1: half or all")->capture_default_str();

  FilterOptions filter;
  bool no_restore = false;
  auto* filter_cmd = app.add_subcommand("filter", "Remove and restore matches");
  filter_cmd->add_option("--model", filter.model, "Model file used for restoration")->capture_default_str();
  filter_cmd->add_flag("--no-restore", no_restore, "Only remove matches");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Precision-recall evaluation");
  eval_cmd->add_option("--baseline", eval.baseline, "Baseline report JSON (comparison mode)");
  eval_cmd->add_option("--filtered", eval.filtered, "Filtered report JSON (comparison mode)");
  eval_cmd->add_option("--split", eval.split, "Evaluated queries: half (second half) or all")->capture_default_str();

  AblateOptions ablate;
  std::vector<std::size_t> seq_lens;
  auto* ablate_cmd = app.add_subcommand("ablate", "Sweeps over L, tau, rho and attribute subsets");
  ablate_cmd->add_option("--lengths", seq_lens, "Sequence lengths to sweep (default 2,4,6,8,10)")->delimiter(',');
  ablate_cmd->add_option("--tau", ablate.taus, "Trust thresholds")->delimiter(',');
  ablate_cmd->add_option("--rho", ablate.rhos, "Restoration thresholds")->delimiter(',');
  ablate_cmd->add_flag("!--no-attributes", ablate.attributes, "Skip the attribute ablation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: usage: %s\n", e.what());
    return 2;
  }

  try {
    ctx.dir = dir;
    ctx.argv.assign(argv + 1, argv + argc);
    if (!config_file.empty()) ctx.cfg = smr::load_config(config_file, ctx.cfg);
    smr::apply_environment(ctx.cfg);
    const bool length_list = *ablate_cmd && flags["seqLen"].find(',') != std::string::npos;
    for (const auto& key : smr::RunConfig::keys()) {
      if (flags[key].empty() || (key == "seqLen" && length_list)) continue;
      ctx.cfg.set(key, flags[key]);
    }
    ctx.cfg.validate();

    if (*ablate_cmd) {
      // --L doubles as the sweep list for ablate ("--L 2,4,6,8,10").
      if (length_list) {
        seq_lens.clear();
        std::string list = flags["seqLen"];
        std::size_t start = 0;
        while (start <= list.size()) {
          const auto comma = list.find(',', start);
          seq_lens.push_back(std::stoul(list.substr(start, comma - start)));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      }
      if (!seq_lens.empty()) ablate.seq_lens = seq_lens;
      return cmd_ablate(ctx, ablate);
    }
    if (*gen_cmd) return cmd_gen(ctx, gen);
    if (*seq_cmd) return cmd_seqmatch(ctx);
    if (*attrs_cmd) return cmd_attrs(ctx, attrs);
    if (*label_cmd) return cmd_label(ctx);
    if (*train_cmd) return cmd_train(ctx, train);
    if (*predict_cmd) return cmd_predict(ctx, predict);
    if (*filter_cmd) {
      filter.restore = !no_restore;
      return cmd_filter(ctx, filter);
    }
    if (*eval_cmd) return cmd_eval(ctx, eval);
  } catch (const smr::Error& e) {
    return fail(e.category(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
