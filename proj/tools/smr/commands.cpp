#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "smr/attrio.hpp"
#include "smr/error.hpp"
#include "smr/experiment.hpp"
#include "smr/plot.hpp"
#include "workspace.hpp"

namespace smr::cli {

namespace {

using nlohmann::json;

fs::path resolve(const Context& ctx, const std::string& file) {
  const fs::path p(file);
  return p.has_parent_path() ? p : ctx.dir / p;
}

void check_split(const std::string& split) {
  if (split != "half" && split != "all") throw ConfigError("split must be 'half' or 'all', got '" + split + "'");
}

SeqDistanceMatrix load_seq(const fs::path& path) { return as_sequence_matrix(load_matrix(path)); }

std::size_t match_depth(const RunConfig& cfg) { return std::max(cfg.rank_depth, cfg.restoration_depth + 1); }

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

template <typename Fn>
void write_stream(const fs::path& path, Manifest& manifest, Fn&& fn) {
  std::ostringstream out;
  fn(out);
  write_text(path, out.str());
  manifest.output(path);
}

std::vector<PredictionScores> read_predictions(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_predictions_csv(in);
}

std::vector<MatchDecision> read_decisions(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_decisions_csv(in);
}

// First filter only: restorations count as removals.
std::vector<MatchDecision> removal_view(std::vector<MatchDecision> decisions) {
  for (auto& d : decisions) {
    if (d.verdict == Verdict::restored) {
      d.verdict = Verdict::removed;
      d.final_ref.reset();
    }
  }
  return decisions;
}

std::vector<ScoredMatch> from_query(std::vector<ScoredMatch> matches, std::size_t begin) {
  std::erase_if(matches, [&](const ScoredMatch& m) { return m.query < begin; });
  return matches;
}

struct Inputs {
  std::string name;
  DistanceMatrix d;
  GroundTruth gt;
};

std::vector<Inputs> ablation_inputs(const Context& ctx, Manifest& manifest) {
  std::vector<Inputs> out;
  const bool have_files = ctx.dir != fs::path() && fs::is_directory(ctx.dir) && [&] {
    for (const auto& e : fs::directory_iterator(ctx.dir)) {
      if (e.path().extension() == ".smrm") return true;
    }
    return false;
  }();
  if (!have_files && ctx.scenarios.empty()) {
    for (auto& s : scenario_battery(ctx.cfg.seed)) out.push_back({s.name, std::move(s.distances), std::move(s.truth)});
    return out;
  }
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name);
    manifest.input(f.matrix);
    manifest.input(f.truth);
    out.push_back({name, load_matrix(f.matrix), load_ground_truth(f.truth, ctx.cfg.tolerance)});
  }
  return out;
}

std::vector<PreparedScenario> prepare_all(const std::vector<Inputs>& inputs, const RunConfig& cfg) {
  std::vector<PreparedScenario> out;
  for (const auto& in : inputs) out.push_back(prepare(in.name, in.d, in.gt, cfg));
  return out;
}

double mean_of(const BatterySummary& s, double (*field)(const ScenarioEvaluation&)) {
  if (s.scenarios.empty()) return 0.0;
  double total = 0.0;
  for (const auto& e : s.scenarios) total += field(e);
  return total / static_cast<double>(s.scenarios.size());
}

}  // namespace

int cmd_gen(const Context& ctx, const GenOptions& opt) {
  Manifest manifest("gen", ctx.argv, ctx.cfg);
  std::vector<Scenario> scenarios;
  if (opt.spec == "battery") {
    scenarios = scenario_battery(ctx.cfg.seed, opt.noise_scale);
  } else if (opt.spec == "clean") {
    ScenarioSpec spec;
    spec.name = "clean";
    spec.refs = spec.queries = opt.size;
    spec.noise_sigma = 0.0;
    spec.seed = ctx.cfg.seed;
    spec.tolerance = ctx.cfg.tolerance;
    scenarios.push_back(generate(spec));
  } else {
    throw ConfigError("unknown scenario spec '" + opt.spec + "' (battery or clean)");
  }

  fs::create_directories(ctx.dir);
  json specs = json::array();
  for (const auto& s : scenarios) {
    const auto f = scenario_files(ctx.dir, s.name);
    save_matrix(s.distances, f.matrix, MatrixFormat::binary);
    save_ground_truth(s.truth, f.truth);
    manifest.output(f.matrix);
    manifest.output(f.truth);
    specs.push_back(json::parse(spec_to_json(s.spec)));
    std::printf("%-12s %zux%zu  single-frame accuracy %s\n", s.name.c_str(), s.distances.rows(), s.distances.cols(),
                fixed(single_frame_accuracy(s.distances, s.truth)).c_str());
  }
  const json battery = {{"spec", opt.spec}, {"seed", ctx.cfg.seed}, {"noiseScale", opt.noise_scale},
                        {"scenarios", std::move(specs)}};
  write_text(ctx.dir / "battery.json", battery.dump(1) + "\n");
  manifest.output(ctx.dir / "battery.json");
  manifest.write(ctx.dir);
  return 0;
}

int cmd_seqmatch(const Context& ctx) {
  Manifest manifest("seqmatch", ctx.argv, ctx.cfg);
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name);
    manifest.input(f.matrix);
    const auto d = load_matrix(f.matrix);
    const auto seq = sequence_match(d, ctx.cfg.seq_len);
    save_matrix(seq.matrix, f.seq, MatrixFormat::binary);
    manifest.output(f.seq);
    std::printf("%-12s L=%zu  scored queries %zu\n", name.c_str(), seq.seq_len, seq.cols() - seq.valid_from);
  }
  manifest.write(ctx.dir);
  return 0;
}

int cmd_attrs(const Context& ctx, const AttrsOptions& opt) {
  if (opt.format != "bin" && opt.format != "csv") throw ConfigError("attribute format must be bin or csv");
  Manifest manifest("attrs", ctx.argv, ctx.cfg);
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name, opt.format == "csv");
    manifest.input(f.matrix);
    const auto d = load_matrix(f.matrix);
    const auto attrs = matrix_attributes(d, ctx.cfg.seq_len, match_depth(ctx.cfg), ctx.cfg.smoothing());
    std::vector<AttributeRecord> records;
    records.reserve(attrs.size());
    for (const auto& a : attrs) records.push_back({a, std::nullopt});
    save_attributes(records, f.attrs);
    manifest.output(f.attrs);
    std::printf("%-12s %zu attribute rows (depth %zu)\n", name.c_str(), records.size(), match_depth(ctx.cfg));
  }
  manifest.write(ctx.dir);
  return 0;
}

int cmd_label(const Context& ctx) {
  Manifest manifest("label", ctx.argv, ctx.cfg);
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name);
    const auto attrs_path = existing_attrs(f);
    for (const auto& p : {f.matrix, f.seq, f.truth, attrs_path}) manifest.input(p);
    const auto d = load_matrix(f.matrix);
    const auto seq = load_seq(f.seq);
    if (seq.seq_len != ctx.cfg.seq_len) {
      throw ConfigError(name + ": sequence matrix has L=" + std::to_string(seq.seq_len) + ", config has L=" +
                        std::to_string(ctx.cfg.seq_len));
    }
    const auto gt = load_ground_truth(f.truth, ctx.cfg.tolerance);
    const auto labels = label_queries(d, seq, gt);
    std::map<std::size_t, int> by_query;
    for (const auto& l : labels) by_query[l.query] = l.label;

    auto records = load_attributes(attrs_path);
    for (auto& r : records) {
      const auto it = by_query.find(r.attrs.query);
      if (it == by_query.end()) throw CoverageError(name + ": no label for query " + std::to_string(r.attrs.query));
      r.label = it->second;
    }
    save_attributes(records, attrs_path);
    manifest.output(attrs_path);
    const auto h = class_histogram(labels);
    std::printf("%-12s labels y0=%zu y1=%zu y2=%zu y3=%zu\n", name.c_str(), h[0], h[1], h[2], h[3]);
  }
  manifest.write(ctx.dir);
  return 0;
}

int cmd_train(const Context& ctx, const TrainOptions& opt) {
  check_split(opt.split);
  Manifest manifest("train", ctx.argv, ctx.cfg);
  Dataset pooled;
  pooled.dim = kAttributeCount;
  std::string trained_on;
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name);
    const auto attrs_path = existing_attrs(f);
    manifest.input(attrs_path);
    manifest.input(f.matrix);
    const std::size_t queries = load_matrix(f.matrix).cols();
    const std::size_t end = opt.split == "half" ? queries / 2 : queries;
    for (const auto& r : load_attributes(attrs_path)) {
      if (r.attrs.rank != 0 || r.attrs.query >= end) continue;
      if (!r.label) throw DataError(name + ": attributes are unlabelled (run label first)");
      const auto v = r.attrs.values();
      pooled.add(v, *r.label);
    }
    trained_on += (trained_on.empty() ? "" : ",") + name;
  }
  const auto h = pooled.histogram();
  std::printf("training rows %zu  y0=%zu y1=%zu y2=%zu y3=%zu\n", pooled.labels.size(), h[0], h[1], h[2], h[3]);

  TrainConfig tc = ctx.cfg.train;
  tc.seed = ctx.cfg.seed;
  if (opt.cross_validate) {
    const auto report = stratified_kfold_f1(pooled, tc, ctx.cfg.folds);
    const json doc = {{"folds", ctx.cfg.folds}, {"foldMacroF1", report.fold_f1}, {"meanMacroF1", report.mean_f1}};
    write_text(ctx.dir / "kfold.json", doc.dump(1) + "\n");
    manifest.output(ctx.dir / "kfold.json");
    std::printf("%zu-fold macro F1 %s\n", ctx.cfg.folds, fixed(report.mean_f1).c_str());
  }
  auto model = train(smote_oversample(pooled, tc.smote_neighbors, ctx.cfg.seed), tc);
  model.trained_on = trained_on + " (L=" + std::to_string(ctx.cfg.seq_len) + ")";
  const auto path = resolve(ctx, opt.model);
  save_model(model, path);
  manifest.output(path);
  std::printf("epochs %zu  final loss %s  -> %s\n", model.loss_curve.size(),
              fixed(model.loss_curve.empty() ? 0.0 : model.loss_curve.back(), 6).c_str(), path.string().c_str());
  manifest.write(ctx.dir);
  return 0;
}

int cmd_predict(const Context& ctx, const TrainOptions& opt) {
  check_split(opt.split);
  Manifest manifest("predict", ctx.argv, ctx.cfg);
  const auto model_path = resolve(ctx, opt.model);
  manifest.input(model_path);
  const auto model = load_model(model_path);
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name);
    const auto attrs_path = existing_attrs(f);
    manifest.input(attrs_path);
    const auto records = load_attributes(attrs_path);
    std::vector<PredictionScores> preds;
    std::vector<int> truth;
    std::vector<int> predicted;
    std::size_t queries = 0;
    for (const auto& r : records) queries = std::max(queries, r.attrs.query + 1);
    const std::size_t begin = opt.split == "half" ? queries / 2 : 0;
    for (const auto& r : records) {
      if (r.attrs.rank != 0) continue;
      preds.push_back(predict(model, r.attrs));
      if (r.label && r.attrs.query >= begin) {
        truth.push_back(*r.label);
        predicted.push_back(preds.back().predicted);
      }
    }
    write_stream(f.preds, manifest, [&](std::ostream& out) { write_predictions_csv(preds, out); });
    if (!truth.empty()) {
      std::printf("%-12s %zu predictions  macro F1 (%s) %s\n", name.c_str(), preds.size(), opt.split.c_str(),
                  fixed(macro_f1(truth, predicted)).c_str());
    } else {
      std::printf("%-12s %zu predictions\n", name.c_str(), preds.size());
    }
  }
  manifest.write(ctx.dir);
  return 0;
}

int cmd_filter(const Context& ctx, const FilterOptions& opt) {
  Manifest manifest("filter", ctx.argv, ctx.cfg);
  std::optional<MlpModel> model;
  if (opt.restore) {
    const auto path = resolve(ctx, opt.model);
    manifest.input(path);
    model = load_model(path);
  }
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name);
    manifest.input(f.seq);
    manifest.input(f.preds);
    const auto seq = load_seq(f.seq);
    const auto matches = best_matches(seq, match_depth(ctx.cfg));
    const auto preds = read_predictions(f.preds);
    auto decisions = remove_matches(matches, preds, ctx.cfg.filter());
    if (opt.restore) {
      const auto attrs_path = existing_attrs(f);
      manifest.input(attrs_path);
      std::map<std::pair<std::size_t, std::size_t>, AttributeVector> table;
      for (const auto& r : load_attributes(attrs_path)) table[{r.attrs.query, r.attrs.rank}] = r.attrs;
      const AttributeProvider provider = [&](std::size_t q, std::size_t rank) {
        const auto it = table.find({q, rank});
        if (it == table.end()) {
          throw CoverageError(name + ": no attributes for query " + std::to_string(q) + " rank " + std::to_string(rank));
        }
        return it->second;
      };
      decisions = restore_matches(std::move(decisions), matches, provider, *model, ctx.cfg.filter());
    }
    write_stream(f.decisions, manifest, [&](std::ostream& out) { write_decisions_csv(decisions, out); });
    std::size_t removed = 0;
    std::size_t restored = 0;
    for (const auto& d : decisions) {
      removed += d.verdict != Verdict::kept ? 1 : 0;
      restored += d.verdict == Verdict::restored ? 1 : 0;
    }
    std::printf("%-12s removed %zu  restored %zu\n", name.c_str(), removed, restored);
  }
  manifest.write(ctx.dir);
  return 0;
}

int cmd_eval(const Context& ctx, const EvalOptions& opt) {
  Manifest manifest("eval", ctx.argv, ctx.cfg);
  if (!opt.baseline.empty() || !opt.filtered.empty()) {
    if (opt.baseline.empty() || opt.filtered.empty()) throw ConfigError("--baseline and --filtered go together");
    manifest.input(opt.baseline);
    manifest.input(opt.filtered);
    const auto [base, filt] =
        align_reports(report_from_json(read_text(opt.baseline)), report_from_json(read_text(opt.filtered)));
    const auto row = compare_reports(base, filt);
    const json doc = {{"recallCap", filt.recall_cap},    {"aucBaseline", row.auc_baseline},
                      {"aucFiltered", row.auc_filtered}, {"aocBaseline", row.aoc_baseline},
                      {"aocFiltered", row.aoc_filtered}, {"reductionPercent", format_percent(row.reduction_percent)}};
    const auto out = ctx.dir / "comparison.json";
    write_text(out, doc.dump(1) + "\n");
    manifest.output(out);
    std::printf("AOC %s -> %s  reduction %s%%\n", fixed(row.aoc_baseline).c_str(), fixed(row.aoc_filtered).c_str(),
                format_percent(row.reduction_percent).c_str());
    manifest.write(ctx.dir);
    return 0;
  }

  check_split(opt.split);
  json rows = json::array();
  std::printf("%-12s %8s %8s %8s %8s %8s %10s\n", "scenario", "recall", "aucBase", "aucPred", "aocBase", "aocPred",
              "reduction");
  for (const auto& name : list_scenarios(ctx.dir, ctx.scenarios)) {
    const auto f = scenario_files(ctx.dir, name);
    manifest.input(f.seq);
    manifest.input(f.truth);
    const auto seq = load_seq(f.seq);
    const auto gt = load_ground_truth(f.truth, ctx.cfg.tolerance);
    const std::size_t begin = opt.split == "half" ? seq.cols() / 2 : 0;

    std::vector<CurveSeries> series;
    const auto base_curve = pr_curve(from_query(scored_matches(best_matches(seq, 1)), begin), gt);
    auto base = make_report(base_curve, 1.0, "VPR+SM");
    json row = {{"scenario", name}};
    if (fs::exists(f.decisions)) {
      manifest.input(f.decisions);
      const auto decisions = read_decisions(f.decisions);
      const auto filt_curve = pr_curve(from_query(scored_decisions(removal_view(decisions), seq), begin), gt);
      const auto rest_curve = pr_curve(from_query(scored_decisions(decisions, seq), begin), gt);
      auto [b, filt] = align_reports(base, make_report(filt_curve, 1.0, "VPR+SM+Pred"));
      base = std::move(b);
      const auto rest = make_report(rest_curve, 1.0, "VPR+SM+Pred+Restore");
      const auto cmp = compare_reports(base, filt);
      for (const auto& [system, report] : {std::pair<const char*, const EvalReport*>{"filtered", &filt}, {"restored", &rest}}) {
        write_text(f.report(system), report_to_json(*report) + "\n");
        manifest.output(f.report(system));
      }
      row["aucFiltered"] = filt.auc;
      row["aocFiltered"] = filt.aoc;
      row["aucRestored"] = rest.auc;
      row["reductionPercent"] = format_percent(cmp.reduction_percent);
      series = {{base.label, base.curve}, {filt.label, filt.curve}, {rest.label, rest.curve}};
      std::printf("%-12s %8s %8s %8s %8s %8s %9s%%\n", name.c_str(), fixed(filt.recall_cap).c_str(),
                  fixed(base.auc).c_str(), fixed(filt.auc).c_str(), fixed(base.aoc).c_str(), fixed(filt.aoc).c_str(),
                  format_percent(cmp.reduction_percent).c_str());
    } else {
      series = {{base.label, base.curve}};
      std::printf("%-12s %8s %8s %8s %8s %8s %10s\n", name.c_str(), fixed(base.recall_cap).c_str(),
                  fixed(base.auc).c_str(), "-", fixed(base.aoc).c_str(), "-", "-");
    }
    row["recallCap"] = base.recall_cap;
    row["aucBaseline"] = base.auc;
    row["aocBaseline"] = base.aoc;
    write_text(f.report("baseline"), report_to_json(base) + "\n");
    manifest.output(f.report("baseline"));
    const auto csv_path = ctx.dir / (name + ".pr.csv");
    write_stream(csv_path, manifest, [&](std::ostream& out) { write_curve_csv(series.back().curve, out); });
    const auto svg_path = ctx.dir / (name + ".pr.svg");
    write_stream(svg_path, manifest, [&](std::ostream& out) { write_pr_svg(series, name, out); });
    rows.push_back(std::move(row));
  }
  const json doc = {{"split", opt.split}, {"scenarios", std::move(rows)}};
  write_text(ctx.dir / "eval.json", doc.dump(1) + "\n");
  manifest.output(ctx.dir / "eval.json");
  manifest.write(ctx.dir);
  return 0;
}

int cmd_ablate(const Context& ctx, const AblateOptions& opt) {
  Manifest manifest("ablate", ctx.argv, ctx.cfg);
  fs::create_directories(ctx.dir);
  const auto inputs = ablation_inputs(ctx, manifest);
  const RunConfig& cfg = ctx.cfg;

  const auto mean_aoc_base = [](const ScenarioEvaluation& e) { return e.baseline.aoc; };
  const auto mean_aoc_filt = [](const ScenarioEvaluation& e) { return e.filtered.aoc; };

  // Sequence-length sweep; the model at the configured L is kept for the
  // threshold sweeps.
  json l_rows = json::array();
  std::string l_csv = "L,aucBaseline,aucFiltered,aucRestored,aocBaseline,aocFiltered,reductionPercent,improvedFraction,macroF1\n";
  std::vector<BarItem> l_bars;
  std::vector<PreparedScenario> main_prepared;
  MlpModel main_model;
  std::printf("%4s %8s %8s %8s %10s %8s\n", "L", "aucBase", "aucPred", "aucRest", "reduction", "F1");
  for (auto seq_len : opt.seq_lens) {
    RunConfig c = cfg;
    c.seq_len = seq_len;
    auto prepared = prepare_all(inputs, c);
    MlpModel model;
    const auto s = run_battery(prepared, c, &model);
    const double f1 = test_macro_f1(prepared, model);
    const double aoc_b = mean_of(s, mean_aoc_base);
    const double aoc_f = mean_of(s, mean_aoc_filt);
    l_rows.push_back({{"L", seq_len},
                      {"aucBaseline", s.mean_auc_baseline},
                      {"aucFiltered", s.mean_auc_filtered},
                      {"aucRestored", s.mean_auc_restored},
                      {"aocBaseline", aoc_b},
                      {"aocFiltered", aoc_f},
                      {"reductionPercent", s.mean_reduction},
                      {"improvedFraction", s.improved_fraction},
                      {"macroF1", f1}});
    l_csv += std::to_string(seq_len) + "," + fixed(s.mean_auc_baseline, 6) + "," + fixed(s.mean_auc_filtered, 6) + "," +
             fixed(s.mean_auc_restored, 6) + "," + fixed(aoc_b, 6) + "," + fixed(aoc_f, 6) + "," +
             format_percent(s.mean_reduction) + "," + fixed(s.improved_fraction, 4) + "," + fixed(f1, 6) + "\n";
    l_bars.push_back({"L=" + std::to_string(seq_len), s.mean_auc_baseline, s.mean_auc_filtered});
    std::printf("%4zu %8s %8s %8s %9s%% %8s\n", seq_len, fixed(s.mean_auc_baseline).c_str(),
                fixed(s.mean_auc_filtered).c_str(), fixed(s.mean_auc_restored).c_str(),
                format_percent(s.mean_reduction).c_str(), fixed(f1).c_str());
    if (seq_len == cfg.seq_len) {
      main_prepared = std::move(prepared);
      main_model = std::move(model);
    }
  }
  if (main_prepared.empty()) {
    main_prepared = prepare_all(inputs, cfg);
    main_model = train_predictor(main_prepared, cfg);
  }

  json tau_rows = json::array();
  std::string tau_csv = "tau,removed,falsePositivesRemoved,truePositivesRemoved,aucFiltered,reductionPercent\n";
  for (double tau : opt.taus) {
    RunConfig c = cfg;
    c.trust_threshold = tau;
    std::vector<ScenarioEvaluation> evals;
    for (const auto& p : main_prepared) evals.push_back(evaluate_scenario(p, main_model, c));
    std::size_t removed = 0, fp = 0, tp = 0;
    for (const auto& e : evals) {
      removed += e.removed;
      fp += e.false_positives_removed;
      tp += e.true_positives_removed;
    }
    const auto s = summarize(std::move(evals));
    tau_rows.push_back({{"tau", tau},
                        {"removed", removed},
                        {"falsePositivesRemoved", fp},
                        {"truePositivesRemoved", tp},
                        {"aucFiltered", s.mean_auc_filtered},
                        {"reductionPercent", s.mean_reduction}});
    tau_csv += fixed(tau, 2) + "," + std::to_string(removed) + "," + std::to_string(fp) + "," + std::to_string(tp) + "," +
               fixed(s.mean_auc_filtered, 6) + "," + format_percent(s.mean_reduction) + "\n";
  }

  json rho_rows = json::array();
  std::string rho_csv = "rho,restored,aucFiltered,aucRestored\n";
  std::vector<CurveSeries> pr_series;
  for (double rho : opt.rhos) {
    RunConfig c = cfg;
    c.restoration_threshold = rho;
    std::vector<ScenarioEvaluation> evals;
    for (const auto& p : main_prepared) evals.push_back(evaluate_scenario(p, main_model, c));
    std::size_t restored = 0;
    for (const auto& e : evals) restored += e.restorations;
    if (rho == cfg.restoration_threshold && !evals.empty()) {
      const auto& e = evals.front();
      pr_series = {{e.baseline.label, e.baseline.curve}, {e.filtered.label, e.filtered.curve},
                   {e.restored.label, e.restored.curve}};
    }
    const auto s = summarize(std::move(evals));
    rho_rows.push_back(
        {{"rho", rho}, {"restored", restored}, {"aucFiltered", s.mean_auc_filtered}, {"aucRestored", s.mean_auc_restored}});
    rho_csv += fixed(rho, 2) + "," + std::to_string(restored) + "," + fixed(s.mean_auc_filtered, 6) + "," +
               fixed(s.mean_auc_restored, 6) + "\n";
  }

  json attr_rows = json::array();
  std::string attr_csv = "attributes,macroF1\n";
  if (opt.attributes) {
    const std::vector<std::pair<std::string, std::vector<std::size_t>>> subsets = {
        {"a1", {0}}, {"a2", {1}}, {"a3", {2}}, {"a4", {3}}, {"all", {0, 1, 2, 3}}};
    for (const auto& [label, subset] : subsets) {
      const double f1 = test_macro_f1(main_prepared, train_predictor(main_prepared, cfg, subset));
      attr_rows.push_back({{"attributes", label}, {"macroF1", f1}});
      attr_csv += label + "," + fixed(f1, 6) + "\n";
      std::printf("attributes %-4s macro F1 %s\n", label.c_str(), fixed(f1).c_str());
    }
  }

  const json doc = {{"seqLen", std::move(l_rows)},
                    {"trustThreshold", std::move(tau_rows)},
                    {"restorationThreshold", std::move(rho_rows)},
                    {"attributes", std::move(attr_rows)}};
  const std::vector<std::pair<std::string, std::string>> files = {{"ablate.json", doc.dump(1) + "\n"},
                                                                  {"ablate_L.csv", l_csv},
                                                                  {"ablate_tau.csv", tau_csv},
                                                                  {"ablate_rho.csv", rho_csv},
                                                                  {"ablate_attributes.csv", attr_csv}};
  for (const auto& [file, text] : files) {
    write_text(ctx.dir / file, text);
    manifest.output(ctx.dir / file);
  }
  write_stream(ctx.dir / "ablate_L_auc.svg", manifest, [&](std::ostream& out) {
    write_delta_bars_svg(l_bars, "PR AUC with and without the predictor", "PR AUC", out);
  });
  if (!pr_series.empty()) {
    write_stream(ctx.dir / "ablate_pr.svg", manifest,
                 [&](std::ostream& out) { write_pr_svg(pr_series, main_prepared.front().name, out); });
  }
  manifest.write(ctx.dir);
  return 0;
}

}  // namespace smr::cli
