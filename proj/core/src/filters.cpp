#include "smr/filters.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "smr/error.hpp"

namespace smr {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kept:
      return "kept";
    case Verdict::removed:
      return "removed";
    case Verdict::restored:
      return "restored";
  }
  return "kept";
}

std::vector<MatchDecision> remove_matches(const MatchSet& matches, std::span<const PredictionScores> preds,
                                          const FilterConfig& cfg) {
  std::vector<const PredictionScores*> by_query(matches.queries(), nullptr);
  for (const auto& p : preds) {
    if (p.query < by_query.size()) by_query[p.query] = &p;
  }

  std::vector<MatchDecision> out;
  out.reserve(matches.queries());
  for (std::size_t j = 0; j < matches.queries(); ++j) {
    MatchDecision d;
    d.query = j;
    d.original_ref = matches.best_ref(j);
    d.final_ref = d.original_ref;
    if (j >= matches.first_scored()) {
      const auto* p = by_query[j];
      if (!p) throw CoverageError("no prediction for query " + std::to_string(j));
      d.removal_score = p->removal_score;
      if (p->removal_score >= cfg.trust_threshold) {
        d.verdict = Verdict::removed;
        d.final_ref.reset();
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<MatchDecision> restore_matches(std::vector<MatchDecision> decisions, const MatchSet& matches,
                                           const CandidateScorer& scorer, const FilterConfig& cfg) {
  if (cfg.restoration_depth == 0) throw RangeError("restoration depth must be >= 1");
  if (matches.depth() < cfg.restoration_depth + 1) {
    throw RangeError("match set ranks " + std::to_string(matches.depth()) + " references, restoration needs " +
                     std::to_string(cfg.restoration_depth + 1));
  }
  for (auto& d : decisions) {
    if (d.verdict != Verdict::removed) continue;
    const auto ranked = matches.ranked(d.query);
    d.restore_scores.clear();
    std::size_t best_rank = 0;
    double best_score = -1.0;
    for (std::size_t r = 1; r <= cfg.restoration_depth; ++r) {
      const double s = scorer(d.query, r);
      d.restore_scores.push_back(s);
      if (s > best_score) {
        best_score = s;
        best_rank = r;
      }
    }
    if (best_rank != 0 && best_score >= cfg.restoration_threshold) {
      d.verdict = Verdict::restored;
      d.final_ref = ranked[best_rank];
    }
  }
  return decisions;
}

std::vector<MatchDecision> restore_matches(std::vector<MatchDecision> decisions, const MatchSet& matches,
                                           const AttributeProvider& attrs, const MlpModel& model,
                                           const FilterConfig& cfg) {
  const CandidateScorer scorer = [&](std::size_t query, std::size_t rank) {
    return predict(model, attrs(query, rank)).keep_score();
  };
  return restore_matches(std::move(decisions), matches, scorer, cfg);
}

void write_decisions_csv(std::span<const MatchDecision> decisions, std::ostream& out) {
  out << "query,original_ref,verdict,final_ref,removal_score\n";
  for (const auto& d : decisions) {
    out << d.query << ',' << d.original_ref << ',' << to_string(d.verdict) << ',';
    if (d.final_ref) out << *d.final_ref;
    out << ',' << format_double(d.removal_score) << '\n';
  }
}

std::vector<MatchDecision> read_decisions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("query,original_ref,verdict,final_ref,removal_score", 0) != 0) {
    throw FormatError("decisions csv must start with header 'query,original_ref,verdict,final_ref,removal_score'");
  }
  std::vector<MatchDecision> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() == 4) fields.emplace_back();
    if (fields.size() != 5) throw FormatError("decisions line " + std::to_string(lineno) + ": expected 5 fields");
    try {
      MatchDecision d;
      d.query = std::stoull(fields[0]);
      d.original_ref = std::stoull(fields[1]);
      if (fields[2] == "kept") {
        d.verdict = Verdict::kept;
      } else if (fields[2] == "removed") {
        d.verdict = Verdict::removed;
      } else if (fields[2] == "restored") {
        d.verdict = Verdict::restored;
      } else {
        throw FormatError("decisions line " + std::to_string(lineno) + ": unknown verdict '" + fields[2] + "'");
      }
      if (!fields[3].empty()) d.final_ref = std::stoull(fields[3]);
      d.removal_score = fields[4].empty() ? 0.0 : std::stod(fields[4]);
      if ((d.verdict == Verdict::removed) == d.final_ref.has_value()) {
        throw FormatError("decisions line " + std::to_string(lineno) + ": final_ref inconsistent with verdict");
      }
      out.push_back(std::move(d));
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception&) {
      throw FormatError("decisions line " + std::to_string(lineno) + ": unparsable field");
    }
  }
  return out;
}

}  // namespace smr
