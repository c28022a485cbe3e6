#include "smr/synth.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "smr/error.hpp"
#include "smr/rng.hpp"
#include "smr/seqmatch.hpp"

namespace smr {

namespace {

void validate(const ScenarioSpec& spec) {
  if (spec.refs == 0 || spec.queries == 0) throw SpecError("scenario needs R >= 1 and Q >= 1");
  if (spec.refs != spec.queries) throw SpecError("scenarios assume one-to-one correspondence (R == Q)");
  if (spec.noise_sigma < 0.0 || spec.margin < 0.0 || !(spec.width > 0.0)) {
    throw SpecError("noise sigma and margin must be >= 0, width > 0");
  }
  for (const auto& a : spec.alias_bands) {
    if (a.strength < 0.0) throw SpecError("alias strength must be >= 0");
    if (a.query_begin > a.query_end || a.query_end > spec.queries) throw SpecError("alias query range outside matrix");
    if (a.slope < 0) throw SpecError("alias slope must be >= 0");
    if (a.query_end > a.query_begin) {
      const auto last_centre = a.ref_index + static_cast<std::size_t>(a.slope) * (a.query_end - 1 - a.query_begin);
      if (a.ref_index >= spec.refs || last_centre >= spec.refs) throw SpecError("alias band leaves the matrix");
    }
  }
  for (const auto& b : spec.bursts) {
    if (b.strength < 0.0) throw SpecError("burst strength must be >= 0");
    if (b.query_begin > b.query_end || b.query_end > spec.queries) throw SpecError("burst query range outside matrix");
  }
}

struct Placement {
  std::size_t begin;
  std::size_t end;
};

// Non-overlapping event windows of the given lengths with a guard gap, in
// random order along the query axis.
std::vector<Placement> place_events(std::size_t queries, const std::vector<std::size_t>& lengths, std::size_t gap,
                                    std::size_t lead_in, SplitMix64& rng) {
  std::size_t used = lead_in;
  for (auto len : lengths) used += len + gap;
  if (used > queries) throw SpecError("battery events do not fit the query axis");
  const std::size_t slack = queries - used;

  // Split the slack into lengths.size() + 1 random shares.
  std::vector<double> cuts(lengths.size() + 1);
  double total = 0.0;
  for (auto& c : cuts) total += (c = rng.uniform() + 0.05);
  std::vector<Placement> out;
  std::size_t pos = lead_in;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    pos += static_cast<std::size_t>(std::floor(cuts[k] / total * static_cast<double>(slack)));
    out.push_back({pos, pos + lengths[k]});
    pos += lengths[k] + gap;
  }
  return out;
}

struct BatteryRecipe {
  std::string name;
  double noise = 0.05;
  std::size_t short_bursts = 0;   // length 1..2: sequence rescues
  std::size_t long_bursts = 0;    // length 6..12: both fail, then sequence lags
  std::size_t diagonal_aliases = 0;
  std::size_t static_aliases = 0;
};

}  // namespace

Scenario generate(const ScenarioSpec& spec) {
  validate(spec);
  const std::size_t rows = spec.refs;
  const std::size_t cols = spec.queries;
  std::vector<double> v(rows * cols);
  SplitMix64 rng(spec.seed);
  const double two_w2 = 2.0 * spec.width * spec.width;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double off = static_cast<double>(i) - static_cast<double>(j);
      double d = 1.0 - spec.margin * std::exp(-off * off / two_w2);
      if (spec.noise_sigma > 0.0) d += spec.noise_sigma * rng.normal();
      v[i * cols + j] = d;
    }
  }
  for (const auto& a : spec.alias_bands) {
    for (std::size_t j = a.query_begin; j < a.query_end; ++j) {
      const auto centre = a.ref_index + static_cast<std::size_t>(a.slope) * (j - a.query_begin);
      const auto lo = centre > a.half_width ? centre - a.half_width : 0;
      const auto hi = std::min(rows - 1, centre + a.half_width);
      for (std::size_t i = lo; i <= hi; ++i) v[i * cols + j] -= a.strength;
    }
  }
  for (const auto& b : spec.bursts) {
    for (std::size_t j = b.query_begin; j < b.query_end; ++j) {
      const auto lo = j > b.half_width ? j - b.half_width : 0;
      const auto hi = std::min(rows - 1, j + b.half_width);
      for (std::size_t i = lo; i <= hi; ++i) v[i * cols + j] += b.strength;
    }
  }
  Scenario s;
  s.name = spec.name;
  s.spec = spec;
  s.distances = DistanceMatrix(rows, cols, std::move(v), {"dataset:synthetic", "scenario:" + spec.name});
  s.truth = GroundTruth::identity(cols, spec.tolerance);
  return s;
}

std::vector<Scenario> scenario_battery(std::uint64_t seed, double noise_scale) {
  constexpr std::size_t kSize = 600;
  const std::vector<BatteryRecipe> recipes = {
      {"mixed", 0.06, 10, 4, 4, 2},
      {"bursty", 0.05, 16, 6, 1, 1},
      {"aliased", 0.05, 6, 2, 7, 3},
      {"attractors", 0.06, 6, 2, 2, 7},
      {"noisy", 0.10, 8, 3, 3, 2},
      {"sparse", 0.04, 5, 2, 2, 1},
  };

  std::vector<Scenario> battery;
  SplitMix64 master(seed);
  for (const auto& recipe : recipes) {
    SplitMix64 rng(master());
    ScenarioSpec spec;
    spec.name = recipe.name;
    spec.refs = spec.queries = kSize;
    spec.noise_sigma = recipe.noise * noise_scale;
    spec.seed = rng();

    enum class Kind { short_burst, long_burst, diagonal_alias, static_alias };
    std::vector<Kind> kinds;
    kinds.insert(kinds.end(), recipe.short_bursts, Kind::short_burst);
    kinds.insert(kinds.end(), recipe.long_bursts, Kind::long_burst);
    kinds.insert(kinds.end(), recipe.diagonal_aliases, Kind::diagonal_alias);
    kinds.insert(kinds.end(), recipe.static_aliases, Kind::static_alias);
    shuffle(kinds.begin(), kinds.end(), rng);

    std::vector<std::size_t> lengths;
    for (auto k : kinds) {
      switch (k) {
        case Kind::short_burst: lengths.push_back(1 + rng.below(2)); break;
        case Kind::long_burst: lengths.push_back(6 + rng.below(7)); break;
        case Kind::diagonal_alias: lengths.push_back(6 + rng.below(9)); break;
        case Kind::static_alias: lengths.push_back(5 + rng.below(8)); break;
      }
    }
    const auto places = place_events(kSize, lengths, 12, 12, rng);

    for (std::size_t e = 0; e < kinds.size(); ++e) {
      const auto [begin, end] = places[e];
      // Alias targets sit well away from the true trajectory.
      const auto far_ref = [&](std::size_t span) {
        std::size_t ref = 0;
        do {
          ref = rng.below(kSize - span);
        } while (ref + span + 20 > begin && ref < end + 20);
        return ref;
      };
      switch (kinds[e]) {
        case Kind::short_burst:
          spec.bursts.push_back({begin, end, rng.uniform(0.55, 0.9), 2});
          break;
        case Kind::long_burst:
          spec.bursts.push_back({begin, end, rng.uniform(0.6, 1.0), 2});
          break;
        case Kind::diagonal_alias:
          spec.alias_bands.push_back({far_ref(end - begin), rng.uniform(0.65, 1.1), begin, end, 0, 1});
          break;
        case Kind::static_alias:
          spec.alias_bands.push_back({far_ref(8), rng.uniform(0.6, 0.9), begin, end, 3 + rng.below(3), 0});
          break;
      }
    }
    auto scenario = generate(spec);
    battery.push_back(std::move(scenario));
  }
  return battery;
}

double single_frame_accuracy(const DistanceMatrix& d, const GroundTruth& gt) {
  gt.validate_against(d);
  std::size_t correct = 0;
  for (std::size_t j = 0; j < d.cols(); ++j) correct += gt.is_correct(j, column_argmin(d, j)) ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(d.cols());
}

std::string spec_to_json(const ScenarioSpec& spec) {
  using nlohmann::json;
  json aliases = json::array();
  for (const auto& a : spec.alias_bands) {
    aliases.push_back({{"refIndex", a.ref_index},
                       {"strength", a.strength},
                       {"queryBegin", a.query_begin},
                       {"queryEnd", a.query_end},
                       {"halfWidth", a.half_width},
                       {"slope", a.slope}});
  }
  json bursts = json::array();
  for (const auto& b : spec.bursts) {
    bursts.push_back({{"queryBegin", b.query_begin},
                      {"queryEnd", b.query_end},
                      {"strength", b.strength},
                      {"halfWidth", b.half_width}});
  }
  json doc = {{"name", spec.name},          {"refs", spec.refs},        {"queries", spec.queries},
              {"noiseSigma", spec.noise_sigma}, {"margin", spec.margin}, {"width", spec.width},
              {"seed", spec.seed},          {"tolerance", spec.tolerance}, {"aliasBands", std::move(aliases)},
              {"bursts", std::move(bursts)}};
  return doc.dump(1);
}

}  // namespace smr
