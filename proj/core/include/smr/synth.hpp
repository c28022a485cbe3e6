#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smr/matrix.hpp"

namespace smr {

/// Lowers D by `strength` on rows centre +- half_width for queries in
/// [query_begin, query_end), where centre = ref_index + slope * (j - query_begin).
/// slope 1 is a sequence-consistent false trajectory, slope 0 a fixed set of
/// references that resemble everything (perceptual aliasing).
struct AliasBand {
  std::size_t ref_index = 0;
  double strength = 0.0;
  std::size_t query_begin = 0;
  std::size_t query_end = 0;
  std::size_t half_width = 0;
  int slope = 1;
};

/// Raises D by `strength` on rows g(j) +- half_width for queries in
/// [query_begin, query_end), hiding the true match from single frames.
struct BurstError {
  std::size_t query_begin = 0;
  std::size_t query_end = 0;
  double strength = 0.0;
  std::size_t half_width = 2;
};

/// Base distance 1 - margin * exp(-(i - j)^2 / (2 width^2)) with g(j) = j,
/// plus Gaussian noise, then alias bands and bursts in listed order.
struct ScenarioSpec {
  std::string name = "scenario";
  std::size_t refs = 600;
  std::size_t queries = 600;
  double noise_sigma = 0.0;
  double margin = 0.5;
  double width = 1.0;
  std::vector<AliasBand> alias_bands;
  std::vector<BurstError> bursts;
  std::uint64_t seed = 0;
  std::size_t tolerance = 2;
};

struct Scenario {
  std::string name;
  ScenarioSpec spec;
  DistanceMatrix distances;
  GroundTruth truth;
};

/// SpecError when refs != queries, a range leaves the matrix, or a strength,
/// sigma, margin or width is negative.
Scenario generate(const ScenarioSpec& spec);

/// Fixed battery of R = Q = 600 scenarios mixing noise, bursts and aliasing
/// so that all four outcome classes occur at L = 4. noise_scale multiplies
/// every scenario's noise sigma.
std::vector<Scenario> scenario_battery(std::uint64_t seed, double noise_scale = 1.0);

/// Fraction of queries whose single-frame argmin is within tolerance.
double single_frame_accuracy(const DistanceMatrix& d, const GroundTruth& gt);

/// JSON manifest describing a scenario spec.
std::string spec_to_json(const ScenarioSpec& spec);

}  // namespace smr
