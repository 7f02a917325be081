#pragma once

// Seeded Monte Carlo experiments over random alpha. Samples run in parallel
// but every field of an ExperimentResult depends only on the parameters and
// the master seed.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "malpha/cf.hpp"
#include "malpha/metric.hpp"
#include "malpha/sums.hpp"

namespace malpha {

struct SampleRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;  // 0 for injected samples
  std::string label;       // "random" or the injected alpha's description
  std::vector<double> stats;  // one value per ExperimentResult::stat_names entry
  nlohmann::json details = nlohmann::json::object();
};

struct ExperimentResult {
  std::string experiment;
  std::uint64_t master_seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> stat_names;
  std::vector<SampleRecord> samples;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;

  double summary_value(const std::string& name) const;  // throws if absent
  std::vector<double> stat_column(const std::string& name) const;

  nlohmann::ordered_json to_json() const;
  // Schema comment line, header and one row per sample.
  std::string samples_csv() const;
};

struct ExperimentOptions {
  std::uint64_t master_seed = 0;
  std::uint64_t samples = 0;  // random samples N
  std::uint32_t bits = 0;     // 0: chosen from the depth
  // Fixed alpha evaluated after the random samples, labelled by describe().
  std::vector<AlphaSpec> injected;
  SumOptions sum;
};

// Default RandomDyadic precision for depth K: at least 4096 bits and enough
// for the horizon to exceed K with a 1024-bit margin, in whole 64-bit words.
std::uint32_t default_bits(std::size_t K);

// (1/K) ln q_K and (1/K) sum ln a_i per sample, against pi^2/(12 ln 2) and
// the series value of ln K0.
ExperimentResult levy_experiment(std::size_t K, const ExperimentOptions& opts);

// Exceedances a_k > phi(k), k <= K, counted in the window [ceil(K/2), K].
ExperimentResult khinchin_io_experiment(const PhiSpec& phi, std::size_t K, const ExperimentOptions& opts);

// R(M) = S_M / (M ln M phi(ln M)) along the grid {10^2, 10^3, ...} united with
// the sample's convergent denominators in [10^2, M_max]. The running maximum
// is read off at each decade prefix.
ExperimentResult growth_criterion_experiment(const PhiSpec& phi, std::uint64_t M_max,
                                             const ExperimentOptions& opts);

inline constexpr std::uint64_t kGrowthGridStart = 100;

// Whether a_{k+1} <= q_k for every k in [k_min, K-1].
ExperimentResult eventual_event_experiment(std::size_t K, std::size_t k_min, const ExperimentOptions& opts);

// Median of a copy of `v` (mean of the middle pair for even sizes).
double median(std::vector<double> v);
// Linear-interpolation quantile, p in [0, 1].
double quantile(std::vector<double> v, double p);

}  // namespace malpha
