#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "surplusect/core_geometry.hpp"
#include "surplusect/intersection_counting.hpp"
#include "surplusect/json_io.hpp"

namespace surplusect {

/// Empirical law of an intersection count over Monte Carlo trials.
struct Tally {
  int n = 0;
  std::int64_t samples = 0;
  std::map<int, std::int64_t> histogram;
  std::int64_t degenerate_resamples = 0;
  std::uint64_t seed = 0;
  /// "pencil" (exact, n = 2) or "multistart" (heuristic completeness).
  std::string method;

  /// Commutative merge; both sides must describe the same (n, seed, method).
  void merge(const Tally& other);
  std::int64_t total() const;
};

struct ProbabilityEstimate {
  double estimate = 0;
  double lower = 0;  // Wilson 95%
  double upper = 0;
};

struct DistributionReport {
  int n = 0;
  std::int64_t samples = 0;
  std::map<int, ProbabilityEstimate> probabilities;
  double mean = 0;
  double mean_standard_error = 0;
  double expected_mean = 0;
  double stirling_mean = 0;
  int min_intersections = 0;
  double mean_surplusection = 0;
  double surplusection_locus_measure = 0;
  bool exact_method = false;
};

struct TrialOptions {
  int starts_per_dim = kDefaultStartsPerDim;
  int max_resamples = 100;
  /// Multistart counts failing the parity/range check are recounted once with
  /// this many times the starts before the run is aborted.
  int escalation_factor = 8;
};

/// Counts K cap g RP^n for one Haar sample g. `rng` is available for any
/// randomized counting (e.g. multistart Newton starts).
using TrialCounter = std::function<CountResult(const UnitaryMatrix& g, const RngState& rng)>;

/// Monte Carlo over Haar-random g for an arbitrary counter: the hook for
/// tori other than the standard Clifford torus. Parallel over trial index;
/// the result depends only on (n, samples, seed, counter).
Tally run_trials(int n, std::int64_t samples, std::uint64_t seed, const TrialCounter& counter,
                 const TrialOptions& options = {}, const std::string& method = "custom");

/// Serial reference for run_trials; identical output.
Tally run_trials_serial(int n, std::int64_t samples, std::uint64_t seed,
                        const TrialCounter& counter, const TrialOptions& options = {},
                        const std::string& method = "custom");

/// Default counter for the standard Clifford torus: pencil for n = 2,
/// multistart otherwise, with one escalated recount on a parity failure.
TrialCounter clifford_counter(int n, const TrialOptions& options = {});

/// T^n cap g RP^n over `samples` Haar draws, 1 <= n <= 4. Degenerate draws are
/// resampled from a derived stream and counted in degenerate_resamples.
Tally run_clifford_trials(int n, std::int64_t samples, std::uint64_t seed,
                          const TrialOptions& options = {});
Tally run_clifford_trials_serial(int n, std::int64_t samples, std::uint64_t seed,
                                 const TrialOptions& options = {});

DistributionReport distribution_report(const Tally& t);

/// Wilson score interval at normal quantile z.
ProbabilityEstimate wilson_interval(std::int64_t successes, std::int64_t trials,
                                    double z = 1.959963984540054);

/// Pearson chi-square p-value of the tally against `reference` (count -> probability).
/// Throws InsufficientCells if any expected cell count is below 5.
double chi_square_consistency(const Tally& t, const std::map<int, double>& reference);

/// Exact n = 2 law: {2: 2 - pi/sqrt(3), 4: pi/sqrt(3) - 1}.
std::map<int, double> clifford_n2_law();

Json tally_to_json(const Tally& t);
Json report_to_json(const Tally& t, const DistributionReport& r);

}  // namespace surplusect
