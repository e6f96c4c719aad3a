#include "surplusect/crofton_statistics.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "surplusect/bounds_tables.hpp"
#include "surplusect/errors.hpp"

namespace surplusect {

namespace {

constexpr std::uint64_t kCounterSalt = 0xC0057A27ULL;
constexpr std::uint64_t kEscalationSalt = 0xE5CA1A7EULL;

struct TrialOutcome {
  int count = 0;
  int resamples = 0;
};

TrialOutcome run_one(int n, std::uint64_t seed, std::uint64_t k, const TrialCounter& counter,
                     const TrialOptions& options) {
  const RngState base{seed, k};
  for (int retry = 0; retry <= options.max_resamples; ++retry) {
    const RngState key = retry == 0 ? base : base.derive(static_cast<std::uint64_t>(retry));
    const UnitaryMatrix g = haar_unitary(n + 1, key);
    const CountResult r = counter(g, key.derive(kCounterSalt));
    if (r.transverse && !r.degenerate) return TrialOutcome{r.count, retry};
  }
  throw BudgetExceeded("trial " + std::to_string(k) + " exceeded " +
                       std::to_string(options.max_resamples) + " degenerate resamples");
}

void validate_run(int n, std::int64_t samples) {
  if (n < 1 || n > 4) throw InvalidArgument("run_clifford_trials: n must be in [1, 4]");
  if (samples < 1) throw InvalidArgument("run_clifford_trials: samples must be >= 1");
}

Tally collect(int n, std::int64_t samples, std::uint64_t seed, const std::string& method,
              const std::vector<TrialOutcome>& outcomes) {
  Tally t;
  t.n = n;
  t.samples = samples;
  t.seed = seed;
  t.method = method;
  for (const auto& o : outcomes) {
    ++t.histogram[o.count];
    t.degenerate_resamples += o.resamples;
  }
  return t;
}

std::string parity_diagnostic(const UnitaryMatrix& g, const CountResult& r) {
  std::ostringstream msg;
  msg << "certified-transverse count " << r.count << " is not an admissible Clifford count for n = "
      << g.dim() - 1 << " (min sigma " << r.min_jacobian_sigma << "); g = "
      << dump_json(complex_matrix_to_json(g.matrix()), -1);
  return msg.str();
}

}  // namespace

void Tally::merge(const Tally& other) {
  if (other.n != n || other.seed != seed || other.method != method) {
    throw InvalidArgument("Tally::merge: incompatible tallies");
  }
  samples += other.samples;
  degenerate_resamples += other.degenerate_resamples;
  for (const auto& [count, occurrences] : other.histogram) histogram[count] += occurrences;
}

std::int64_t Tally::total() const {
  std::int64_t sum = 0;
  for (const auto& [count, occurrences] : histogram) sum += occurrences;
  return sum;
}

Tally run_trials(int n, std::int64_t samples, std::uint64_t seed, const TrialCounter& counter,
                 const TrialOptions& options, const std::string& method) {
  validate_run(n, samples);
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(samples));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < samples; ++k) {
    try {
      outcomes[static_cast<std::size_t>(k)] =
          run_one(n, seed, static_cast<std::uint64_t>(k), counter, options);
    } catch (...) {
#pragma omp critical(surplusect_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return collect(n, samples, seed, method, outcomes);
}

Tally run_trials_serial(int n, std::int64_t samples, std::uint64_t seed,
                        const TrialCounter& counter, const TrialOptions& options,
                        const std::string& method) {
  validate_run(n, samples);
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t k = 0; k < samples; ++k) {
    outcomes.push_back(run_one(n, seed, static_cast<std::uint64_t>(k), counter, options));
  }
  return collect(n, samples, seed, method, outcomes);
}

TrialCounter clifford_counter(int n, const TrialOptions& options) {
  if (n == 2) {
    return [](const UnitaryMatrix& g, const RngState&) {
      CountResult r = count_conic_pencil(clifford_quadric_system(g));
      if (r.transverse && !r.degenerate && !admissible_clifford_count(2, r.count)) {
        throw ParityViolation(parity_diagnostic(g, r));
      }
      return r;
    };
  }
  return [n, options](const UnitaryMatrix& g, const RngState& rng) {
    const QuadricSystem sys = clifford_quadric_system(g);
    CountResult r = count_clifford_multistart(sys, options.starts_per_dim, rng);
    if (r.transverse && !r.degenerate && !admissible_clifford_count(n, r.count)) {
      // most likely a root whose basin the starts missed
      r = count_clifford_multistart(sys, options.starts_per_dim * options.escalation_factor,
                                    rng.derive(kEscalationSalt));
      if (r.transverse && !r.degenerate && !admissible_clifford_count(n, r.count)) {
        throw ParityViolation(parity_diagnostic(g, r));
      }
    }
    return r;
  };
}

namespace {
std::string clifford_method(int n) { return n == 2 ? "pencil" : "multistart"; }
}  // namespace

Tally run_clifford_trials(int n, std::int64_t samples, std::uint64_t seed,
                          const TrialOptions& options) {
  validate_run(n, samples);
  return run_trials(n, samples, seed, clifford_counter(n, options), options, clifford_method(n));
}

Tally run_clifford_trials_serial(int n, std::int64_t samples, std::uint64_t seed,
                                 const TrialOptions& options) {
  validate_run(n, samples);
  return run_trials_serial(n, samples, seed, clifford_counter(n, options), options,
                           clifford_method(n));
}

ProbabilityEstimate wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) throw InvalidArgument("wilson_interval: trials must be positive");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return ProbabilityEstimate{p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

DistributionReport distribution_report(const Tally& t) {
  const std::int64_t total = t.total();
  if (total <= 0) throw InvalidArgument("distribution_report: empty tally");
  DistributionReport r;
  r.n = t.n;
  r.samples = total;
  r.exact_method = t.method == "pencil";
  r.min_intersections = min_intersections(t.n);
  r.expected_mean = expected_count(t.n);
  r.stirling_mean = stirling_mean(t.n);

  const double count_total = static_cast<double>(total);
  double mean = 0.0;
  for (const auto& [count, occurrences] : t.histogram) {
    r.probabilities[count] = wilson_interval(occurrences, total);
    mean += count * static_cast<double>(occurrences);
  }
  mean /= count_total;
  double ss = 0.0;
  for (const auto& [count, occurrences] : t.histogram) {
    ss += (count - mean) * (count - mean) * static_cast<double>(occurrences);
  }
  const double variance = total > 1 ? ss / (count_total - 1.0) : 0.0;
  r.mean = mean;
  r.mean_standard_error = std::sqrt(variance / count_total);
  r.mean_surplusection = mean - r.min_intersections;
  double locus = 0.0;
  for (const auto& [count, estimate] : r.probabilities) {
    if (count > r.min_intersections) locus += estimate.estimate;
  }
  r.surplusection_locus_measure = locus;
  return r;
}

double chi_square_consistency(const Tally& t, const std::map<int, double>& reference) {
  const std::int64_t total = t.total();
  if (total <= 0) throw InvalidArgument("chi_square_consistency: empty tally");
  double mass = 0.0;
  for (const auto& [count, p] : reference) {
    if (p < 0.0) throw InvalidArgument("chi_square_consistency: negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw InvalidArgument("chi_square_consistency: reference probabilities must sum to 1");
  }
  for (const auto& [count, occurrences] : t.histogram) {
    const auto it = reference.find(count);
    if (occurrences > 0 && (it == reference.end() || it->second == 0.0)) return 0.0;
  }
  double chi2 = 0.0;
  int cells = 0;
  for (const auto& [count, p] : reference) {
    if (p == 0.0) continue;
    const double expected = p * static_cast<double>(total);
    if (expected < 5.0) {
      throw InsufficientCells("chi_square_consistency: expected count " + std::to_string(expected) +
                              " < 5 for cell " + std::to_string(count));
    }
    const auto it = t.histogram.find(count);
    const double observed = it == t.histogram.end() ? 0.0 : static_cast<double>(it->second);
    chi2 += (observed - expected) * (observed - expected) / expected;
    ++cells;
  }
  if (cells < 2) return 1.0;
  return boost::math::gamma_q(0.5 * (cells - 1), 0.5 * chi2);
}

std::map<int, double> clifford_n2_law() {
  const double p4 = std::numbers::pi / std::sqrt(3.0) - 1.0;
  return {{2, 1.0 - p4}, {4, p4}};
}

Json tally_to_json(const Tally& t) {
  Json hist = Json::object();
  for (const auto& [count, occurrences] : t.histogram) hist[std::to_string(count)] = occurrences;
  return Json{{"n", t.n},
              {"samples", t.samples},
              {"seed", t.seed},
              {"method", t.method},
              {"histogram", hist},
              {"degenerate_resamples", t.degenerate_resamples}};
}

Json report_to_json(const Tally& t, const DistributionReport& r) {
  Json j = tally_to_json(t);
  Json probs = Json::object();
  for (const auto& [count, e] : r.probabilities) {
    probs[std::to_string(count)] = {
        {"estimate", e.estimate}, {"wilson_lower", e.lower}, {"wilson_upper", e.upper}};
  }
  j["probabilities"] = probs;
  j["mean"] = r.mean;
  j["mean_standard_error"] = r.mean_standard_error;
  j["expected_mean"] = r.expected_mean;
  j["stirling_mean"] = r.stirling_mean;
  j["min_intersections"] = r.min_intersections;
  j["mean_surplusection"] = r.mean_surplusection;
  j["ss_locus_measure"] = r.surplusection_locus_measure;
  j["estimates"] = r.exact_method ? "empirical, exact per-sample counts"
                                  : "empirical, multistart counts (completeness heuristic)";
  return j;
}

}  // namespace surplusect
