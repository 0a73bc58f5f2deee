#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rdetect/analysis.hpp"
#include "rdetect/configuration.hpp"
#include "rdetect/protocol.hpp"
#include "rdetect/simulator.hpp"

namespace rdetect {

struct PotentialValue {
  double value = 0.0;
  // D is outside the clearing lemma's hypothesis; it contributes 0.
  bool detector_present = false;
};

/// Sum over molecules of 3^-level for detect species at level >= 1; the
/// neutral species and D contribute 0.
PotentialValue potential(const Configuration& config, const Protocol& p);

/// Largest ratio (potential after)/(potential before) over non-null rules
/// whose reactants are both non-D with positive combined potential.
double max_pair_contraction(const Protocol& p);

/// ceil(1.5 * n * ln(n * 3^s * n^theta)) interactions.
Count clearing_bound(Count n, int s, double theta = 1.0);

struct DecayConfig {
  Protocol protocol;
  Configuration init;
  LeakModel leak;
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  double theta = 1.0;
  // Runs stop at horizon_factor * t* if not cleared.
  double horizon_factor = 4.0;
  // Interactions between recorded potential samples; 0 means n.
  Count record_every = 0;
};

struct DecayReport {
  Count t_star = 0;
  std::vector<std::optional<Count>> clearing_times;
  std::size_t cleared_by_t_star = 0;
  double cleared_fraction = 0.0;

  std::vector<Count> times;
  std::vector<double> mean_phi;

  // Per-step ratio phi_{t+1}/phi_t over steps with phi_t > 0, pooled over runs.
  double mean_step_ratio = 1.0;
  double step_ratio_stderr = 0.0;
  std::size_t ratio_samples = 0;
  double contraction_bound = 1.0;  // 1 - 2/(3n)
};

/// Runs the clearing experiment without D and without leaks. Throws
/// AnalysisError if the leak model is active or D is present.
DecayReport decay_experiment(const DecayConfig& config);

struct DistanceReport {
  double total_variation = 0.0;
  double cumulative_gap = 0.0;  // max_c |sum_{l<=c} (emp - ref)|
};

/// Both vectors are indexed by level. Throws AnalysisError on a size mismatch.
DistanceReport tv_distance(std::span<const double> empirical, std::span<const double> analytic);

/// Profile as per-species fractions in species-id order: D gets p[0], Xi
/// gets p[i], the neutral species gets 1 - p_leq[s].
std::vector<double> profile_species_fractions(const StationaryProfile& profile,
                                              const Protocol& p);

/// Reorders species-id fractions into level order.
std::vector<double> level_fractions(std::span<const double> species_fractions,
                                    const Protocol& p);

/// Multinomial draw of a configuration from a profile, keeping exactly k D.
Configuration sample_configuration(const StationaryProfile& profile, const Protocol& p,
                                   Rng& rng);

/// Mean-field reference for a simulation setup: no-leak for beta = 0,
/// false-positive for k = 0, false-negative otherwise.
StationaryProfile reference_profile(const SimParams& params);

struct ConvergenceEstimate {
  // Earliest recorded parallel time after which the gap stays below epsilon.
  std::optional<double> parallel_time;
  double final_gap = 0.0;
  // parallel_time / log2(n), i.e. C in t = C * n * log2(n) interactions.
  std::optional<double> fitted_constant;
  std::vector<double> times;  // parallel time of each snapshot
  std::vector<double> gaps;
};

/// Cumulative gap between the ensemble-mean level fractions of `runs`
/// trajectories and `reference`, scanned over the recorded snapshots.
ConvergenceEstimate estimate_convergence_time(const SimParams& params, double epsilon,
                                              std::size_t runs,
                                              const StationaryProfile& reference);

ConvergenceEstimate estimate_convergence_time(const SimParams& params, double epsilon,
                                              std::size_t runs);

struct LogFit {
  double slope = 0.0;  // per unit of ln n
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of y against ln x.
LogFit fit_log_trend(std::span<const double> x, std::span<const double> y);

}  // namespace rdetect
