#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rdetect/configuration.hpp"
#include "rdetect/protocol.hpp"
#include "rdetect/simulator.hpp"

namespace rdetect {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProfileMode { no_leak, false_positive, false_negative };

std::string_view to_string(ProfileMode mode);

/// Per-level stationary probabilities of a single molecule: level 0 is D,
/// levels 1..s are X1..Xs. p_leq[i] is the probability of level <= i.
///
/// These are mean-field values: a molecule's partner is treated as an
/// independent draw from the stationary law, so they differ from the exact
/// finite-n chain by O(1/n). At n = 2, k = 1, s = 1 the exact chain detects
/// with probability 1 while the formula gives 0.75.
struct StationaryProfile {
  std::vector<double> p_leq;
  std::vector<double> p;
  Count n = 0;
  Count k = 0;
  double beta = 0.0;
  int s = 0;
  ProfileMode mode = ProfileMode::no_leak;

  // false_positive only: 1 - (1 - beta/2n)^(2^i - 1) and its largest
  // deviation from the exact recurrence.
  std::vector<double> p_leq_closed_form;
  double closed_form_discrepancy = 0.0;
  // false_negative only: (1 - 1/e) * (1 - beta/2n)^ceil(log2 n).
  std::optional<double> detect_lower_bound;
};

/// p_leq[i] = 1 - (1 - k/n)^(2^i).
StationaryProfile stationary_no_leak(Count n, Count k, int s);

/// k = 0 with every leak producing X1:
///   1 - p_leq[i] = (1 - beta/n)/(1 - beta/2n) * (1 - p_leq[i-1])^2,  p_leq[0] = 0.
StationaryProfile stationary_false_positive(Count n, double beta, int s);

/// k >= 1 with every leak producing N:
///   p_leq[i] = (1 - beta/2n) * (1 - (1 - p_leq[i-1])^2),  p_leq[0] = k/n.
StationaryProfile stationary_false_negative(Count n, Count k, double beta, int s);

/// p_leq[s], the stationary probability that a sampled molecule outputs detect.
double detect_probability(const StationaryProfile& profile);

struct TheoremBounds {
  double false_positive = 0.0;  // 1 - e^-beta
  double false_negative = 0.0;  // 1/e + beta * log2(n) / n, O-constant fixed to 1
};

TheoremBounds theorem_bounds(Count n, double beta);

/// Brute-force Markov chain over all configurations of a protocol at size n,
/// with transition probabilities identical to Stepper's step distribution.
struct ExactChain {
  std::vector<std::vector<Count>> states;
  // Sparse rows: (target state, probability).
  std::vector<std::vector<std::pair<std::size_t, double>>> transitions;
  std::size_t initial_state = 0;

  // Long-run law started from initial_state.
  std::vector<double> stationary;
  std::size_t iterations = 0;
  double residual = 0.0;  // max |pi P - pi|
  std::size_t reachable_states = 0;
  std::size_t support_states = 0;  // states holding limit mass above 1e-8
  bool absorbing = false;          // limit mass sits on absorbing states
  bool has_transient = false;      // reachable states carry no limit mass

  std::vector<double> species_marginal;  // expected fraction per species
  double detect_marginal = 0.0;

  std::optional<std::size_t> index_of(std::span<const Count> counts) const;
};

/// Number of count vectors over `species` species summing to n, saturating
/// at SIZE_MAX.
std::size_t configuration_space_size(Count n, std::size_t species);

/// Enumerates every configuration, builds the step matrix and iterates the
/// lazy chain (P + I)/2 from `init` until max |pi P - pi| < 1e-10 or 10^6
/// iterations. Throws AnalysisError when the space exceeds `max_states` or
/// the iteration does not converge.
ExactChain exact_stationary_small(const Protocol& p, const Configuration& init,
                                  const LeakModel& leak,
                                  std::size_t max_states = 1'000'000);

/// Starts from k D molecules and n - k N molecules.
ExactChain exact_stationary_small(const Protocol& p, Count n, const LeakModel& leak,
                                  Count k, std::size_t max_states = 1'000'000);

}  // namespace rdetect
