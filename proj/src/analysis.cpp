#include "rdetect/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>

#include "rdetect/robust_detect.hpp"

namespace rdetect {

std::string_view to_string(ProfileMode mode) {
  switch (mode) {
    case ProfileMode::no_leak: return "no_leak";
    case ProfileMode::false_positive: return "false_positive";
    case ProfileMode::false_negative: return "false_negative";
  }
  return "?";
}

namespace {

void check_common(Count n, int s) {
  if (n < 1) throw AnalysisError("population size must be >= 1");
  if (s < 1) throw AnalysisError("level count s must be >= 1");
}

// Fills p from p_leq and clamps rounding noise.
void finish(StationaryProfile& prof) {
  prof.p.resize(prof.p_leq.size());
  for (std::size_t i = 0; i < prof.p_leq.size(); ++i) {
    prof.p_leq[i] = std::clamp(prof.p_leq[i], 0.0, 1.0);
    prof.p[i] = i == 0 ? prof.p_leq[0] : std::max(0.0, prof.p_leq[i] - prof.p_leq[i - 1]);
  }
}

StationaryProfile make_profile(Count n, Count k, double beta, int s, ProfileMode mode) {
  StationaryProfile prof;
  prof.n = n;
  prof.k = k;
  prof.beta = beta;
  prof.s = s;
  prof.mode = mode;
  return prof;
}

// 1 - exp(log_q), accurate for small |log_q|.
double one_minus_exp(double log_q) { return -std::expm1(log_q); }

}  // namespace

StationaryProfile stationary_no_leak(Count n, Count k, int s) {
  check_common(n, s);
  if (k < 0 || k > n) throw AnalysisError("k must lie in [0, n]");
  auto prof = make_profile(n, k, 0.0, s, ProfileMode::no_leak);
  const double log_q0 = std::log1p(-static_cast<double>(k) / static_cast<double>(n));
  prof.p_leq.resize(static_cast<std::size_t>(s) + 1);
  prof.p_leq[0] = static_cast<double>(k) / static_cast<double>(n);
  for (int i = 1; i <= s; ++i) {
    prof.p_leq[i] = k == n ? 1.0 : one_minus_exp(std::ldexp(log_q0, i));
  }
  finish(prof);
  return prof;
}

StationaryProfile stationary_false_positive(Count n, double beta, int s) {
  check_common(n, s);
  if (beta < 0.0) throw AnalysisError("beta must be >= 0");
  if (beta > static_cast<double>(n)) throw AnalysisError("beta/n must not exceed 1");
  auto prof = make_profile(n, 0, beta, s, ProfileMode::false_positive);
  const double rate = beta / static_cast<double>(n);
  const double log_ratio = std::log1p(-rate) - std::log1p(-rate / 2.0);
  const double log_half = std::log1p(-rate / 2.0);
  prof.p_leq.assign(static_cast<std::size_t>(s) + 1, 0.0);
  prof.p_leq_closed_form.assign(static_cast<std::size_t>(s) + 1, 0.0);
  double log_q = 0.0;
  for (int i = 1; i <= s; ++i) {
    log_q = log_ratio + 2.0 * log_q;
    prof.p_leq[i] = one_minus_exp(log_q);
    prof.p_leq_closed_form[i] = one_minus_exp((std::ldexp(1.0, i) - 1.0) * log_half);
    prof.closed_form_discrepancy = std::max(
        prof.closed_form_discrepancy, std::abs(prof.p_leq[i] - prof.p_leq_closed_form[i]));
  }
  finish(prof);
  return prof;
}

StationaryProfile stationary_false_negative(Count n, Count k, double beta, int s) {
  check_common(n, s);
  if (k < 1) throw AnalysisError("false-negative analysis needs k >= 1");
  if (k > n) throw AnalysisError("k must not exceed n");
  if (beta < 0.0) throw AnalysisError("beta must be >= 0");
  auto prof = make_profile(n, k, beta, s, ProfileMode::false_negative);
  const double damp = 1.0 - beta / (2.0 * static_cast<double>(n));
  prof.p_leq.resize(static_cast<std::size_t>(s) + 1);
  prof.p_leq[0] = static_cast<double>(k) / static_cast<double>(n);
  for (int i = 1; i <= s; ++i) {
    const double prev = prof.p_leq[i - 1];
    // 1 - (1 - prev)^2 without cancellation.
    prof.p_leq[i] = damp * prev * (2.0 - prev);
  }
  prof.detect_lower_bound =
      (1.0 - 1.0 / std::numbers::e) * std::pow(damp, default_levels(n));
  finish(prof);
  return prof;
}

double detect_probability(const StationaryProfile& profile) {
  return profile.p_leq.empty() ? 0.0 : profile.p_leq.back();
}

TheoremBounds theorem_bounds(Count n, double beta) {
  if (n < 1) throw AnalysisError("population size must be >= 1");
  if (beta < 0.0) throw AnalysisError("beta must be >= 0");
  const double nd = static_cast<double>(n);
  return {-std::expm1(-beta), 1.0 / std::numbers::e + beta * std::log2(nd) / nd};
}

std::size_t configuration_space_size(Count n, std::size_t species) {
  if (species == 0) return n == 0 ? 1 : 0;
  // C(n + species - 1, species - 1), computed incrementally.
  const auto r = species - 1;
  long double acc = 1.0L;
  for (std::size_t i = 1; i <= r; ++i) {
    acc = acc * static_cast<long double>(static_cast<std::size_t>(n) + i) /
          static_cast<long double>(i);
    if (acc > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2))
      return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(std::llround(acc));
}

std::optional<std::size_t> ExactChain::index_of(std::span<const Count> counts) const {
  std::vector<Count> key(counts.begin(), counts.end());
  auto it = std::lower_bound(states.begin(), states.end(), key);
  if (it == states.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

namespace {

void enumerate(std::vector<Count>& cur, std::size_t pos, Count left,
               std::vector<std::vector<Count>>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (Count c = 0; c <= left; ++c) {
    cur[pos] = c;
    enumerate(cur, pos + 1, left - c, out);
  }
}

}  // namespace

ExactChain exact_stationary_small(const Protocol& p, const Configuration& init,
                                  const LeakModel& leak, std::size_t max_states) {
  const auto species = p.species_count();
  const Count n = init.n();
  if (species == 0 || n < 1) throw AnalysisError("empty protocol or population");
  if (init.species_count() != species)
    throw AnalysisError("initial configuration does not match the protocol");
  const auto space = configuration_space_size(n, species);
  if (space > max_states)
    throw AnalysisError("configuration space too large (" + std::to_string(space) +
                        " states)");

  ExactChain chain;
  {
    std::vector<Count> cur(species, 0);
    enumerate(cur, 0, n, chain.states);
    std::sort(chain.states.begin(), chain.states.end());
  }
  const auto size = chain.states.size();
  chain.initial_state = *chain.index_of(init.counts());

  const auto targets = leak_targets(p, leak);
  const auto part = classify_catalytic(p);
  const double leak_prob = leak.probability(n);
  if (leak_prob > 1.0) throw AnalysisError("leak probability beta/n exceeds 1");
  const double nd = static_cast<double>(n);

  chain.transitions.resize(size);
  for (std::size_t s = 0; s < size; ++s) {
    const auto& c = chain.states[s];
    std::map<std::size_t, double> row;
    auto add = [&](std::vector<Count> next, double prob) {
      if (prob > 0.0) row[*chain.index_of(next)] += prob;
    };
    if (leak_prob > 0.0) {
      for (SpeciesId a = 0; a < species; ++a) {
        if (c[a] == 0) continue;
        auto next = c;
        const auto to = part.is_catalytic(a) ? a : targets[a];
        --next[a];
        ++next[to];
        add(std::move(next), leak_prob * static_cast<double>(c[a]) / nd);
      }
    }
    if (n < 2) {
      add(c, 1.0 - leak_prob);
    } else {
      const double pair_norm = (1.0 - leak_prob) / (nd * (nd - 1.0));
      for (SpeciesId a = 0; a < species; ++a) {
        for (SpeciesId b = 0; b < species; ++b) {
          const Count ways = c[a] * (c[b] - (a == b ? 1 : 0));
          if (ways <= 0) continue;
          auto next = c;
          if (auto prod = p.apply(a, b)) {
            --next[a];
            --next[b];
            ++next[(*prod)[0]];
            ++next[(*prod)[1]];
          }
          add(std::move(next), pair_norm * static_cast<double>(ways));
        }
      }
    }
    chain.transitions[s].assign(row.begin(), row.end());
  }

  // Reachable set from the initial state.
  std::vector<bool> seen(size, false);
  std::queue<std::size_t> frontier;
  frontier.push(chain.initial_state);
  seen[chain.initial_state] = true;
  while (!frontier.empty()) {
    const auto s = frontier.front();
    frontier.pop();
    ++chain.reachable_states;
    for (const auto& [to, prob] : chain.transitions[s])
      if (!seen[to]) {
        seen[to] = true;
        frontier.push(to);
      }
  }

  // Lazy power iteration from the initial point mass.
  std::vector<double> pi(size, 0.0), next(size);
  pi[chain.initial_state] = 1.0;
  constexpr double kTolerance = 1e-10;
  // Transient states keep residual mass on the order of the tolerance.
  constexpr double kSupportMass = 1e-8;
  constexpr std::size_t kMaxIterations = 1'000'000;
  auto multiply = [&](const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t s = 0; s < size; ++s) {
      if (in[s] == 0.0) continue;
      for (const auto& [to, prob] : chain.transitions[s]) out[to] += in[s] * prob;
    }
  };
  bool converged = false;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    multiply(pi, next);
    double residual = 0.0;
    for (std::size_t s = 0; s < size; ++s) residual = std::max(residual, std::abs(next[s] - pi[s]));
    chain.iterations = it + 1;
    chain.residual = residual;
    if (residual < kTolerance) {
      converged = true;
      break;
    }
    for (std::size_t s = 0; s < size; ++s) pi[s] = 0.5 * (pi[s] + next[s]);
  }
  if (!converged)
    throw AnalysisError("power iteration did not converge (residual " +
                        std::to_string(chain.residual) + ")");
  chain.stationary = std::move(pi);

  double absorbed = 0.0;
  chain.species_marginal.assign(species, 0.0);
  for (std::size_t s = 0; s < size; ++s) {
    const double w = chain.stationary[s];
    if (w > kSupportMass) ++chain.support_states;
    const auto& row = chain.transitions[s];
    if (row.size() == 1 && row.front().first == s) absorbed += w;
    for (SpeciesId a = 0; a < species; ++a)
      chain.species_marginal[a] += w * static_cast<double>(chain.states[s][a]) / nd;
  }
  chain.absorbing = absorbed > 1.0 - 1e-9;
  chain.has_transient = chain.support_states < chain.reachable_states;
  for (const auto& sp : p.species())
    if (sp.output == Output::detect) chain.detect_marginal += chain.species_marginal[sp.id];
  return chain;
}

ExactChain exact_stationary_small(const Protocol& p, Count n, const LeakModel& leak,
                                  Count k, std::size_t max_states) {
  return exact_stationary_small(p, initial_configuration(p, DetectParams{n, k, 1}), leak,
                                max_states);
}

}  // namespace rdetect
