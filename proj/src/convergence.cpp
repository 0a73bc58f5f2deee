#include "rdetect/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rdetect/robust_detect.hpp"

namespace rdetect {
namespace {

std::vector<double> level_weights(const Protocol& p) {
  std::vector<double> w(p.species_count(), 0.0);
  for (const auto& s : p.species())
    if (s.output == Output::detect && s.level && *s.level >= 1)
      w[s.id] = std::pow(3.0, -*s.level);
  return w;
}

double weighted(std::span<const Count> counts, const std::vector<double>& w) {
  double phi = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) phi += static_cast<double>(counts[i]) * w[i];
  return phi;
}

}  // namespace

PotentialValue potential(const Configuration& config, const Protocol& p) {
  const auto roles = detection_roles(p);
  return {weighted(config.counts(), level_weights(p)), config[roles.detector()] > 0};
}

double max_pair_contraction(const Protocol& p) {
  const auto w = level_weights(p);
  const auto d = detection_roles(p).detector();
  double worst = 0.0;
  for (const auto& r : p.canonical_rules()) {
    if (r.reactants[0] == d || r.reactants[1] == d) continue;
    const double before = w[r.reactants[0]] + w[r.reactants[1]];
    if (before <= 0.0) continue;
    worst = std::max(worst, (w[r.products[0]] + w[r.products[1]]) / before);
  }
  return worst;
}

Count clearing_bound(Count n, int s, double theta) {
  const double nd = static_cast<double>(n);
  const double log_arg = std::log(nd) + s * std::log(3.0) + theta * std::log(nd);
  return static_cast<Count>(std::ceil(1.5 * nd * log_arg));
}

DecayReport decay_experiment(const DecayConfig& cfg) {
  const auto& p = cfg.protocol;
  const auto roles = detection_roles(p);
  if (cfg.leak.probability(cfg.init.n()) > 0.0)
    throw AnalysisError("clearing experiment requires no leaks");
  if (cfg.init[roles.detector()] > 0)
    throw AnalysisError("clearing experiment requires no D molecules");
  if (cfg.runs < 1) throw AnalysisError("need at least one run");

  const Count n = cfg.init.n();
  const auto w = level_weights(p);
  const SpeciesId neutral = roles.neutral();
  DecayReport rep;
  rep.t_star = clearing_bound(n, roles.levels(), cfg.theta);
  rep.contraction_bound = 1.0 - 2.0 / (3.0 * static_cast<double>(n));
  const Count horizon = static_cast<Count>(std::ceil(cfg.horizon_factor * rep.t_star));
  const Count every = cfg.record_every > 0 ? cfg.record_every : std::max<Count>(n, 1);

  for (Count t = 0; t <= horizon; t += every) rep.times.push_back(t);
  rep.mean_phi.assign(rep.times.size(), 0.0);

  double ratio_sum = 0.0;
  double ratio_sq = 0.0;
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    Simulation sim(p, cfg.init, LeakModel{}, cfg.seed, run);
    std::optional<Count> cleared;
    double phi = weighted(sim.configuration().counts(), w);
    std::size_t rec = 0;
    auto record = [&] {
      while (rec < rep.times.size() && rep.times[rec] == sim.time()) rep.mean_phi[rec++] += phi;
    };
    record();
    if (sim.configuration()[neutral] == n) cleared = 0;
    while (!cleared && sim.time() < horizon) {
      sim.step();
      const double next = weighted(sim.configuration().counts(), w);
      if (phi > 0.0) {
        const double ratio = next / phi;
        ratio_sum += ratio;
        ratio_sq += ratio * ratio;
        ++rep.ratio_samples;
      }
      phi = next;
      record();
      if (sim.configuration()[neutral] == n) cleared = sim.time();
    }
    // Potential stays 0 once cleared.
    rec = rep.times.size();
    rep.clearing_times.push_back(cleared);
    if (cleared && *cleared <= rep.t_star) ++rep.cleared_by_t_star;
  }
  for (auto& m : rep.mean_phi) m /= static_cast<double>(cfg.runs);
  rep.cleared_fraction = static_cast<double>(rep.cleared_by_t_star) / static_cast<double>(cfg.runs);
  if (rep.ratio_samples > 0) {
    const double m = ratio_sum / static_cast<double>(rep.ratio_samples);
    const double var = std::max(0.0, ratio_sq / static_cast<double>(rep.ratio_samples) - m * m);
    rep.mean_step_ratio = m;
    rep.step_ratio_stderr = std::sqrt(var / static_cast<double>(rep.ratio_samples));
  }
  return rep;
}

DistanceReport tv_distance(std::span<const double> empirical, std::span<const double> analytic) {
  if (empirical.size() != analytic.size())
    throw AnalysisError("distribution dimension mismatch");
  DistanceReport r;
  double cum = 0.0;
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    const double d = empirical[i] - analytic[i];
    r.total_variation += std::abs(d);
    cum += d;
    r.cumulative_gap = std::max(r.cumulative_gap, std::abs(cum));
  }
  r.total_variation = std::min(1.0, 0.5 * r.total_variation);
  return r;
}

std::vector<double> profile_species_fractions(const StationaryProfile& profile,
                                              const Protocol& p) {
  const auto roles = detection_roles(p);
  if (roles.levels() != profile.s)
    throw AnalysisError("profile level count does not match the protocol");
  std::vector<double> out(p.species_count(), 0.0);
  for (int l = 0; l <= profile.s; ++l) out[roles.by_level[l]] = profile.p[l];
  out[roles.neutral()] = 1.0 - profile.p_leq.back();
  return out;
}

std::vector<double> level_fractions(std::span<const double> species_fractions,
                                    const Protocol& p) {
  const auto roles = detection_roles(p);
  if (species_fractions.size() != p.species_count())
    throw AnalysisError("fraction vector does not match the protocol");
  std::vector<double> out;
  out.reserve(roles.by_level.size());
  for (auto id : roles.by_level) out.push_back(species_fractions[id]);
  return out;
}

Configuration sample_configuration(const StationaryProfile& profile, const Protocol& p,
                                   Rng& rng) {
  const auto roles = detection_roles(p);
  const auto species = profile_species_fractions(profile, p);
  std::vector<Count> counts(p.species_count(), 0);
  counts[roles.detector()] = profile.k;
  Count left = profile.n - profile.k;
  double mass = 1.0 - species[roles.detector()];
  for (std::size_t l = 1; l < roles.by_level.size(); ++l) {
    const auto id = roles.by_level[l];
    if (l + 1 == roles.by_level.size() || mass <= 0.0) {
      counts[id] += left;
      break;
    }
    const double q = std::clamp(species[id] / mass, 0.0, 1.0);
    const Count draw = std::binomial_distribution<Count>(left, q)(rng.engine());
    counts[id] = draw;
    left -= draw;
    mass -= species[id];
  }
  return Configuration(std::move(counts));
}

StationaryProfile reference_profile(const SimParams& params) {
  const auto roles = detection_roles(params.protocol);
  const Count n = params.init.n();
  const Count k = params.init[roles.detector()];
  const int s = roles.levels();
  const double beta = params.leak.strategy == LeakStrategy::none ? 0.0 : params.leak.beta;
  if (beta == 0.0) return stationary_no_leak(n, k, s);
  if (k == 0) return stationary_false_positive(n, beta, s);
  return stationary_false_negative(n, k, beta, s);
}

ConvergenceEstimate estimate_convergence_time(const SimParams& params, double epsilon,
                                              std::size_t runs,
                                              const StationaryProfile& reference) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw AnalysisError("epsilon must lie in (0, 1)");
  const auto batch = run_batch(params, runs);
  const auto ref = level_fractions(profile_species_fractions(reference, params.protocol),
                                   params.protocol);
  const double n = static_cast<double>(params.init.n());

  ConvergenceEstimate est;
  for (std::size_t j = 0; j < batch.times.size(); ++j) {
    est.times.push_back(static_cast<double>(batch.times[j]) / n);
    const auto emp = level_fractions(batch.mean_fraction[j], params.protocol);
    est.gaps.push_back(tv_distance(emp, ref).cumulative_gap);
  }
  est.final_gap = est.gaps.back();
  std::optional<std::size_t> first;
  for (std::size_t j = est.gaps.size(); j-- > 0;) {
    if (est.gaps[j] >= epsilon) break;
    first = j;
  }
  if (first) {
    est.parallel_time = est.times[*first];
    est.fitted_constant = *est.parallel_time / std::log2(n);
  }
  return est;
}

ConvergenceEstimate estimate_convergence_time(const SimParams& params, double epsilon,
                                              std::size_t runs) {
  return estimate_convergence_time(params, epsilon, runs, reference_profile(params));
}

LogFit fit_log_trend(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw AnalysisError("need two or more points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    sx += lx;
    sy += y[i];
    sxx += lx * lx;
    sxy += lx * y[i];
    syy += y[i] * y[i];
  }
  const double cov = sxy - sx * sy / m;
  const double varx = sxx - sx * sx / m;
  const double vary = syy - sy * sy / m;
  if (varx <= 0.0) throw AnalysisError("x values must not all be equal");
  LogFit fit;
  fit.slope = cov / varx;
  fit.intercept = (sy - fit.slope * sx) / m;
  fit.r_squared = vary > 0.0 ? cov * cov / (varx * vary) : 1.0;
  return fit;
}

}  // namespace rdetect
