#include "taxjoin/tuner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "taxjoin/parallel.hpp"
#include "taxjoin/rng.hpp"

namespace taxjoin {

namespace {

// Nominal per-operation costs backing the counted basis, calibrated once on
// the reference hardware (see README). The counted basis keeps the tuner's
// decisions reproducible for a fixed seed; only the F-vs-V weighting needs
// to be roughly right for the suggestion to track wall-clock cost.
constexpr double kPostingSeconds = 6.0e-8;  // one posting inserted
constexpr double kEventSeconds = 1.3e-7;    // one posting cross-product event
constexpr double kCellSeconds = 4.7e-8;     // one weight-matrix cell filled
constexpr double kCubeSeconds = 1.0e-9;     // one assignment step

// Cost-model priors used until the first trial with nonzero counts.
constexpr double kPriorEventSeconds = kEventSeconds;
constexpr double kPriorCandidateSeconds = 64 * kCellSeconds + 512 * kCubeSeconds;

using Clock = std::chrono::steady_clock;

void validate_plan(const SamplePlan& plan) {
  if (!(plan.p_s > 0.0) || plan.p_s > 1.0 || !(plan.p_t > 0.0) || plan.p_t > 1.0) {
    fail(errc::invalid_config, "sampling probabilities must be in (0, 1]");
  }
}

double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int df) {
  const double x = df / (df + t * t);
  const double tail = 0.5 * reg_inc_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

}  // namespace

const char* cost_basis_name(CostBasis basis) noexcept {
  return basis == CostBasis::counted ? "counted" : "wallclock";
}

const char* stop_reason_name(StopReason reason) noexcept {
  return reason == StopReason::criterion ? "criterion" : "max_iterations";
}

SamplePair draw_sample_at(std::size_t s_count, std::size_t t_count,
                          const SamplePlan& plan, std::size_t index) {
  validate_plan(plan);
  SplitMix64 rng(mix_seed(plan.seed, index));
  SamplePair sample;
  for (std::size_t i = 0; i < s_count; ++i) {
    if (rng.uniform() < plan.p_s) sample.s.push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t j = 0; j < t_count; ++j) {
    if (rng.uniform() < plan.p_t) sample.t.push_back(static_cast<std::uint32_t>(j));
  }
  return sample;
}

std::vector<SamplePair> draw_samples(std::size_t s_count, std::size_t t_count,
                                     const SamplePlan& plan) {
  validate_plan(plan);
  if (plan.k < 1) fail(errc::invalid_config, "sample plan must pre-draw k >= 1 pairs");
  std::vector<SamplePair> samples;
  samples.reserve(static_cast<std::size_t>(plan.k));
  for (int i = 0; i < plan.k; ++i) {
    samples.push_back(draw_sample_at(s_count, t_count, plan, static_cast<std::size_t>(i)));
  }
  return samples;
}

TrialMeasurement run_trial(const Taxonomy& tax, std::span<const Record> s_sample,
                           std::span<const Record> t_sample, double theta, int tau,
                           CountMode count_mode, CostBasis basis) {
  TrialMeasurement m;
  if (s_sample.empty() || t_sample.empty()) return m;

  JoinParams params;
  params.theta = theta;
  params.tau = tau;
  params.count_mode = count_mode;
  params.threads = 1;
  params.quiet = true;
  const JoinResult r = overlap_join(tax, s_sample, t_sample, params);

  m.f_prime = r.stats.f_tau;
  m.v_prime = r.stats.v_tau;
  if (basis == CostBasis::counted) {
    m.filter_seconds =
        kPostingSeconds * static_cast<double>(r.stats.postings_s + r.stats.postings_t) +
        kEventSeconds * static_cast<double>(r.stats.f_tau);
    m.verify_seconds = kCellSeconds * static_cast<double>(r.stats.verify_cells) +
                       kCubeSeconds * static_cast<double>(r.stats.verify_cubes);
  } else {
    m.filter_seconds = (r.stats.time_index_ms + r.stats.time_filter_ms) / 1e3;
    m.verify_seconds = r.stats.time_verify_ms / 1e3;
  }
  return m;
}

double scale_estimate(std::uint64_t f_prime, std::uint64_t v_prime,
                      const SamplePlan& plan, const CostModel& costs) {
  validate_plan(plan);
  const double scale = 1.0 / (plan.p_s * plan.p_t);
  return costs.t_f * static_cast<double>(f_prime) * scale +
         costs.t_v * static_cast<double>(v_prime) * scale;
}

void update_stats(TauStats& stats, double c_hat, double t_star) {
  if (!std::isfinite(c_hat)) fail(errc::invalid_config, "cost estimate must be finite");
  ++stats.n;
  const double delta = c_hat - stats.mean;
  stats.mean += delta / static_cast<double>(stats.n);
  stats.m2 += delta * (c_hat - stats.mean);
  if (stats.n >= 2) {
    const double variance = stats.m2 / static_cast<double>(stats.n - 1);
    const double half = t_star * std::sqrt(variance / static_cast<double>(stats.n));
    stats.ci_low = stats.mean - half;
    stats.ci_high = stats.mean + half;
  } else {
    stats.ci_low = stats.ci_high = stats.mean;
  }
}

bool stopping_check(std::span<const TauStats> all_stats,
                    std::span<const std::uint64_t> latest_f_primes, double t_f) {
  if (all_stats.empty()) fail(errc::invalid_config, "tau universe is empty");
  if (all_stats.size() != latest_f_primes.size()) {
    fail(errc::invalid_config, "stats and F' spans must align");
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < all_stats.size(); ++i) {
    if (all_stats[i].n < 2) {
      fail(errc::insufficient_iterations, "stopping rule needs n >= 2 for every tau");
    }
    if (all_stats[i].mean < all_stats[best].mean) best = i;
  }

  double overlap = 0.0;
  for (std::size_t i = 0; i < all_stats.size(); ++i) {
    if (i == best) continue;
    overlap += std::max(0.0, all_stats[best].ci_high - all_stats[i].ci_low);
  }
  double next_iteration_cost = 0.0;
  for (std::uint64_t f : latest_f_primes) next_iteration_cost += static_cast<double>(f);
  next_iteration_cost *= t_f;
  return overlap < next_iteration_cost;
}

TunerReport suggest_tau(const Taxonomy& tax, std::span<const Record> s_coll,
                        std::span<const Record> t_coll, const TunerConfig& config,
                        const SamplePlan& plan) {
  validate_plan(plan);
  if (config.tau_universe.empty()) fail(errc::invalid_config, "tau universe is empty");
  if (config.n_star < 2) fail(errc::invalid_config, "burn-in n* must be >= 2");
  if (!(config.t_star > 0.0)) fail(errc::invalid_config, "t* must be positive");
  if (config.max_iterations < config.n_star) {
    fail(errc::invalid_config, "max_iterations must be >= n*");
  }
  if (!(config.theta > 0.0) || config.theta > 1.0) {
    fail(errc::invalid_config, "theta must be in (0, 1]");
  }
  if (config.threads < 1) fail(errc::invalid_config, "threads must be >= 1");
  if (s_coll.empty() || t_coll.empty()) {
    fail(errc::invalid_config, "tuning requires nonempty collections");
  }

  std::vector<int> universe = config.tau_universe;
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  if (universe.front() < 1) fail(errc::invalid_config, "tau values must be >= 1");

  const auto wall0 = Clock::now();
  const std::size_t m = universe.size();
  std::vector<TauStats> stats(m);
  for (std::size_t i = 0; i < m; ++i) stats[i].tau = universe[i];
  std::vector<std::uint64_t> latest_f(m, 0);

  CostModel costs{kPriorEventSeconds, kPriorCandidateSeconds};
  double sum_filter_seconds = 0.0, sum_verify_seconds = 0.0;
  double sum_f = 0.0, sum_v = 0.0;

  int iterations = 0;
  StopReason stopped_by = StopReason::max_iterations;
  for (int n = 1; n <= config.max_iterations; ++n) {
    const SamplePair sample =
        draw_sample_at(s_coll.size(), t_coll.size(), plan, static_cast<std::size_t>(n - 1));
    std::vector<Record> s_sub, t_sub;
    s_sub.reserve(sample.s.size());
    t_sub.reserve(sample.t.size());
    for (std::uint32_t i : sample.s) s_sub.push_back(s_coll[i]);
    for (std::uint32_t j : sample.t) t_sub.push_back(t_coll[j]);

    // Trials across the universe are independent; statistics are applied
    // afterwards in ascending tau order, so results do not depend on the
    // thread count.
    std::vector<TrialMeasurement> trials(m);
    parallel_chunks(0, m, config.threads,
                    [&](std::size_t lo, std::size_t hi, std::size_t) {
      for (std::size_t i = lo; i < hi; ++i) {
        trials[i] = run_trial(tax, s_sub, t_sub, config.theta, universe[i],
                              config.count_mode, config.cost_basis);
      }
    });

    for (std::size_t i = 0; i < m; ++i) {
      const TrialMeasurement& trial = trials[i];
      sum_filter_seconds += trial.filter_seconds;
      sum_verify_seconds += trial.verify_seconds;
      sum_f += static_cast<double>(trial.f_prime);
      sum_v += static_cast<double>(trial.v_prime);
      if (sum_f > 0.0) costs.t_f = sum_filter_seconds / sum_f;
      if (sum_v > 0.0) costs.t_v = sum_verify_seconds / sum_v;

      const double c_hat = scale_estimate(trial.f_prime, trial.v_prime, plan, costs);
      const double t_eff = (config.recompute_t_quantile && stats[i].n >= 1)
                               ? student_t_quantile(config.confidence_level, stats[i].n)
                               : config.t_star;
      latest_f[i] = trial.f_prime;
      update_stats(stats[i], c_hat, t_eff);
    }

    iterations = n;
    if (n >= config.n_star && stopping_check(stats, latest_f, costs.t_f)) {
      stopped_by = StopReason::criterion;
      break;
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (stats[i].mean < stats[best].mean) best = i;
  }

  TunerReport report;
  report.chosen_tau = universe[best];
  report.iterations = iterations;
  report.costs = costs;
  report.cost_basis = config.cost_basis;
  report.stopped_by = stopped_by;
  report.per_tau = std::move(stats);
  report.latest_f_primes = std::move(latest_f);
  report.tuner_time_s =
      std::chrono::duration<double>(Clock::now() - wall0).count();
  return report;
}

double student_t_quantile(double confidence_level, int df) {
  if (df < 1) fail(errc::invalid_config, "degrees of freedom must be >= 1");
  if (!(confidence_level > 0.0) || confidence_level >= 1.0) {
    fail(errc::invalid_config, "confidence level must be in (0, 1)");
  }
  const double p = 0.5 + confidence_level / 2.0;
  double lo = 0.0, hi = 1.0;
  while (student_t_cdf(hi, df) < p) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace taxjoin
