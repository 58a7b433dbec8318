#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "taxjoin/join.hpp"

namespace taxjoin {

/// Average cost to process one pair in each join stage.
struct CostModel {
  double t_f = 0.0;  // per filtering pair event (index time folded in)
  double t_v = 0.0;  // per verified candidate
};

/// What "stage time" means when calibrating the cost model.
/// counted: deterministic operation counts converted through nominal
/// per-operation costs; the tuner's decisions are then reproducible
/// bit-for-bit for a fixed seed. wallclock: measured stage seconds.
enum class CostBasis { counted, wallclock };

const char* cost_basis_name(CostBasis basis) noexcept;

struct SamplePlan {
  double p_s = 1.0, p_t = 1.0;  // Bernoulli inclusion probabilities
  int k = 0;                    // sample pairs to pre-draw (0: derive lazily)
  std::uint64_t seed = 0;
};

struct SamplePair {
  std::vector<std::uint32_t> s, t;  // record indices, ascending
};

/// Draws k independent sample pairs; each record is included independently
/// with probability p_s (resp. p_t). Sample i depends only on (seed, i),
/// so pre-drawn and lazily drawn sequences coincide.
std::vector<SamplePair> draw_samples(std::size_t s_count, std::size_t t_count,
                                     const SamplePlan& plan);

/// Single sample pair, as draw_samples would produce at position `index`.
SamplePair draw_sample_at(std::size_t s_count, std::size_t t_count,
                          const SamplePlan& plan, std::size_t index);

struct TrialMeasurement {
  std::uint64_t f_prime = 0;   // filtering pair events observed on the sample
  std::uint64_t v_prime = 0;   // candidates observed on the sample
  double filter_seconds = 0;   // includes index construction
  double verify_seconds = 0;
};

/// Runs the join on the samples and reports counts plus stage costs under
/// the chosen basis. Empty samples report zeros.
TrialMeasurement run_trial(const Taxonomy& tax, std::span<const Record> s_sample,
                           std::span<const Record> t_sample, double theta, int tau,
                           CountMode count_mode = CountMode::exact,
                           CostBasis basis = CostBasis::counted);

/// Scaled total cost: t_f * F'/(p_s p_t) + t_v * V'/(p_s p_t).
double scale_estimate(std::uint64_t f_prime, std::uint64_t v_prime,
                      const SamplePlan& plan, const CostModel& costs);

/// Online mean/variance of the scaled cost with a Student-t interval.
struct TauStats {
  int tau = 0;
  int n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations; variance = m2 / (n - 1)
  double ci_low = 0.0, ci_high = 0.0;
};

/// Single-pass update of n/mean/m2; recomputes the confidence bounds
/// mean -/+ t_star * sqrt((m2/(n-1))/n) once n >= 2.
void update_stats(TauStats& stats, double c_hat, double t_star);

/// Stopping rule: with tau_1 the current argmin of the means, stops when
/// the summed CI overlap against every competitor is below the cost of one
/// more iteration, t_f * sum of the latest F' values. Overlap terms are
/// clamped at zero. Requires n >= 2 for every tau.
bool stopping_check(std::span<const TauStats> all_stats,
                    std::span<const std::uint64_t> latest_f_primes, double t_f);

struct TunerConfig {
  std::vector<int> tau_universe = {1, 2, 3, 4, 5};
  int n_star = 10;        // burn-in minimum
  double t_star = 1.036;  // fixed quantile (70% two-sided)
  bool recompute_t_quantile = false;  // strict mode: quantile for df = n-1
  double confidence_level = 0.70;     // used only by the strict mode
  int max_iterations = 1000;
  double theta = 0.8;
  CountMode count_mode = CountMode::exact;
  CostBasis cost_basis = CostBasis::counted;
  int threads = 1;
};

enum class StopReason { criterion, max_iterations };

const char* stop_reason_name(StopReason reason) noexcept;

struct TunerReport {
  int chosen_tau = 0;
  int iterations = 0;
  double tuner_time_s = 0.0;
  CostModel costs;
  CostBasis cost_basis = CostBasis::counted;
  StopReason stopped_by = StopReason::criterion;
  std::vector<TauStats> per_tau;
  std::vector<std::uint64_t> latest_f_primes;
};

/// Iterative refinement: one trial per tau per iteration on the iteration's
/// sample pair, cost-model refresh, statistics update, and the stopping
/// rule once past burn-in. Ties pick the smallest tau.
TunerReport suggest_tau(const Taxonomy& tax, std::span<const Record> s_coll,
                        std::span<const Record> t_coll, const TunerConfig& config,
                        const SamplePlan& plan);

/// Two-sided Student-t quantile at the given confidence level.
double student_t_quantile(double confidence_level, int df);

}  // namespace taxjoin
