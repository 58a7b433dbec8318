// Acceptance suite. Each invocation runs one numbered criterion against the
// library (and the CLI binary for the determinism checks) and prints a
// single [PASS]/[FAIL] line plus supporting detail.
//
//   acceptance --criterion N [--bin path/to/taxjoin] [--workdir dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support/fixtures.hpp"
#include "taxjoin/generator.hpp"
#include "taxjoin/io.hpp"
#include "taxjoin/join.hpp"
#include "taxjoin/parallel.hpp"
#include "taxjoin/rng.hpp"
#include "taxjoin/tuner.hpp"

namespace {

using namespace taxjoin;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kTol = 1e-9;

struct Ctx {
  std::string bin;
  fs::path workdir;
};

int g_checks = 0;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
  ++g_checks;
  if (!ok) {
    ++g_failures;
    std::printf("  [check failed] %s\n", what.c_str());
  }
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Instance {
  Taxonomy tax;
  std::vector<Record> left;
  std::vector<Record> right;
};

Instance make_instance(std::uint64_t seed, const TaxonomyGenParams& tp,
                       RecordGenParams rp) {
  Instance inst{Taxonomy::from_edges(generate_taxonomy_edges(tp)), {}, {}};
  rp.template_seed = mix_seed(seed, 4);
  rp.seed = mix_seed(seed, 5);
  rp.id_prefix = "L";
  inst.left = generate_records(inst.tax, rp);
  rp.seed = mix_seed(seed, 6);
  rp.id_prefix = "R";
  inst.right = generate_records(inst.tax, rp);
  return inst;
}

using PairSet = std::set<std::pair<std::string, std::string>>;

std::map<std::pair<std::string, std::string>, double> result_map(
    const JoinResult& r, std::span<const Record> s_coll, std::span<const Record> t_coll) {
  std::map<std::pair<std::string, std::string>, double> out;
  for (const MatchPair& p : r.pairs) {
    out[{s_coll[p.s_index].id, t_coll[p.t_index].id}] = p.gts;
  }
  return out;
}

// ---------------------------------------------------------------------------
// criterion 1: worked-example fidelity
// ---------------------------------------------------------------------------

bool criterion_worked_example(const Ctx&) {
  const Taxonomy tax = test::toy_taxonomy();
  const NodeId turin = *tax.find("Turin");
  const NodeId via_nizza = *tax.find("Via Nizza");
  const NodeId latte = *tax.find("latte");
  const NodeId espresso = *tax.find("espresso");
  const NodeId coffeehouse = *tax.find("coffeehouse");
  const NodeId bar = *tax.find("bar");

  expect(tax.depth(turin) == 3, "Turin sits at depth 3");
  expect(tax.depth(via_nizza) == 5, "Via Nizza sits at depth 5");
  expect(ts(tax, turin, via_nizza) == 0.6, "ts(Turin, Via Nizza) == 0.6 exactly");
  expect(ts(tax, latte, espresso) == 0.8, "ts(latte, espresso) == 0.8 exactly");
  expect(ts(tax, coffeehouse, bar) == 0.75, "ts(coffeehouse, bar) == 0.75 exactly");

  const Record a = test::toy_record(tax, "string_a", {"coffeehouse", "latte", "Turin"});
  const Record b = test::toy_record(tax, "string_b", {"bar", "espresso", "Via Nizza"});
  const double g = gts(tax, a, b);
  expect(std::fabs(g - 2.15 / 3.0) < kTol, "gts equals 2.15/3 within 1e-9");
  std::printf("  gts(string_a, string_b) = %.9f (2.15/3 = %.9f)\n", g, 2.15 / 3.0);
  return g_failures == 0;
}

// ---------------------------------------------------------------------------
// criterion 2: assignment optimality
// ---------------------------------------------------------------------------

bool criterion_assignment(const Ctx&) {
  SplitMix64 rng(220102);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t rows = 1 + rng.below(7);
    const std::size_t cols = 1 + rng.below(7);
    WeightMatrix wm(rows, cols);
    for (double& x : wm.w) x = rng.uniform();
    const double fast = assignment_max(wm).total;
    const double brute = test::permutation_assignment_max(wm);
    if (std::fabs(fast - brute) >= kTol) {
      expect(false, "assignment mismatch at round " + std::to_string(round) + ": " +
                        std::to_string(fast) + " vs " + std::to_string(brute));
      return false;
    }
  }
  std::printf("  1000 random matrices up to 7x7 match the permutation maximum\n");
  return g_failures == 0;
}

// ---------------------------------------------------------------------------
// criteria 3 and 4: oracle equality suite / greedy recall report
// ---------------------------------------------------------------------------

Instance suite_instance(int index) {
  TaxonomyGenParams tp;
  tp.nodes = 120 + (index * 37) % 381;  // up to 500 nodes
  tp.fanout = 3;
  tp.depth = 8;
  tp.seed = mix_seed(9000, index);

  RecordGenParams rp;
  rp.records = 150;
  rp.set_min = 2 + index % 5;
  rp.set_max = 8;
  return make_instance(mix_seed(9001, index), tp, rp);
}

bool run_oracle_suite(CountMode mode, bool hard_assert) {
  const int instances = 100;
  const double thetas[] = {0.6, 0.7, 0.8, 0.9};

  std::uint64_t joins = 0;
  std::uint64_t expected_pairs = 0, found_pairs = 0, extra_pairs = 0;
  int logged_misses = 0;

  for (int i = 0; i < instances && g_failures == 0; ++i) {
    const Instance inst = suite_instance(i);
    std::size_t min_size = SIZE_MAX;
    for (const Record& r : inst.left) min_size = std::min(min_size, r.nodes.size());
    for (const Record& r : inst.right) min_size = std::min(min_size, r.nodes.size());
    const int tau_hi = static_cast<int>(std::min<std::size_t>(5, min_size));

    for (const double theta : thetas) {
      const JoinResult oracle = naive_join(inst.tax, inst.left, inst.right, theta, 2);
      const auto expected = result_map(oracle, inst.left, inst.right);

      for (int tau = 1; tau <= tau_hi; ++tau) {
        JoinParams p;
        p.theta = theta;
        p.tau = tau;
        p.count_mode = mode;
        p.threads = 2;
        p.quiet = true;
        const JoinResult got = overlap_join(inst.tax, inst.left, inst.right, p);
        const auto actual = result_map(got, inst.left, inst.right);
        ++joins;

        expected_pairs += expected.size();
        for (const auto& [ids, value] : actual) {
          auto it = expected.find(ids);
          if (it == expected.end()) {
            ++extra_pairs;
            continue;
          }
          ++found_pairs;
          if (hard_assert) {
            expect(std::fabs(value - it->second) < kTol,
                   "gts value matches the oracle for " + ids.first + "," + ids.second);
          }
        }
        if (hard_assert) {
          expect(actual.size() == expected.size() && extra_pairs == 0,
                 "result set equals the oracle set (instance " + std::to_string(i) +
                     ", theta " + std::to_string(theta) + ", tau " + std::to_string(tau) +
                     "): got " + std::to_string(actual.size()) + " expected " +
                     std::to_string(expected.size()));
        } else if (actual.size() != expected.size() && logged_misses < 20) {
          for (const auto& [ids, value] : expected) {
            if (!actual.count(ids) && logged_misses < 20) {
              ++logged_misses;
              std::printf(
                  "  greedy miss: instance=%d theta=%.1f tau=%d pair=(%s,%s) gts=%.6f\n",
                  i, theta, tau, ids.first.c_str(), ids.second.c_str(), value);
            }
          }
        }
      }
    }
  }

  if (!hard_assert) {
    const double recall = expected_pairs == 0
                              ? 1.0
                              : static_cast<double>(found_pairs) /
                                    static_cast<double>(expected_pairs);
    std::printf("  greedy recall: %.6f over %llu joins (%llu of %llu pairs; %llu extra)\n",
                recall, static_cast<unsigned long long>(joins),
                static_cast<unsigned long long>(found_pairs),
                static_cast<unsigned long long>(expected_pairs),
                static_cast<unsigned long long>(extra_pairs));
  } else {
    std::printf("  %llu joins compared against the all-pairs oracle\n",
                static_cast<unsigned long long>(joins));
  }
  return g_failures == 0;
}

bool criterion_filter_completeness(const Ctx&) {
  return run_oracle_suite(CountMode::exact, /*hard_assert=*/true);
}

bool criterion_greedy_recall(const Ctx&) {
  return run_oracle_suite(CountMode::greedy, /*hard_assert=*/false);
}

// ---------------------------------------------------------------------------
// criterion 5: estimator unbiasedness
// ---------------------------------------------------------------------------

bool criterion_estimator(const Ctx&) {
  TaxonomyGenParams tp;
  tp.nodes = 2500;
  tp.fanout = 3;
  tp.depth = 10;
  tp.seed = 501;
  RecordGenParams rp;
  rp.records = 500;
  rp.set_min = 5;
  rp.set_max = 9;
  const Instance inst = make_instance(502, tp, rp);
  const double theta = 0.7;
  const int trials = 1000;
  SamplePlan plan{0.2, 0.2, 0, 20240502};

  for (int tau = 1; tau <= 5; ++tau) {
    JoinParams p;
    p.theta = theta;
    p.tau = tau;
    p.threads = 2;
    p.quiet = true;
    const JoinResult full = overlap_join(inst.tax, inst.left, inst.right, p);
    const double truth_f = static_cast<double>(full.stats.f_tau);
    const double truth_v = static_cast<double>(full.stats.v_tau);

    std::vector<double> sum_f(2, 0.0), sum_v(2, 0.0);
    parallel_chunks(0, trials, 2, [&](std::size_t lo, std::size_t hi, std::size_t w) {
      for (std::size_t i = lo; i < hi; ++i) {
        const SamplePair sp =
            draw_sample_at(inst.left.size(), inst.right.size(), plan, i);
        std::vector<Record> s_sub, t_sub;
        s_sub.reserve(sp.s.size());
        t_sub.reserve(sp.t.size());
        for (auto idx : sp.s) s_sub.push_back(inst.left[idx]);
        for (auto idx : sp.t) t_sub.push_back(inst.right[idx]);
        const TrialMeasurement m = run_trial(inst.tax, s_sub, t_sub, theta, tau);
        sum_f[w] += static_cast<double>(m.f_prime) / (plan.p_s * plan.p_t);
        sum_v[w] += static_cast<double>(m.v_prime) / (plan.p_s * plan.p_t);
      }
    });
    const double mean_f = (sum_f[0] + sum_f[1]) / trials;
    const double mean_v = (sum_v[0] + sum_v[1]) / trials;

    const double err_f = truth_f > 0 ? std::fabs(mean_f - truth_f) / truth_f : 0.0;
    const double err_v = truth_v > 0 ? std::fabs(mean_v - truth_v) / truth_v : 0.0;
    std::printf(
        "  tau=%d: F=%.0f mean(F^)=%.0f err=%.2f%%  V=%.0f mean(V^)=%.0f err=%.2f%%\n",
        tau, truth_f, mean_f, 100 * err_f, truth_v, mean_v, 100 * err_v);
    expect(truth_f > 0 && truth_v > 0,
           "instance produces work at tau=" + std::to_string(tau));
    expect(err_f < 0.05, "mean F-hat within 5% at tau=" + std::to_string(tau));
    expect(err_v < 0.05, "mean V-hat within 5% at tau=" + std::to_string(tau));
  }
  return g_failures == 0;
}

// ---------------------------------------------------------------------------
// criterion 6: monotonicity suite
// ---------------------------------------------------------------------------

bool criterion_monotonicity(const Ctx&) {
  for (int step = 1; step <= 20; ++step) {
    const double theta = step * 0.05;
    for (std::size_t n = 1; n <= 40; ++n) {
      for (int tau = 1; tau + 1 <= static_cast<int>(n); ++tau) {
        if (phi_threshold(theta, n, tau) < phi_threshold(theta, n, tau + 1) - kTol) {
          expect(false, "phi not monotone at theta=" + std::to_string(theta) +
                            " n=" + std::to_string(n) + " tau=" + std::to_string(tau));
          return false;
        }
      }
    }
  }
  std::printf("  phi(theta, n, tau) non-increasing in tau over the full grid\n");

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TaxonomyGenParams tp;
    tp.nodes = 2000;
    tp.fanout = 3;
    tp.depth = 10;
    tp.seed = seed;
    RecordGenParams rp;
    rp.records = 300;
    rp.set_min = 5;
    rp.set_max = 9;
    const Instance inst = make_instance(seed, tp, rp);

    std::uint64_t prev = 0;
    for (int tau = 1; tau <= 5; ++tau) {
      JoinParams p;
      p.theta = 0.8;
      p.tau = tau;
      p.quiet = true;
      const std::uint64_t count = build_index(inst.tax, inst.left, p).posting_count +
                                  build_index(inst.tax, inst.right, p).posting_count;
      expect(tau == 1 || count >= prev,
             "postings non-decreasing in tau (seed " + std::to_string(seed) + ")");
      prev = count;
    }

    std::uint64_t prev_theta = UINT64_MAX;
    for (double theta : {0.6, 0.7, 0.8, 0.9}) {
      JoinParams p;
      p.theta = theta;
      p.tau = 2;
      p.quiet = true;
      const std::uint64_t count = build_index(inst.tax, inst.left, p).posting_count +
                                  build_index(inst.tax, inst.right, p).posting_count;
      expect(count <= prev_theta,
             "postings non-increasing in theta (seed " + std::to_string(seed) + ")");
      prev_theta = count;
    }
  }
  std::printf("  index postings monotone in tau and theta on 5 seeded instances\n");
  return g_failures == 0;
}

// ---------------------------------------------------------------------------
// criteria 7 and 8: tuner accuracy and economy
// ---------------------------------------------------------------------------

Instance tuner_instance() {
  TaxonomyGenParams tp;
  tp.nodes = 30000;
  tp.fanout = 3;
  tp.depth = 12;
  tp.seed = 77;
  RecordGenParams rp;
  rp.records = 6000;
  rp.set_min = 7;
  rp.set_max = 10;
  return make_instance(900, tp, rp);
}

struct TunerGroundTruth {
  double wall[6] = {0, 0, 0, 0, 0, 0};  // seconds per tau, min of reps
  int argmin = 1;
};

TunerGroundTruth exhaustive_sweep(const Instance& inst, double theta) {
  TunerGroundTruth truth;
  auto run_once = [&](int tau) {
    JoinParams p;
    p.theta = theta;
    p.tau = tau;
    p.threads = 2;
    p.quiet = true;
    const auto t0 = Clock::now();
    (void)overlap_join(inst.tax, inst.left, inst.right, p);
    return seconds_since(t0);
  };
  for (int tau = 1; tau <= 5; ++tau) truth.wall[tau] = run_once(tau);
  // one repeat for the two current leaders; keep the minimum
  int first = 1, second = 2;
  for (int tau = 2; tau <= 5; ++tau) {
    if (truth.wall[tau] < truth.wall[first]) {
      second = first;
      first = tau;
    } else if (truth.wall[tau] < truth.wall[second]) {
      second = tau;
    }
  }
  truth.wall[first] = std::min(truth.wall[first], run_once(first));
  truth.wall[second] = std::min(truth.wall[second], run_once(second));
  truth.argmin = 1;
  for (int tau = 2; tau <= 5; ++tau) {
    if (truth.wall[tau] < truth.wall[truth.argmin]) truth.argmin = tau;
  }
  return truth;
}

bool run_tuner_criterion(bool economy) {
  const Instance inst = tuner_instance();
  const double theta = 0.75;

  const TunerGroundTruth truth = exhaustive_sweep(inst, theta);
  std::printf("  full-join seconds per tau:");
  for (int tau = 1; tau <= 5; ++tau) std::printf(" %d:%.2f", tau, truth.wall[tau]);
  std::printf("  -> measured argmin tau=%d\n", truth.argmin);
  expect(truth.argmin >= 2 && truth.argmin <= 4,
         "the tau-cost curve has an interior optimum");

  TunerConfig config;  // defaults: universe 1..5, n*=10, t*=1.036
  config.theta = theta;
  config.threads = 2;
  SamplePlan plan;
  plan.p_s = std::min(1.0, 100.0 / static_cast<double>(inst.left.size()));
  plan.p_t = std::min(1.0, 100.0 / static_cast<double>(inst.right.size()));

  // warm-up run; not scored
  plan.seed = 0;
  (void)suggest_tau(inst.tax, inst.left, inst.right, config, plan);

  int correct = 0;
  double tuner_total = 0, ratio_total = 0, ratio_max = 0;
  const int runs = 50;
  for (int seed = 1; seed <= runs; ++seed) {
    plan.seed = static_cast<std::uint64_t>(seed);
    const auto t0 = Clock::now();
    const TunerReport report = suggest_tau(inst.tax, inst.left, inst.right, config, plan);
    const double tuner_secs = seconds_since(t0);
    tuner_total += tuner_secs;
    correct += report.chosen_tau == truth.argmin ? 1 : 0;
    const double ratio = tuner_secs / truth.wall[report.chosen_tau];
    ratio_total += ratio;
    ratio_max = std::max(ratio_max, ratio);
  }

  if (!economy) {
    std::printf("  tuner accuracy: %d/%d correct (need >= 40)\n", correct, runs);
    expect(correct >= 40, "suggestion matches the measured optimum in >= 80% of runs");
  } else {
    const double mean_tuner = tuner_total / runs;
    const double mean_ratio = ratio_total / runs;
    std::printf(
        "  mean tuner time %.3fs; mean ratio to the suggested tau's full join %.1f%%"
        " (max %.1f%%)\n",
        mean_tuner, 100 * mean_ratio, 100 * ratio_max);
    expect(mean_ratio <= 0.10, "tuner wall time within 10% of the subsequent join");
  }
  return g_failures == 0;
}

bool criterion_tuner_accuracy(const Ctx&) { return run_tuner_criterion(false); }
bool criterion_tuner_economy(const Ctx&) { return run_tuner_criterion(true); }

// ---------------------------------------------------------------------------
// criterion 9: scalability shape
// ---------------------------------------------------------------------------

bool criterion_scalability(const Ctx&) {
  std::printf("  building the 40K-per-side batched corpus...\n");
  TaxonomyGenParams tp;
  tp.nodes = 500000;
  tp.fanout = 5;
  tp.depth = 13;
  tp.seed = 31;
  const Taxonomy tax = Taxonomy::from_edges(generate_taxonomy_edges(tp));

  // The corpus is a union of topic-sharded batches: duplicates live inside
  // a batch and batches use disjoint community subtrees, so the collision
  // density per record does not grow with the corpus size.
  const int kBlock = 5000, kBlocks = 8;
  std::vector<Record> left, right;
  left.reserve(kBlock * kBlocks);
  right.reserve(kBlock * kBlocks);
  for (int b = 0; b < kBlocks; ++b) {
    RecordGenParams rp;
    rp.records = kBlock;
    rp.set_min = 5;
    rp.set_max = 9;
    rp.dup_rate = 0.2;
    rp.locality = 0.9;
    rp.anchor_min_depth = 7;
    rp.community_depth = 7;
    rp.community_buckets = kBlocks;
    rp.community_bucket = b;
    rp.template_seed = mix_seed(31, 1000 + b);
    rp.seed = mix_seed(31, 2000 + b);
    rp.id_prefix = "L" + std::to_string(b) + "_";
    auto lb = generate_records(tax, rp);
    left.insert(left.end(), lb.begin(), lb.end());
    rp.seed = mix_seed(31, 3000 + b);
    rp.id_prefix = "R" + std::to_string(b) + "_";
    auto rb = generate_records(tax, rp);
    right.insert(right.end(), rb.begin(), rb.end());
  }

  for (const double theta : {0.8, 0.9}) {
    std::vector<double> sizes, times;
    for (const int n : {5000, 10000, 20000, 40000}) {
      JoinParams p;
      p.theta = theta;
      p.tau = 2;
      p.threads = 2;
      p.quiet = true;
      const auto t0 = Clock::now();
      const JoinResult r = overlap_join(tax, std::span(left.data(), n),
                                        std::span(right.data(), n), p);
      const double secs = seconds_since(t0);
      std::printf("  theta=%.1f n=%d time=%.2fs f=%llu v=%llu results=%llu\n", theta, n,
                  secs, static_cast<unsigned long long>(r.stats.f_tau),
                  static_cast<unsigned long long>(r.stats.v_tau),
                  static_cast<unsigned long long>(r.stats.result_count));
      sizes.push_back(n);
      times.push_back(secs);
    }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      num += times[i] * sizes[i];
      den += sizes[i] * sizes[i];
    }
    const double slope = num / den;
    double worst = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double fit = slope * sizes[i];
      const double ratio = fit > times[i] ? fit / times[i] : times[i] / fit;
      worst = std::max(worst, ratio);
    }
    std::printf("  theta=%.1f worst deviation from the linear fit: %.2fx (limit 2.5x)\n",
                theta, worst);
    expect(worst <= 2.5,
           "time within 2.5x of a linear fit at theta=" + std::to_string(theta));
  }
  return g_failures == 0;
}

// ---------------------------------------------------------------------------
// criterion 10: CLI determinism
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& command) {
  const int rc = std::system(command.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string stats_without_timings(const fs::path& path) {
  nlohmann::json j = nlohmann::json::parse(slurp(path));
  j.erase("time_index_ms");
  j.erase("time_filter_ms");
  j.erase("time_verify_ms");
  if (j.contains("tuner")) j["tuner"].erase("tuner_time_s");
  return j.dump();
}

std::string report_without_timings(const fs::path& path) {
  nlohmann::json j = nlohmann::json::parse(slurp(path));
  j.erase("tuner_time_s");
  return j.dump();
}

bool criterion_determinism(const Ctx& ctx) {
  if (ctx.bin.empty()) {
    expect(false, "--bin is required for the determinism criterion");
    return false;
  }
  const fs::path dir = ctx.workdir / "determinism";
  fs::create_directories(dir);

  TaxonomyGenParams tp;
  tp.nodes = 3000;
  tp.fanout = 3;
  tp.depth = 10;
  tp.seed = 1001;
  RecordGenParams rp;
  rp.records = 600;
  rp.set_min = 4;
  rp.set_max = 9;
  const Instance inst = make_instance(1002, tp, rp);
  const fs::path tax_path = dir / "taxonomy.tsv";
  const fs::path left_path = dir / "left.tsv";
  const fs::path right_path = dir / "right.tsv";
  write_taxonomy_file(tax_path, generate_taxonomy_edges(tp));
  write_records_file(left_path, inst.left, inst.tax);
  write_records_file(right_path, inst.right, inst.tax);

  const std::string base = ctx.bin + " --taxonomy " + tax_path.string() + " --left " +
                           left_path.string() + " --right " + right_path.string();

  std::vector<std::string> join_csvs, join_stats, tune_outs, tune_reports;
  int run_id = 0;
  for (const int threads : {1, 4}) {
    for (int rep = 0; rep < 3; ++rep, ++run_id) {
      const fs::path csv = dir / ("join_" + std::to_string(run_id) + ".csv");
      const fs::path stats = dir / ("stats_" + std::to_string(run_id) + ".json");
      const std::string join_cmd =
          ctx.bin + " join" + base.substr(ctx.bin.size()) + " --theta 0.8 --tau 2" +
          " --seed 42 --threads " + std::to_string(threads) + " --output " +
          csv.string() + " --stats " + stats.string() + " 2>/dev/null";
      expect(run_cli(join_cmd) == 0, "cmd_join exits 0 (run " + std::to_string(run_id) + ")");
      join_csvs.push_back(slurp(csv));
      join_stats.push_back(stats_without_timings(stats));

      const fs::path tune_out = dir / ("tune_" + std::to_string(run_id) + ".out");
      const fs::path tune_json = dir / ("tune_" + std::to_string(run_id) + ".json");
      const std::string tune_cmd =
          ctx.bin + " tune" + base.substr(ctx.bin.size()) + " --theta 0.8 --seed 7" +
          " --threads " + std::to_string(threads) + " --stats " + tune_json.string() +
          " > " + tune_out.string() + " 2>/dev/null";
      expect(run_cli(tune_cmd) == 0, "cmd_tune exits 0 (run " + std::to_string(run_id) + ")");
      tune_outs.push_back(slurp(tune_out));
      tune_reports.push_back(report_without_timings(tune_json));
    }
  }

  expect(!join_csvs[0].empty() && join_csvs[0].find("s_id,t_id,gts") == 0,
         "join produced a results CSV");
  for (std::size_t i = 1; i < join_csvs.size(); ++i) {
    expect(join_csvs[i] == join_csvs[0],
           "results CSV byte-identical (run " + std::to_string(i) + ")");
    expect(join_stats[i] == join_stats[0],
           "stats JSON identical ignoring wall-clock fields (run " + std::to_string(i) + ")");
    expect(tune_outs[i] == tune_outs[0],
           "tune stdout byte-identical (run " + std::to_string(i) + ")");
    expect(tune_reports[i] == tune_reports[0],
           "tuner report identical ignoring tuner_time_s (run " + std::to_string(i) + ")");
  }
  std::printf("  3 runs x threads {1,4}: join CSV %zu bytes, tune chose %s",
              join_csvs[0].size(),
              tune_outs[0].c_str());
  return g_failures == 0;
}

// ---------------------------------------------------------------------------

struct CriterionEntry {
  int id;
  const char* name;
  bool (*run)(const Ctx&);
};

const CriterionEntry kCriteria[] = {
    {1, "worked-example fidelity", criterion_worked_example},
    {2, "assignment optimality", criterion_assignment},
    {3, "filter completeness (exact mode)", criterion_filter_completeness},
    {4, "greedy recall report", criterion_greedy_recall},
    {5, "estimator unbiasedness", criterion_estimator},
    {6, "monotonicity suite", criterion_monotonicity},
    {7, "tuner accuracy", criterion_tuner_accuracy},
    {8, "tuner economy", criterion_tuner_economy},
    {9, "scalability shape", criterion_scalability},
    {10, "determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  Ctx ctx;
  ctx.workdir = fs::temp_directory_path() / "taxjoin_acceptance";
  int criterion = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) criterion = std::atoi(argv[++i]);
    else if (arg == "--bin" && i + 1 < argc) ctx.bin = argv[++i];
    else if (arg == "--workdir" && i + 1 < argc) ctx.workdir = argv[++i];
    else {
      std::fprintf(stderr, "usage: acceptance --criterion N [--bin PATH] [--workdir DIR]\n");
      return 2;
    }
  }
  fs::create_directories(ctx.workdir);

  int exit_code = 0;
  bool matched = false;
  for (const CriterionEntry& entry : kCriteria) {
    if (criterion != 0 && entry.id != criterion) continue;
    matched = true;
    g_checks = 0;
    g_failures = 0;
    const auto t0 = Clock::now();
    const bool ok = entry.run(ctx);
    std::printf("[%s] criterion %d: %s (%d checks, %.1fs)\n", ok ? "PASS" : "FAIL",
                entry.id, entry.name, g_checks, seconds_since(t0));
    if (!ok) exit_code = 1;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion %d\n", criterion);
    return 2;
  }
  return exit_code;
}
