// taxjoin: taxonomy-aware set similarity join with an adaptively tuned
// overlap constraint. Subcommands: join, tune, bench, gen.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "taxjoin/generator.hpp"
#include "taxjoin/io.hpp"
#include "taxjoin/rng.hpp"
#include "taxjoin/join.hpp"
#include "taxjoin/report.hpp"
#include "taxjoin/tuner.hpp"

namespace {

using namespace taxjoin;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitConfigError = 2;

struct IngestOpts {
  std::string taxonomy_path;
  std::string left_path;
  std::string right_path;
};

struct TuneOpts {
  double confidence = 1.036;  // Student-t quantile t*
  int burn_in = 10;
  int sample_size = 100;
  int max_iterations = 1000;
  int tau_max = 5;
  std::string cost_basis = "counted";
};

struct JoinOpts {
  IngestOpts ingest;
  double theta = 0.8;
  std::string tau = "1";  // integer or "auto"
  std::string count_mode = "exact";
  std::uint64_t seed = 42;
  int threads = 1;
  std::string output = "-";
  std::string stats;
  TuneOpts tune;
};

struct BenchOpts {
  IngestOpts ingest;
  std::vector<double> theta_list{0.8};
  std::vector<int> tau_list{1, 2, 3, 4, 5};
  std::string count_mode = "exact";
  int threads = 1;
  std::string output = "-";
};

struct GenOpts {
  int nodes = 1000;
  int fanout = 4;
  int depth = 8;
  int records = 1000;
  int set_min = 2;
  int set_max = 8;
  double locality = 0.85;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

void add_ingest_flags(CLI::App* cmd, IngestOpts& opts) {
  cmd->add_option("--taxonomy", opts.taxonomy_path, "taxonomy edge file (child<TAB>parent)")
      ->required();
  cmd->add_option("--left", opts.left_path, "left records file")->required();
  cmd->add_option("--right", opts.right_path, "right records file")->required();
}

CountMode parse_count_mode(const std::string& name) {
  if (name == "exact") return CountMode::exact;
  if (name == "greedy") return CountMode::greedy;
  fail(errc::invalid_config, "count mode must be 'exact' or 'greedy'");
}

CostBasis parse_cost_basis(const std::string& name) {
  if (name == "counted") return CostBasis::counted;
  if (name == "wallclock") return CostBasis::wallclock;
  fail(errc::invalid_config, "cost basis must be 'counted' or 'wallclock'");
}

struct LoadedData {
  Taxonomy tax;
  std::vector<Record> left;
  std::vector<Record> right;
};

LoadedData load(const IngestOpts& opts) {
  LoadedData data{load_taxonomy_file(opts.taxonomy_path), {}, {}};
  data.left = load_records_file(opts.left_path, data.tax);
  data.right = load_records_file(opts.right_path, data.tax);
  return data;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::parse_error, "cannot write " + path);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  auto out = open_out(path);
  out << text;
}

TunerConfig make_tuner_config(const JoinOpts& o) {
  TunerConfig config;
  config.tau_universe.clear();
  for (int t = 1; t <= o.tune.tau_max; ++t) config.tau_universe.push_back(t);
  config.n_star = o.tune.burn_in;
  config.t_star = o.tune.confidence;
  config.max_iterations = o.tune.max_iterations;
  config.theta = o.theta;
  config.count_mode = parse_count_mode(o.count_mode);
  config.cost_basis = parse_cost_basis(o.tune.cost_basis);
  config.threads = o.threads;
  return config;
}

SamplePlan make_sample_plan(const JoinOpts& o, std::size_t left_size, std::size_t right_size) {
  if (o.tune.sample_size < 1) fail(errc::invalid_config, "sample size must be >= 1");
  SamplePlan plan;
  plan.p_s = std::min(1.0, static_cast<double>(o.tune.sample_size) /
                               static_cast<double>(left_size));
  plan.p_t = std::min(1.0, static_cast<double>(o.tune.sample_size) /
                               static_cast<double>(right_size));
  plan.k = o.tune.max_iterations;
  plan.seed = o.seed;
  return plan;
}

int run_join(const JoinOpts& o) {
  const LoadedData data = load(o.ingest);

  JoinParams params;
  params.theta = o.theta;
  params.count_mode = parse_count_mode(o.count_mode);
  params.threads = o.threads;

  std::optional<TunerReport> tuner_report;
  if (o.tau == "auto") {
    const TunerConfig config = make_tuner_config(o);
    const SamplePlan plan = make_sample_plan(o, data.left.size(), data.right.size());
    tuner_report = suggest_tau(data.tax, data.left, data.right, config, plan);
    params.tau = tuner_report->chosen_tau;
    std::cerr << "tuner: suggested tau=" << params.tau << " after "
              << tuner_report->iterations << " iterations ("
              << stop_reason_name(tuner_report->stopped_by) << ")\n";
  } else {
    std::size_t consumed = 0;
    params.tau = std::stoi(o.tau, &consumed);
    if (consumed != o.tau.size()) {
      fail(errc::invalid_config, "--tau must be an integer or 'auto'");
    }
  }

  const JoinResult result = overlap_join(data.tax, data.left, data.right, params);

  std::ostringstream csv;
  write_results_csv(csv, result.pairs, data.left, data.right);
  write_text(o.output, csv.str());

  if (!o.stats.empty()) {
    nlohmann::json stats = stats_to_json(result.stats);
    stats["theta"] = params.theta;
    stats["tau"] = params.tau;
    stats["count_mode"] = count_mode_name(params.count_mode);
    if (tuner_report) stats["tuner"] = tuner_report_to_json(*tuner_report);
    write_text(o.stats, stats.dump(2) + "\n");
  }
  return kExitOk;
}

int run_tune(const JoinOpts& o) {
  const LoadedData data = load(o.ingest);
  const TunerConfig config = make_tuner_config(o);
  const SamplePlan plan = make_sample_plan(o, data.left.size(), data.right.size());
  const TunerReport report = suggest_tau(data.tax, data.left, data.right, config, plan);

  std::cout << report.chosen_tau << "\n";
  if (!o.stats.empty()) {
    write_text(o.stats, tuner_report_to_json(report).dump(2) + "\n");
  }
  return kExitOk;
}

int run_bench(const BenchOpts& o) {
  const LoadedData data = load(o.ingest);
  if (o.theta_list.empty() || o.tau_list.empty()) {
    fail(errc::invalid_config, "bench needs nonempty theta and tau lists");
  }

  std::ostringstream csv;
  csv << "theta,tau,f_pairs,candidates,results,time_ms\n";
  for (const double theta : o.theta_list) {
    for (const int tau : o.tau_list) {
      JoinParams params;
      params.theta = theta;
      params.tau = tau;
      params.count_mode = parse_count_mode(o.count_mode);
      params.threads = o.threads;
      params.quiet = true;
      const JoinResult r = overlap_join(data.tax, data.left, data.right, params);
      const double total_ms =
          r.stats.time_index_ms + r.stats.time_filter_ms + r.stats.time_verify_ms;
      char line[160];
      std::snprintf(line, sizeof(line), "%g,%d,%llu,%llu,%llu,%.3f\n", theta, tau,
                    static_cast<unsigned long long>(r.stats.f_tau),
                    static_cast<unsigned long long>(r.stats.v_tau),
                    static_cast<unsigned long long>(r.stats.result_count), total_ms);
      csv << line;
      std::cerr << "bench: theta=" << theta << " tau=" << tau << " done in "
                << total_ms << " ms\n";
    }
  }
  write_text(o.output, csv.str());
  return kExitOk;
}

int run_gen(const GenOpts& o) {
  TaxonomyGenParams tax_params{o.nodes, o.fanout, o.depth, o.seed};
  const auto edges = generate_taxonomy_edges(tax_params);
  const Taxonomy tax = Taxonomy::from_edges(edges);

  RecordGenParams rec_params;
  rec_params.records = o.records;
  rec_params.set_min = o.set_min;
  rec_params.set_max = o.set_max;
  rec_params.locality = o.locality;

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  write_taxonomy_file(dir / "taxonomy.tsv", edges);

  rec_params.seed = mix_seed(o.seed, 100);
  rec_params.id_prefix = "L";
  write_records_file(dir / "left.tsv", generate_records(tax, rec_params), tax);

  rec_params.seed = mix_seed(o.seed, 200);
  rec_params.id_prefix = "R";
  write_records_file(dir / "right.tsv", generate_records(tax, rec_params), tax);

  std::cerr << "gen: wrote " << (dir / "taxonomy.tsv").string() << ", "
            << (dir / "left.tsv").string() << ", " << (dir / "right.tsv").string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taxonomy-aware set similarity join"};
  app.require_subcommand(1);

  JoinOpts join_opts;
  CLI::App* join_cmd = app.add_subcommand("join", "run the filtered join");
  add_ingest_flags(join_cmd, join_opts.ingest);
  join_cmd->add_option("--theta", join_opts.theta, "similarity threshold in (0, 1]");
  join_cmd->add_option("--tau", join_opts.tau, "overlap constraint (integer or 'auto')");
  join_cmd->add_option("--count-mode", join_opts.count_mode, "exact | greedy");
  join_cmd->add_option("--confidence", join_opts.tune.confidence,
                       "Student-t quantile t* for tuner intervals");
  join_cmd->add_option("--burn-in", join_opts.tune.burn_in, "tuner burn-in iterations n*");
  join_cmd->add_option("--sample-size", join_opts.tune.sample_size,
                       "expected tuner sample size per side");
  join_cmd->add_option("--max-iterations", join_opts.tune.max_iterations,
                       "tuner iteration cap");
  join_cmd->add_option("--tau-max", join_opts.tune.tau_max,
                       "tuner universe is 1..tau-max");
  join_cmd->add_option("--cost-basis", join_opts.tune.cost_basis,
                       "tuner cost basis: counted | wallclock");
  join_cmd->add_option("--seed", join_opts.seed, "random seed");
  join_cmd->add_option("--threads", join_opts.threads, "worker threads");
  join_cmd->add_option("--output", join_opts.output, "results CSV path ('-' = stdout)");
  join_cmd->add_option("--stats", join_opts.stats, "stats JSON path");

  JoinOpts tune_opts;
  CLI::App* tune_cmd = app.add_subcommand("tune", "suggest the overlap constraint");
  add_ingest_flags(tune_cmd, tune_opts.ingest);
  tune_cmd->add_option("--theta", tune_opts.theta, "similarity threshold in (0, 1]");
  tune_cmd->add_option("--count-mode", tune_opts.count_mode, "exact | greedy");
  tune_cmd->add_option("--confidence", tune_opts.tune.confidence,
                       "Student-t quantile t* for tuner intervals");
  tune_cmd->add_option("--burn-in", tune_opts.tune.burn_in, "burn-in iterations n*");
  tune_cmd->add_option("--sample-size", tune_opts.tune.sample_size,
                       "expected sample size per side");
  tune_cmd->add_option("--max-iterations", tune_opts.tune.max_iterations, "iteration cap");
  tune_cmd->add_option("--tau-max", tune_opts.tune.tau_max, "universe is 1..tau-max");
  tune_cmd->add_option("--cost-basis", tune_opts.tune.cost_basis,
                       "counted | wallclock");
  tune_cmd->add_option("--seed", tune_opts.seed, "random seed");
  tune_cmd->add_option("--threads", tune_opts.threads, "worker threads");
  tune_cmd->add_option("--stats", tune_opts.stats, "tuner report JSON path");

  BenchOpts bench_opts;
  CLI::App* bench_cmd = app.add_subcommand("bench", "sweep a (theta, tau) grid");
  add_ingest_flags(bench_cmd, bench_opts.ingest);
  bench_cmd->add_option("--theta-list", bench_opts.theta_list, "thresholds to sweep")
      ->delimiter(',');
  bench_cmd->add_option("--tau-list", bench_opts.tau_list, "overlap constraints to sweep")
      ->delimiter(',');
  bench_cmd->add_option("--count-mode", bench_opts.count_mode, "exact | greedy");
  bench_cmd->add_option("--threads", bench_opts.threads, "worker threads");
  bench_cmd->add_option("--output", bench_opts.output, "bench CSV path ('-' = stdout)");

  GenOpts gen_opts;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate synthetic data files");
  gen_cmd->add_option("--nodes", gen_opts.nodes, "taxonomy node count");
  gen_cmd->add_option("--fanout", gen_opts.fanout, "approximate branching factor");
  gen_cmd->add_option("--depth", gen_opts.depth, "approximate tree height");
  gen_cmd->add_option("--records", gen_opts.records, "records per side");
  gen_cmd->add_option("--set-min", gen_opts.set_min, "minimum record size");
  gen_cmd->add_option("--set-max", gen_opts.set_max, "maximum record size");
  gen_cmd->add_option("--locality", gen_opts.locality, "community sampling probability");
  gen_cmd->add_option("--seed", gen_opts.seed, "random seed");
  gen_cmd->add_option("--out-dir", gen_opts.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (join_cmd->parsed()) return run_join(join_opts);
    if (tune_cmd->parsed()) return run_tune(tune_opts);
    if (bench_cmd->parsed()) return run_bench(bench_opts);
    if (gen_cmd->parsed()) return run_gen(gen_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::invalid_config ? kExitConfigError : kExitDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid argument: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: value out of range: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitConfigError;
}
