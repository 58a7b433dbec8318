#include "taxjoin/report.hpp"

namespace taxjoin {

nlohmann::json stats_to_json(const JoinStats& stats) {
  return nlohmann::json{
      {"f_tau", stats.f_tau},
      {"v_tau", stats.v_tau},
      {"result_count", stats.result_count},
      {"distinct_pairs", stats.distinct_pairs},
      {"postings", stats.postings_s + stats.postings_t},
      {"time_index_ms", stats.time_index_ms},
      {"time_filter_ms", stats.time_filter_ms},
      {"time_verify_ms", stats.time_verify_ms},
  };
}

nlohmann::json tuner_report_to_json(const TunerReport& report) {
  nlohmann::json per_tau = nlohmann::json::array();
  for (const TauStats& s : report.per_tau) {
    per_tau.push_back({
        {"tau", s.tau},
        {"n", s.n},
        {"mean_cost_s", s.mean},
        {"ci_low", s.ci_low},
        {"ci_high", s.ci_high},
    });
  }
  return nlohmann::json{
      {"chosen_tau", report.chosen_tau},
      {"iterations", report.iterations},
      {"tuner_time_s", report.tuner_time_s},
      {"stopped_by", stop_reason_name(report.stopped_by)},
      {"t_F", report.costs.t_f},
      {"t_V", report.costs.t_v},
      {"cost_basis", cost_basis_name(report.cost_basis)},
      {"filter_time_includes_index", true},
      {"per_tau", per_tau},
  };
}

}  // namespace taxjoin
