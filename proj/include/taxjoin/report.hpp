#pragma once

#include "json.hpp"

#include "taxjoin/join.hpp"
#include "taxjoin/tuner.hpp"

namespace taxjoin {

/// Join stats object: {f_tau, v_tau, result_count, time_*_ms, ...}.
nlohmann::json stats_to_json(const JoinStats& stats);

/// Tuner report object with per-tau statistics and the calibrated costs.
nlohmann::json tuner_report_to_json(const TunerReport& report);

}  // namespace taxjoin
