#pragma once

#include "roadwork/delay.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace roadwork::opt {

struct SweepSpec {
    // Candidate start times as fractional hours of day. Empty means the
    // default 15-minute grid over 24 h.
    std::vector<double> candidate_start_h;
    double duration_h = 0.0;                 // closure length T, <= 24
    std::vector<double> daily_demand_pcu_h;  // 24 h at td resolution, wraps at midnight
    double td_h = 0.0;
    // Candidates within this of the minimum merge into the optimal
    // window; negative means 1% of the minimum added delay.
    double tie_tolerance_veh_h = -1.0;
    int max_horizon_days = 14;               // give up on dissipation beyond this
};

std::vector<double> default_candidate_grid(double step_minutes = 15.0);

struct CandidateResult {
    double start_h = 0.0;
    bool ok = false;
    double added_veh_h = 0.0;
    bool optimal = false;
    std::string note;   // failure reason when !ok
};

struct SweepResult {
    std::vector<CandidateResult> curve;   // ordered by start time
    int best_index = -1;
    double min_added_veh_h = 0.0;
    std::vector<int> optimal_window;      // contiguous (cyclically) indices around the best
};

// Places the work window at one start time (wrapping midnight), extends
// the cyclic demand day by day until both the scenario and baseline
// queues drain, and runs the engine. Throws when dissipation never
// happens within max_horizon_days.
delay::DelayResult run_candidate(double start_h, const SweepSpec& spec,
                                 const delay::WorkZoneScenario& scenario_template);

// Runs the delay engine once per candidate start. The scenario template
// supplies everything but demand and flags. Failed candidates are
// recorded and skipped; only an all-failed sweep throws.
SweepResult sweep(const SweepSpec& spec, const delay::WorkZoneScenario& scenario_template);

// Curve CSV: start_hhmm,added_delay_veh_h,is_optimal,note
// Failed candidates keep an empty delay field and carry their note.
void emit_curve_csv(const std::filesystem::path& path, const SweepResult& result);

} // namespace roadwork::opt
