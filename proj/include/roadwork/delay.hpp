#pragma once

#include <filesystem>
#include <vector>

namespace roadwork::delay {

// One maintenance closure on one approach. Demand and capacities are
// totals across the approach cross-section, not per lane.
struct WorkZoneScenario {
    double v1_kmh = 0.0;                  // normal running speed
    double v2_kmh = 0.0;                  // speed through the work zone
    double a1_ms2 = 0.0;                  // deceleration entering
    double a2_ms2 = 0.0;                  // acceleration leaving
    double length_km = 0.0;               // work-zone length
    double duration_h = 0.0;              // closure duration T
    double workzone_capacity_pcu_h = 0.0; // total while the zone is up
    double normal_capacity_pcu_h = 0.0;   // total without the zone
    double td_h = 0.0;                    // step length
    std::vector<double> demand_pcu_h;     // arrivals Q_i per step
};

void validate(const WorkZoneScenario& s);

// Per-vehicle deceleration, traverse and acceleration delays (hours).
// Formulas are evaluated in SI units internally.
struct ComponentDelays {
    double d1_h = 0.0;   // decelerate V1 -> V2
    double d2_h = 0.0;   // traverse L at V2 instead of V1
    double d3_h = 0.0;   // accelerate V2 -> V1
};

ComponentDelays component_delays(double v1_kmh, double v2_kmh, double a1_ms2, double a2_ms2,
                                 double length_km);

// Random-arrival waiting time per vehicle (hours) in the uncongested
// regime, d4 = Q / (C * (C - Q)). Only valid for 0 <= Q < C; the
// congested branches cover the rest.
double stochastic_queue_delay(double q_pcu_h, double c_pcu_h);

struct StepDelay {
    int index = 0;
    double q_pcu_h = 0.0;
    double d1_h = 0.0, d2_h = 0.0, d3_h = 0.0, d4_h = 0.0;
    double d4_total_veh_h = 0.0;   // D4: deterministic queue delay this step
    double queue_in_veh = 0.0;
    double queue_out_veh = 0.0;
    double served_veh = 0.0;
    double dl_veh_h = 0.0;         // DL_i: total delay this step
};

// One step of the deterministic queue fold. Branches:
//   no queue, Q <= C : DL = (d1+d2+d3+d4) * Q * td
//   otherwise        : DL = (d1+d2+d3) * Q * td + D4, where D4 is the
//                      integral of the queue over the step (trapezoid;
//                      triangle when the queue empties mid-step).
// With the zone inactive, capacity reverts to the normal value and
// d1..d3 vanish.
StepDelay step_delay(int index, double queue_in_veh, double q_pcu_h, bool workzone_active,
                     const WorkZoneScenario& s);

struct DelayResult {
    std::vector<StepDelay> steps;
    double total_veh_h = 0.0;            // sum of DL_i
    double queue_delay_veh_h = 0.0;      // sum of D4
    double baseline_total_veh_h = 0.0;   // same demand, zone never active
    double added_veh_h = 0.0;            // total - baseline
    double residual_queue_veh = 0.0;
    double baseline_residual_queue_veh = 0.0;
    bool complete = false;               // both runs drained by the horizon end
};

// Folds step_delay over the horizon and subtracts the no-work-zone
// baseline run on the same demand. `workzone_active` must match the
// demand length and hold exactly round(T / td) contiguous true steps
// (or none, for a pure baseline run). A queue left at the end of the
// horizon is reported via residual_queue_veh / complete, never silently
// dropped.
DelayResult run_scenario(const WorkZoneScenario& s, const std::vector<bool>& workzone_active);

// --- files -------------------------------------------------------------

// Demand CSV: step_index,Q_pcu_per_h
std::vector<double> load_demand_csv(const std::filesystem::path& path);
void save_demand_csv(const std::filesystem::path& path, const std::vector<double>& demand);

// Scenario key-value file; demand_csv is resolved relative to the
// scenario file. Capacities may be given directly or via handbook factor
// sets (wz_* and base_* keys).
WorkZoneScenario load_scenario(const std::filesystem::path& path);

// Optional work start (fractional hours of day) carried next to the
// scenario, key start_hhmm. Returns -1 when absent.
double scenario_start_hour(const std::filesystem::path& path);

// Step report CSV: i,Q,d1,d2,d3,d4,D4,queue,DL
void write_step_report_csv(const std::filesystem::path& path, const DelayResult& result);

} // namespace roadwork::delay
