#pragma once

#include <filesystem>
#include <vector>

namespace roadwork::flow {

// --- classic parabola --------------------------------------------------

struct ClassicModelParams {
    double jam_density_pcu_km = 0.0;   // K_j
    double zero_flow_speed_kmh = 0.0;  // U_0
};

// V = K_j * (u - u^2 / U_0); valid for u in [0, U_0], peaking at U_0 / 2.
double classic_volume(double u_kmh, const ClassicModelParams& p);

// --- practical S-curve --------------------------------------------------

// U = alpha1 * U_s / (1 + x^beta), beta = alpha2 + alpha3 * x^3, where
// x = V / C. Unlike the parabola this stays meaningful for x > 1, which
// is what demand estimation under congestion needs.
struct FlowModelParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
    double u_s_kmh = 0.0;             // design or measured free-flow speed
    double capacity_pcu_h_ln = 0.0;   // single-lane capacity C
};

void validate(const FlowModelParams& p);

// Speed at volume-capacity ratio x >= 0; x = 0 returns the free-flow
// limit alpha1 * U_s.
double practical_speed(double x, const FlowModelParams& p);

// Volume (pcu per hour per lane) whose model speed equals `u_kmh`,
// found by bisection on x in (0, x_max]. Requires 0 < u < alpha1 * U_s.
double invert_practical(double u_kmh, const FlowModelParams& p, double x_max = 2.0);

// --- capacity estimation -------------------------------------------------

struct BaseCapacityInputs {
    double v_bff_kmh = 0.0;       // baseline free-flow speed
    double delta_v_w_kmh = 0.0;   // lane/shoulder width correction
    double delta_v_n_kmh = 0.0;   // lane count correction
    double c_b_pcu_h = 0.0;       // per-lane baseline capacity
    double f_hv = 1.0;            // traffic composition factor
    double f_p = 1.0;             // driver population factor
    int lanes = 1;                // one-way lane count
};

// v_FF = v_BFF + dv_w + dv_N; the corrected value must stay positive.
double free_flow_speed(const BaseCapacityInputs& in);

struct BaseCapacity {
    double per_lane_pcu_h = 0.0;
    double directional_pcu_h = 0.0;
};

// C_r = C_b * f_HV * f_p, per lane; directional multiplies by lane count.
BaseCapacity base_capacity(const BaseCapacityInputs& in);

struct WorkZoneCapacityInputs {
    double c_bs_pcu_h_ln = 0.0;   // work-zone baseline capacity per lane
    double f_n = 1.0;             // lane count
    double f_lw = 1.0;            // lane width
    double f_lc = 1.0;            // lateral clearance
    double f_hv = 1.0;            // traffic composition
    double f_se = 1.0;            // speed limit
    double f_wi = 1.0;            // work intensity
    double f_ls = 1.0;            // lighting
    int open_lanes = 1;
};

struct WorkZoneCapacity {
    double per_lane_pcu_h = 0.0;
    double total_pcu_h = 0.0;
};

// C_rs = C_bs * f_n * f_lw * f_lc * f_HV * f_se * f_wi * f_ls, kept at
// full precision; rounding is for display only.
WorkZoneCapacity workzone_capacity(const WorkZoneCapacityInputs& in);

// --- parameter files -------------------------------------------------------

// key = value file with alpha1, alpha2, alpha3, u_s_kmh, capacity_pcu_h_ln.
FlowModelParams load_flow_params(const std::filesystem::path& path);
void save_flow_params(const std::filesystem::path& path, const FlowModelParams& p);

struct PresetRow {
    double design_speed_kmh = 0.0;
    FlowModelParams params;
};

// Bundled expressway presets, CSV:
// design_speed_kmh,capacity_pcu_h_ln,alpha1,alpha2,alpha3
std::vector<PresetRow> load_presets_csv(const std::filesystem::path& path);

} // namespace roadwork::flow
