#include "roadwork/delay.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/flow.hpp"
#include "roadwork/util.hpp"

#include <algorithm>
#include <cmath>

namespace roadwork::delay {

namespace {

constexpr double kKmhToMs = 1000.0 / 3600.0;

// Share of capacity at which d4 is clamped; the formula has a pole at
// Q = C and the congested branches take over beyond it.
constexpr double kD4CapRatio = 0.98;

} // namespace

void validate(const WorkZoneScenario& s) {
    if (!(s.v2_kmh > 0) || !(s.v1_kmh >= s.v2_kmh))
        throw InputError("scenario needs 0 < V2 <= V1");
    if (!(s.a1_ms2 > 0) || !(s.a2_ms2 > 0))
        throw InputError("scenario needs positive acceleration rates");
    if (!(s.length_km > 0)) throw InputError("work-zone length must be positive");
    if (!(s.duration_h > 0)) throw InputError("work duration must be positive");
    if (!(s.workzone_capacity_pcu_h > 0) || !(s.normal_capacity_pcu_h > 0))
        throw InputError("capacities must be positive");
    if (s.workzone_capacity_pcu_h > s.normal_capacity_pcu_h)
        throw InputError("work-zone capacity cannot exceed the normal capacity");
    if (!(s.td_h > 0)) throw InputError("step length must be positive");
    for (double q : s.demand_pcu_h)
        if (!(q >= 0) || !std::isfinite(q)) throw InputError("demand values must be >= 0");
}

ComponentDelays component_delays(double v1_kmh, double v2_kmh, double a1_ms2, double a2_ms2,
                                 double length_km) {
    if (!(v2_kmh > 0) || v1_kmh < v2_kmh) throw InputError("component_delays needs 0 < V2 <= V1");
    if (!(a1_ms2 > 0) || !(a2_ms2 > 0)) throw InputError("acceleration rates must be positive");
    if (!(length_km > 0)) throw InputError("length must be positive");

    const double v1 = v1_kmh * kKmhToMs;
    const double v2 = v2_kmh * kKmhToMs;
    const double dv = v1 - v2;

    ComponentDelays d;
    d.d1_h = dv * dv / (2.0 * a1_ms2 * v1) / 3600.0;
    d.d2_h = (1.0 / v2_kmh - 1.0 / v1_kmh) * length_km;
    d.d3_h = dv * dv / (2.0 * a2_ms2 * v1) / 3600.0;
    return d;
}

double stochastic_queue_delay(double q_pcu_h, double c_pcu_h) {
    if (!(c_pcu_h > 0)) throw InputError("capacity must be positive");
    if (q_pcu_h < 0 || q_pcu_h >= c_pcu_h)
        throw InputError("stochastic_queue_delay needs 0 <= Q < C");
    if (q_pcu_h == 0) return 0.0;
    return q_pcu_h / (c_pcu_h * (c_pcu_h - q_pcu_h));
}

StepDelay step_delay(int index, double queue_in_veh, double q_pcu_h, bool workzone_active,
                     const WorkZoneScenario& s) {
    if (queue_in_veh < 0) throw InputError("queue_in must be >= 0");
    if (!(q_pcu_h >= 0)) throw InputError("demand must be >= 0");

    const double c = workzone_active ? s.workzone_capacity_pcu_h : s.normal_capacity_pcu_h;
    const double td = s.td_h;

    StepDelay step;
    step.index = index;
    step.q_pcu_h = q_pcu_h;
    step.queue_in_veh = queue_in_veh;

    if (workzone_active) {
        const ComponentDelays comp =
            component_delays(s.v1_kmh, s.v2_kmh, s.a1_ms2, s.a2_ms2, s.length_km);
        step.d1_h = comp.d1_h;
        step.d2_h = comp.d2_h;
        step.d3_h = comp.d3_h;
    }

    const double rate = q_pcu_h - c;   // queue growth rate, veh/h
    if (queue_in_veh <= 0 && q_pcu_h <= c) {
        // Uncongested: only the component delays plus the random-arrival term.
        step.d4_h = stochastic_queue_delay(std::min(q_pcu_h, kD4CapRatio * c), c);
        step.queue_out_veh = 0.0;
        step.d4_total_veh_h = 0.0;
        step.dl_veh_h = (step.d1_h + step.d2_h + step.d3_h + step.d4_h) * q_pcu_h * td;
    } else {
        // A deterministic queue exists at some point in this step; D4 is
        // the area under the queue curve q(t) = queue_in + rate * t.
        const double raw_out = queue_in_veh + rate * td;
        if (raw_out >= 0) {
            step.queue_out_veh = raw_out;
            step.d4_total_veh_h = queue_in_veh * td + 0.5 * rate * td * td;
        } else {
            // Queue empties mid-step: triangle up to t*, nothing after.
            const double t_star = queue_in_veh / (c - q_pcu_h);
            step.queue_out_veh = 0.0;
            step.d4_total_veh_h = 0.5 * queue_in_veh * t_star;
        }
        step.dl_veh_h =
            (step.d1_h + step.d2_h + step.d3_h) * q_pcu_h * td + step.d4_total_veh_h;
    }
    step.served_veh = q_pcu_h * td - (step.queue_out_veh - step.queue_in_veh);
    return step;
}

namespace {

struct FoldResult {
    std::vector<StepDelay> steps;
    double total = 0.0;
    double queue_delay = 0.0;
    double residual_queue = 0.0;
};

FoldResult fold_steps(const WorkZoneScenario& s, const std::vector<bool>& active,
                      bool keep_steps) {
    FoldResult r;
    if (keep_steps) r.steps.reserve(s.demand_pcu_h.size());
    double queue = 0.0;
    for (size_t i = 0; i < s.demand_pcu_h.size(); ++i) {
        StepDelay step = step_delay(static_cast<int>(i), queue, s.demand_pcu_h[i],
                                    active.empty() ? false : active[i], s);
        queue = step.queue_out_veh;
        r.total += step.dl_veh_h;
        r.queue_delay += step.d4_total_veh_h;
        if (keep_steps) r.steps.push_back(std::move(step));
    }
    r.residual_queue = queue;
    return r;
}

} // namespace

DelayResult run_scenario(const WorkZoneScenario& s, const std::vector<bool>& workzone_active) {
    validate(s);
    if (workzone_active.size() != s.demand_pcu_h.size())
        throw InputError("workzone_active flags must match the demand length");

    // The active window must be one contiguous block of round(T / td) steps
    // (or absent entirely for a baseline run).
    size_t active_count = 0;
    size_t first = workzone_active.size(), last = 0;
    for (size_t i = 0; i < workzone_active.size(); ++i) {
        if (!workzone_active[i]) continue;
        ++active_count;
        first = std::min(first, i);
        last = i;
    }
    if (active_count > 0) {
        const auto expected = static_cast<size_t>(std::llround(s.duration_h / s.td_h));
        if (active_count != expected)
            throw InputError("work zone must be active for round(T/td) = " +
                             std::to_string(expected) + " steps, got " +
                             std::to_string(active_count));
        if (last - first + 1 != active_count)
            throw InputError("work-zone steps must be contiguous");
    }

    const FoldResult scenario = fold_steps(s, workzone_active, true);
    const FoldResult baseline = fold_steps(s, {}, false);

    DelayResult out;
    out.steps = scenario.steps;
    out.total_veh_h = scenario.total;
    out.queue_delay_veh_h = scenario.queue_delay;
    out.baseline_total_veh_h = baseline.total;
    out.added_veh_h = scenario.total - baseline.total;
    out.residual_queue_veh = scenario.residual_queue;
    out.baseline_residual_queue_veh = baseline.residual_queue;
    out.complete = scenario.residual_queue <= 1e-9 && baseline.residual_queue <= 1e-9;
    return out;
}

// --- files -------------------------------------------------------------

static const std::string kDemandHeader = "step_index,Q_pcu_per_h";

std::vector<double> load_demand_csv(const std::filesystem::path& path) {
    const auto rows = util::read_csv(path, kDemandHeader);
    std::vector<double> out(rows.size(), 0.0);
    for (const auto& row : rows) {
        if (row.size() != 2) throw InputError(path.string() + ": expected 2 columns");
        const long long idx = util::parse_int(row[0]);
        if (idx < 0 || static_cast<size_t>(idx) >= out.size())
            throw InputError(path.string() + ": step_index out of order or out of range: " +
                             row[0]);
        out[static_cast<size_t>(idx)] = util::parse_double(row[1]);
    }
    return out;
}

void save_demand_csv(const std::filesystem::path& path, const std::vector<double>& demand) {
    std::string body = kDemandHeader + "\n";
    for (size_t i = 0; i < demand.size(); ++i)
        body += std::to_string(i) + "," + util::format_double(demand[i]) + "\n";
    util::write_text_file(path, body);
}

WorkZoneScenario load_scenario(const std::filesystem::path& path) {
    const auto kv = util::KeyValueFile::load(path);
    WorkZoneScenario s;
    s.v1_kmh = kv.get_double("v1_kmh");
    s.v2_kmh = kv.get_double("v2_kmh");
    s.a1_ms2 = kv.get_double("a1_ms2");
    s.a2_ms2 = kv.get_double("a2_ms2");
    s.length_km = kv.get_double("length_km");
    s.duration_h = kv.get_double("duration_h");
    s.td_h = kv.get_double("td_h");

    if (kv.has("workzone_capacity_pcu_h")) {
        s.workzone_capacity_pcu_h = kv.get_double("workzone_capacity_pcu_h");
    } else {
        flow::WorkZoneCapacityInputs in;
        in.c_bs_pcu_h_ln = kv.get_double("wz_c_bs");
        in.f_n = kv.get_double_or("wz_f_n", 1.0);
        in.f_lw = kv.get_double_or("wz_f_lw", 1.0);
        in.f_lc = kv.get_double_or("wz_f_lc", 1.0);
        in.f_hv = kv.get_double_or("wz_f_hv", 1.0);
        in.f_se = kv.get_double_or("wz_f_se", 1.0);
        in.f_wi = kv.get_double_or("wz_f_wi", 1.0);
        in.f_ls = kv.get_double_or("wz_f_ls", 1.0);
        in.open_lanes = static_cast<int>(kv.get_int("wz_open_lanes"));
        s.workzone_capacity_pcu_h = flow::workzone_capacity(in).total_pcu_h;
    }

    if (kv.has("normal_capacity_pcu_h")) {
        s.normal_capacity_pcu_h = kv.get_double("normal_capacity_pcu_h");
    } else {
        flow::BaseCapacityInputs in;
        in.c_b_pcu_h = kv.get_double("base_c_b");
        in.f_hv = kv.get_double_or("base_f_hv", 1.0);
        in.f_p = kv.get_double_or("base_f_p", 1.0);
        in.lanes = static_cast<int>(kv.get_int("base_lanes"));
        s.normal_capacity_pcu_h = flow::base_capacity(in).directional_pcu_h;
    }

    if (kv.has("demand_csv")) {
        std::filesystem::path demand_path = kv.get("demand_csv");
        if (demand_path.is_relative()) demand_path = path.parent_path() / demand_path;
        s.demand_pcu_h = load_demand_csv(demand_path);
    }
    return s;
}

double scenario_start_hour(const std::filesystem::path& path) {
    const auto kv = util::KeyValueFile::load(path);
    if (!kv.has("start_hhmm")) return -1.0;
    return util::parse_hhmm(kv.get("start_hhmm"));
}

void write_step_report_csv(const std::filesystem::path& path, const DelayResult& result) {
    std::string body = "i,Q,d1,d2,d3,d4,D4,queue,DL\n";
    for (const auto& st : result.steps) {
        body += util::csv_join({std::to_string(st.index), util::format_double(st.q_pcu_h),
                                util::format_double(st.d1_h), util::format_double(st.d2_h),
                                util::format_double(st.d3_h), util::format_double(st.d4_h),
                                util::format_double(st.d4_total_veh_h),
                                util::format_double(st.queue_out_veh),
                                util::format_double(st.dl_veh_h)});
        body += '\n';
    }
    util::write_text_file(path, body);
}

} // namespace roadwork::delay
