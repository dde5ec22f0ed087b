#include "roadwork/sweep.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace roadwork::opt {

std::vector<double> default_candidate_grid(double step_minutes) {
    if (!(step_minutes > 0) || !(step_minutes <= 24.0 * 60.0))
        throw InputError("candidate grid step must lie in (0, 1440] minutes");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor(24.0 * 60.0 / step_minutes));
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(i * step_minutes / 60.0);
    return out;
}

delay::DelayResult run_candidate(double start_h, const SweepSpec& spec,
                                 const delay::WorkZoneScenario& tmpl) {
    if (spec.daily_demand_pcu_h.empty()) throw InputError("daily demand profile is empty");
    if (!(start_h >= 0.0) || !(start_h < 24.0))
        throw InputError("start time must lie in [0, 24) hours, got " +
                         util::format_double(start_h));
    const size_t steps_per_day = spec.daily_demand_pcu_h.size();
    const auto start_step =
        static_cast<size_t>(std::llround(start_h / spec.td_h)) % steps_per_day;
    const auto active_steps = static_cast<size_t>(std::llround(spec.duration_h / spec.td_h));

    delay::WorkZoneScenario s = tmpl;
    s.td_h = spec.td_h;
    s.duration_h = spec.duration_h;

    const auto min_days = static_cast<int>(std::ceil(spec.duration_h / 24.0)) + 1;
    for (int days = min_days; days <= spec.max_horizon_days; ++days) {
        const size_t horizon = steps_per_day * static_cast<size_t>(days);
        s.demand_pcu_h.resize(horizon);
        for (size_t i = 0; i < horizon; ++i)
            s.demand_pcu_h[i] = spec.daily_demand_pcu_h[(start_step + i) % steps_per_day];
        std::vector<bool> active(horizon, false);
        for (size_t i = 0; i < active_steps; ++i) active[i] = true;

        delay::DelayResult run = delay::run_scenario(s, active);
        if (run.complete) return run;
    }
    throw Error("queue did not dissipate within " + std::to_string(spec.max_horizon_days) +
                " days");
}

namespace {

CandidateResult evaluate_candidate(double start_h, const SweepSpec& spec,
                                   const delay::WorkZoneScenario& tmpl) {
    CandidateResult res;
    res.start_h = start_h;
    try {
        const delay::DelayResult run = run_candidate(start_h, spec, tmpl);
        res.ok = true;
        res.added_veh_h = run.added_veh_h;
    } catch (const Error& e) {
        res.note = e.what();
    }
    return res;
}

} // namespace

SweepResult sweep(const SweepSpec& spec, const delay::WorkZoneScenario& scenario_template) {
    if (!(spec.td_h > 0)) throw InputError("sweep needs td > 0");
    if (!(spec.duration_h > 0) || spec.duration_h > 24.0)
        throw InputError("sweep duration must lie in (0, 24] hours");
    const double steps = 24.0 / spec.td_h;
    if (std::abs(steps - std::llround(steps)) > 1e-9 ||
        spec.daily_demand_pcu_h.size() != static_cast<size_t>(std::llround(steps)))
        throw InputError("daily demand must cover 24 h at td resolution (" +
                         std::to_string(std::llround(steps)) + " steps)");
    const double active_steps = spec.duration_h / spec.td_h;
    if (std::abs(active_steps - std::llround(active_steps)) > 1e-9)
        throw InputError("duration must be a whole number of steps");

    std::vector<double> candidates =
        spec.candidate_start_h.empty() ? default_candidate_grid() : spec.candidate_start_h;
    std::sort(candidates.begin(), candidates.end());

    SweepResult result;
    result.curve.resize(candidates.size());

    // Candidates are independent; evaluate in small parallel batches.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t batch = std::min<size_t>(std::max(1u, hw), 8);
    for (size_t begin = 0; begin < candidates.size(); begin += batch) {
        const size_t count = std::min(batch, candidates.size() - begin);
        std::vector<std::thread> workers;
        workers.reserve(count);
        for (size_t k = 0; k < count; ++k) {
            const size_t idx = begin + k;
            workers.emplace_back([&, idx] {
                result.curve[idx] = evaluate_candidate(candidates[idx], spec, scenario_template);
            });
        }
        for (auto& w : workers) w.join();
    }

    result.best_index = -1;
    for (size_t i = 0; i < result.curve.size(); ++i) {
        if (!result.curve[i].ok) continue;
        if (result.best_index < 0 || result.curve[i].added_veh_h < result.min_added_veh_h) {
            result.best_index = static_cast<int>(i);
            result.min_added_veh_h = result.curve[i].added_veh_h;
        }
    }
    if (result.best_index < 0) throw InputError("all sweep candidates failed");

    const double tol = spec.tie_tolerance_veh_h >= 0 ? spec.tie_tolerance_veh_h
                                                     : 0.01 * result.min_added_veh_h;
    auto within = [&](int i) {
        return result.curve[i].ok &&
               result.curve[i].added_veh_h <= result.min_added_veh_h + tol;
    };

    // Maximal cyclically contiguous run of near-optimal candidates
    // containing the argmin.
    const int n = static_cast<int>(result.curve.size());
    int lo = result.best_index, hi = result.best_index;
    while (hi - lo + 1 < n && within(((hi + 1) % n + n) % n)) ++hi;
    while (hi - lo + 1 < n && within(((lo - 1) % n + n) % n)) --lo;
    for (int i = lo; i <= hi; ++i) {
        const int idx = ((i % n) + n) % n;
        result.optimal_window.push_back(idx);
        result.curve[idx].optimal = true;
    }
    std::sort(result.optimal_window.begin(), result.optimal_window.end());
    result.optimal_window.erase(
        std::unique(result.optimal_window.begin(), result.optimal_window.end()),
        result.optimal_window.end());
    return result;
}

void emit_curve_csv(const std::filesystem::path& path, const SweepResult& result) {
    if (result.curve.empty()) throw InputError("cannot emit an empty sweep curve");
    std::string body = "start_hhmm,added_delay_veh_h,is_optimal,note\n";
    for (const auto& c : result.curve) {
        body += util::csv_join({util::format_hhmm(c.start_h),
                                c.ok ? util::format_double(c.added_veh_h) : "",
                                c.optimal ? "1" : "0", c.note});
        body += '\n';
    }
    util::write_text_file(path, body);
}

} // namespace roadwork::opt
