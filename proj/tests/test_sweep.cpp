#include "roadwork/sweep.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"
#include "support/temp_dir.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace roadwork;
using delay::WorkZoneScenario;
using opt::SweepSpec;

namespace {

WorkZoneScenario night_template() {
    WorkZoneScenario s;
    s.v1_kmh = 65.0;
    s.v2_kmh = 40.0;
    s.a1_ms2 = 1.5;
    s.a2_ms2 = 1.0;
    s.length_km = 0.5;
    s.duration_h = 8.0;
    s.workzone_capacity_pcu_h = 2574.0;
    s.normal_capacity_pcu_h = 4500.0;
    s.td_h = 0.25;
    return s;
}

// Single midday peak, quiet overnight.
std::vector<double> peaked_profile() {
    std::vector<double> demand(96);
    for (int i = 0; i < 96; ++i) {
        const double h = (i + 0.5) * 0.25;
        demand[i] = 900.0 + 3200.0 * std::exp(-0.5 * std::pow((h - 13.0) / 3.5, 2.0));
    }
    return demand;
}

} // namespace

TEST_CASE("the default grid covers the day every 15 minutes") {
    const auto grid = opt::default_candidate_grid();
    REQUIRE(grid.size() == 96);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(23.75));
    CHECK_THROWS_AS(opt::default_candidate_grid(0.0), InputError);
}

TEST_CASE("a flat profile makes every start equally good") {
    SweepSpec spec;
    spec.duration_h = 8.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h.assign(96, 1500.0);
    const auto result = opt::sweep(spec, night_template());

    REQUIRE(result.curve.size() == 96);
    for (const auto& c : result.curve) {
        REQUIRE(c.ok);
        CHECK(c.added_veh_h == doctest::Approx(result.min_added_veh_h).epsilon(1e-9));
        CHECK(c.optimal);
    }
    CHECK(result.optimal_window.size() == 96);
}

TEST_CASE("a midday peak pushes the best start into the overnight trough") {
    SweepSpec spec;
    spec.duration_h = 8.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h = peaked_profile();
    const auto result = opt::sweep(spec, night_template());

    const double best = result.curve[result.best_index].start_h;
    // Best start keeps the whole window clear of the midday peak:
    // evening start, finishing before the morning.
    CHECK((best >= 17.0 || best <= 2.0));

    // The argmin is exactly the scanned minimum of the curve.
    double min_added = 1e300;
    int min_idx = -1;
    for (size_t i = 0; i < result.curve.size(); ++i) {
        REQUIRE(result.curve[i].ok);
        if (result.curve[i].added_veh_h < min_added) {
            min_added = result.curve[i].added_veh_h;
            min_idx = static_cast<int>(i);
        }
    }
    CHECK(result.best_index == min_idx);
    CHECK(result.min_added_veh_h == min_added);

    // Every window member stays within tolerance of the minimum.
    const double tol = 0.01 * min_added;
    for (int idx : result.optimal_window)
        CHECK(result.curve[idx].added_veh_h <= min_added + tol + 1e-12);
}

TEST_CASE("shifting the demand profile shifts the argmin with it") {
    SweepSpec spec;
    spec.duration_h = 6.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h = peaked_profile();
    const auto base = opt::sweep(spec, night_template());

    const int shift_steps = 16;   // 4 hours
    SweepSpec shifted = spec;
    for (int i = 0; i < 96; ++i)
        shifted.daily_demand_pcu_h[(i + shift_steps) % 96] = spec.daily_demand_pcu_h[i];
    const auto moved = opt::sweep(shifted, night_template());

    const double expected = std::fmod(base.curve[base.best_index].start_h + 4.0, 24.0);
    CHECK(moved.curve[moved.best_index].start_h == doctest::Approx(expected));
}

TEST_CASE("doubling demand keeps the weak order sane at the argmin") {
    // The doubled profile's best candidate can never cost less than its
    // own run under the original (halved) demand.
    SweepSpec half;
    half.duration_h = 8.0;
    half.td_h = 0.25;
    half.daily_demand_pcu_h = peaked_profile();
    for (auto& q : half.daily_demand_pcu_h) q *= 0.5;

    SweepSpec full = half;
    for (auto& q : full.daily_demand_pcu_h) q *= 2.0;

    const auto tmpl = night_template();
    const auto small = opt::sweep(half, tmpl);
    const auto big = opt::sweep(full, tmpl);

    const int argmin_big = big.best_index;
    REQUIRE(small.curve[argmin_big].ok);
    CHECK(big.curve[argmin_big].added_veh_h >= small.curve[argmin_big].added_veh_h - 1e-9);
}

TEST_CASE("the optimal window is cyclically contiguous around the best start") {
    SweepSpec spec;
    spec.duration_h = 8.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h = peaked_profile();
    spec.tie_tolerance_veh_h = 1e9;   // everything qualifies
    const auto result = opt::sweep(spec, night_template());
    CHECK(result.optimal_window.size() == 96);

    spec.tie_tolerance_veh_h = 0.0;   // only exact ties
    const auto tight = opt::sweep(spec, night_template());
    CHECK(tight.optimal_window.size() >= 1);
    CHECK(std::find(tight.optimal_window.begin(), tight.optimal_window.end(),
                    tight.best_index) != tight.optimal_window.end());
}

TEST_CASE("curve emission writes one row per candidate plus the header") {
    testing::TempDir dir;
    SweepSpec spec;
    spec.duration_h = 8.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h.assign(96, 1200.0);
    const auto result = opt::sweep(spec, night_template());

    const auto path = dir / "curve.csv";
    opt::emit_curve_csv(path, result);
    const auto rows = util::read_csv(path, "start_hhmm,added_delay_veh_h,is_optimal,note");
    REQUIRE(rows.size() == 96);
    CHECK(rows[0][0] == "00:00");
    CHECK(rows[95][0] == "23:45");
    int optimal = 0;
    for (const auto& row : rows) optimal += row[2] == "1" ? 1 : 0;
    CHECK(optimal == static_cast<int>(result.optimal_window.size()));
}

TEST_CASE("failed candidates keep an empty delay field and a note") {
    testing::TempDir dir;
    opt::SweepResult result;
    result.curve = {{21.0, true, 44.5, true, ""}, {22.0, false, 0.0, false, "engine exploded"}};
    result.best_index = 0;
    result.min_added_veh_h = 44.5;
    result.optimal_window = {0};
    const auto path = dir / "curve.csv";
    opt::emit_curve_csv(path, result);
    const auto rows = util::read_csv(path, "start_hhmm,added_delay_veh_h,is_optimal,note");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][1].empty());
    CHECK(rows[1][3] == "engine exploded");
}

TEST_CASE("a sweep where nothing dissipates fails as a whole") {
    SweepSpec spec;
    spec.duration_h = 8.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h.assign(96, 5000.0);   // beyond even the normal capacity
    spec.max_horizon_days = 3;
    CHECK_THROWS_AS(opt::sweep(spec, night_template()), InputError);
}

TEST_CASE("sweep inputs are validated") {
    SweepSpec spec;
    spec.duration_h = 25.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h.assign(96, 100.0);
    CHECK_THROWS_AS(opt::sweep(spec, night_template()), InputError);
    spec.duration_h = 8.0;
    spec.daily_demand_pcu_h.assign(95, 100.0);
    CHECK_THROWS_AS(opt::sweep(spec, night_template()), InputError);

    spec.daily_demand_pcu_h.assign(96, 100.0);
    CHECK_THROWS_AS(opt::run_candidate(-1.0, spec, night_template()), InputError);
    CHECK_THROWS_AS(opt::run_candidate(24.0, spec, night_template()), InputError);
}

TEST_CASE("run_candidate wraps the closure across midnight") {
    SweepSpec spec;
    spec.duration_h = 8.0;
    spec.td_h = 0.25;
    spec.daily_demand_pcu_h = peaked_profile();
    const auto late = opt::run_candidate(22.0, spec, night_template());
    CHECK(late.complete);
    CHECK(late.added_veh_h > 0.0);
    // The materialized horizon starts at 22:00, so its first demand value
    // is the profile's 22:00 bin.
    CHECK(late.steps.front().q_pcu_h == doctest::Approx(spec.daily_demand_pcu_h[88]));
}
