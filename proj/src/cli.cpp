#include "roadwork/cli.hpp"

#include "roadwork/calib.hpp"
#include "roadwork/collector.hpp"
#include "roadwork/daily_profile.hpp"
#include "roadwork/delay.hpp"
#include "roadwork/errors.hpp"
#include "roadwork/flow.hpp"
#include "roadwork/geo.hpp"
#include "roadwork/sweep.hpp"
#include "roadwork/util.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <map>

namespace roadwork::cli {

namespace {

std::atomic<bool> g_interrupted{false};

void on_interrupt(int) { g_interrupted = true; }

// Roads CSV: road_id,lat,lng with vertices listed in order per road.
std::map<std::string, geo::Polyline> load_roads_csv(const std::filesystem::path& path) {
    const auto rows = util::read_csv(path, "road_id,lat,lng");
    if (rows.empty()) throw InputError(path.string() + ": no road vertices");
    std::map<std::string, geo::Polyline> roads;
    for (const auto& row : rows) {
        if (row.size() != 3) throw InputError(path.string() + ": expected 3 columns");
        geo::GeoPoint p{util::parse_double(row[1]), util::parse_double(row[2])};
        roads[row[0]].vertices.push_back(p);
    }
    return roads;
}

int cmd_discretize(const std::string& roads_file, double spacing_m, const std::string& out) {
    const auto roads = load_roads_csv(roads_file);
    std::vector<geo::RoadPoint> net;
    for (const auto& [road_id, line] : roads) {
        auto points = geo::make_pointnet(road_id, line, spacing_m);
        net.insert(net.end(), points.begin(), points.end());
    }
    geo::write_pointnet_csv(out, net);
    std::printf("discretize: %zu roads -> %zu points (%s)\n", roads.size(), net.size(),
                out.c_str());
    return kOk;
}

int cmd_collect(const std::string& config_path, const std::string& pointnet_path,
                const std::string& transport_kind, double duration_s, bool continuous,
                double period_override_s, const std::string& out_override) {
    const auto kv = util::KeyValueFile::load(config_path);

    const std::string url_template = kv.get("url_template");
    const int zoom = static_cast<int>(kv.get_int("zoom"));
    const double period_s =
        period_override_s > 0 ? period_override_s : kv.get_double_or("period_s", 60.0);
    if (!(period_s > 0)) throw ConfigError("period must be positive");

    feed::CollectorOptions options;
    options.radius_px = static_cast<int>(kv.get_int_or("radius_px", 4));
    options.rules = kv.has("rules_json")
                        ? feed::load_classifier_rules(kv.get("rules_json"))
                        : feed::default_classifier_rules();
    options.rules.tau = static_cast<int>(kv.get_int_or("tau", options.rules.tau));
    struct SignalGuard {
        using Handler = void (*)(int);
        Handler old_int = SIG_DFL;
        Handler old_term = SIG_DFL;
        bool armed = false;
        ~SignalGuard() {
            if (!armed) return;
            std::signal(SIGINT, old_int);
            std::signal(SIGTERM, old_term);
        }
    } guard;
    if (continuous) {
        // Run until interrupted.
        g_interrupted = false;
        guard.old_int = std::signal(SIGINT, on_interrupt);
        guard.old_term = std::signal(SIGTERM, on_interrupt);
        guard.armed = true;
        options.stop = &g_interrupted;
    } else {
        options.duration_s = duration_s;
    }

    const std::string store_dir = !out_override.empty() ? out_override : kv.get("store_dir");
    const auto& profile = geo::find_profile(kv.get_or("profile", "slippy"));

    const auto points = geo::read_pointnet_csv(pointnet_path);
    if (points.empty()) throw InputError("point net is empty: " + pointnet_path);
    std::vector<feed::FetchJob> jobs;
    jobs.reserve(points.size());
    for (const auto& p : points)
        jobs.push_back({p.point_id, geo::geo_to_tile(p.pos, zoom, profile), url_template,
                        period_s});

    feed::ObservationStore store{std::filesystem::path(store_dir)};
    feed::CollectorReport report;
    if (transport_kind == "replay") {
        feed::ReplayTransport transport{std::filesystem::path(kv.get("replay_dir"))};
        // Replays use a simulated clock pinned to a configurable epoch so
        // the resulting store is reproducible.
        feed::SimulatedClock clock{kv.get_int_or("start_epoch_s", 1700000000) * 1000};
        report = feed::run_collector(jobs, transport, store, clock, options);
    } else if (transport_kind == "live") {
        feed::LiveTransportOptions live;
        live.min_request_gap_s = kv.get_double_or("min_request_gap_s", 0.05);
        feed::LiveTransport transport{live};
        feed::SystemClock clock;
        report = feed::run_collector(jobs, transport, store, clock, options);
    } else {
        throw ConfigError("transport must be 'live' or 'replay', got '" + transport_kind + "'");
    }
    std::printf("collect: %lld observations (%lld failures) -> %s\n", report.observations,
                report.fetch_failures, store_dir.c_str());
    return kOk;
}

int cmd_calibrate(const std::string& samples_path, double v_max, double design_speed,
                  const std::string& out) {
    const auto samples = calib::load_samples_csv(samples_path);
    const auto fits = calib::fit_status_gaussians(samples);
    if (v_max <= 0) {
        if (design_speed <= 0)
            throw ConfigError("calibrate needs --vmax or --design-speed");
        v_max = calib::default_v_max(design_speed, samples);
    }
    const auto table = calib::build_table(fits, v_max);
    calib::save_table_csv(out, table);
    for (const auto& r : table.ranges)
        std::printf("calibrate: %-9s %5.0f..%-5.0f rep %.0f km/h\n",
                    feed::to_string(r.status).c_str(), r.lo_kmh, r.hi_kmh, r.rep_kmh);
    return kOk;
}

int cmd_convert(const std::string& store_dir, const std::string& table_path,
                const std::string& params_path, int lanes, int bin_seconds,
                const std::string& out) {
    if (lanes < 1) throw InputError("lane count must be >= 1");
    const auto observations = feed::ObservationStore::read_directory(store_dir);
    const auto table = calib::load_table_csv(table_path);
    const auto params = flow::load_flow_params(params_path);

    const auto profile = feed::aggregate_daily_profile(observations, bin_seconds, table);
    std::vector<double> demand;
    demand.reserve(profile.bins.size());
    for (size_t i = 0; i < profile.bins.size(); ++i) {
        const auto& bin = profile.bins[i];
        const std::string where =
            "bin " + std::to_string(i) + " (" + util::format_hhmm(i * bin_seconds / 3600.0) + ")";
        if (bin.missing) throw InputError(where + " has no observations");
        try {
            const double per_lane = flow::invert_practical(bin.mean_kmh, params);
            demand.push_back(per_lane * lanes);
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
    }
    delay::save_demand_csv(out, demand);
    std::printf("convert: %zu bins x %d s -> %s\n", demand.size(), bin_seconds, out.c_str());
    return kOk;
}

opt::SweepSpec sweep_spec_from_scenario(const delay::WorkZoneScenario& scenario) {
    opt::SweepSpec spec;
    spec.duration_h = scenario.duration_h;
    spec.td_h = scenario.td_h;
    spec.daily_demand_pcu_h = scenario.demand_pcu_h;
    const double steps = 24.0 / scenario.td_h;
    if (scenario.demand_pcu_h.size() != static_cast<size_t>(std::llround(steps)))
        throw InputError("scenario demand must cover 24 h at td resolution (" +
                         std::to_string(std::llround(steps)) + " steps, got " +
                         std::to_string(scenario.demand_pcu_h.size()) + ")");
    return spec;
}

int cmd_delay(const std::string& scenario_path, const std::string& start_hhmm,
              const std::string& out) {
    const auto scenario = delay::load_scenario(scenario_path);
    double start_h = start_hhmm.empty() ? delay::scenario_start_hour(scenario_path)
                                        : util::parse_hhmm(start_hhmm);
    if (start_h < 0) start_h = 0.0;

    const auto spec = sweep_spec_from_scenario(scenario);
    const auto result = opt::run_candidate(start_h, spec, scenario);
    if (!out.empty()) delay::write_step_report_csv(out, result);
    std::printf("delay: start %s, total %.1f veh h, baseline %.1f veh h, added %.1f veh h\n",
                util::format_hhmm(start_h).c_str(), result.total_veh_h,
                result.baseline_total_veh_h, result.added_veh_h);
    return kOk;
}

int cmd_optimize(const std::string& scenario_path, double grid_min, double tie_tolerance,
                 const std::string& out) {
    const auto scenario = delay::load_scenario(scenario_path);
    auto spec = sweep_spec_from_scenario(scenario);
    spec.candidate_start_h = opt::default_candidate_grid(grid_min);
    spec.tie_tolerance_veh_h = tie_tolerance;

    const auto result = opt::sweep(spec, scenario);
    if (!out.empty()) opt::emit_curve_csv(out, result);

    const auto& best = result.curve[result.best_index];
    const int n = static_cast<int>(result.curve.size());
    std::string window;
    if (result.optimal_window.size() == result.curve.size()) {
        window = "every start time";
    } else {
        // The window is one contiguous cyclic run; report its ends.
        std::vector<bool> in(n, false);
        for (int idx : result.optimal_window) in[idx] = true;
        int first = result.optimal_window.front(), last = result.optimal_window.back();
        for (int idx : result.optimal_window) {
            if (!in[(idx - 1 + n) % n]) first = idx;
            if (!in[(idx + 1) % n]) last = idx;
        }
        window = util::format_hhmm(result.curve[first].start_h) + ".." +
                 util::format_hhmm(result.curve[last].start_h);
    }
    std::printf("optimize: best start %s (added %.1f veh h), window %s (%zu candidates)\n",
                util::format_hhmm(best.start_h).c_str(), best.added_veh_h, window.c_str(),
                result.optimal_window.size());
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"road traffic status collection and work-zone scheduling toolkit", "roadwork"};
    app.require_subcommand(1);

    std::string roads_file, pointnet, config, samples, store_dir, table_path, params_path;
    std::string scenario_path, out, transport_kind = "replay", start_hhmm;
    double spacing_m = 50.0, duration_s = 300.0, period_s = 0.0;
    double v_max = 0.0, design_speed = 0.0, grid_min = 15.0, tie_tolerance = -1.0;
    int lanes = 1, bin_seconds = 900;
    bool continuous = false;

    auto* discretize = app.add_subcommand("discretize", "polyline roads to a monitoring point net");
    discretize->add_option("--roads", roads_file, "roads CSV (road_id,lat,lng)")
        ->required()
        ->envname("ROADWORK_ROADS");
    discretize->add_option("--spacing", spacing_m, "point spacing in meters")
        ->envname("ROADWORK_SPACING");
    discretize->add_option("--out", out, "point-net CSV path")->required()->envname("ROADWORK_OUT");

    auto* collect = app.add_subcommand("collect", "fetch tiles and record traffic status");
    collect->add_option("--config", config, "collector key=value config")
        ->required()
        ->envname("ROADWORK_CONFIG");
    collect->add_option("--pointnet", pointnet, "point-net CSV")->required();
    collect->add_option("--transport", transport_kind, "live or replay")
        ->envname("ROADWORK_TRANSPORT");
    collect->add_option("--duration", duration_s, "run length in seconds")
        ->envname("ROADWORK_DURATION");
    collect->add_flag("--continuous", continuous, "run until interrupted (SIGINT)");
    collect->add_option("--period", period_s, "override sampling period in seconds")
        ->envname("ROADWORK_PERIOD");
    collect->add_option("--out", out, "override store directory")->envname("ROADWORK_OUT");

    auto* calibrate = app.add_subcommand("calibrate", "fit a status-to-speed quantization table");
    calibrate->add_option("--samples", samples, "calibration CSV (speed_kmh,status)")->required();
    calibrate->add_option("--vmax", v_max, "upper bound of the smooth range (km/h)");
    calibrate->add_option("--design-speed", design_speed, "road design speed (km/h)");
    calibrate->add_option("--out", out, "table CSV path")->required()->envname("ROADWORK_OUT");

    auto* convert = app.add_subcommand("convert", "observation store to a demand profile");
    convert->add_option("--store", store_dir, "observation store directory")->required();
    convert->add_option("--table", table_path, "quantization table CSV")->required();
    convert->add_option("--params", params_path, "flow model parameter file")->required();
    convert->add_option("--lanes", lanes, "approach lane count")->envname("ROADWORK_LANES");
    convert->add_option("--bin", bin_seconds, "profile bin length in seconds");
    convert->add_option("--out", out, "demand CSV path")->required()->envname("ROADWORK_OUT");

    auto* delay_cmd = app.add_subcommand("delay", "work-zone delay for one start time");
    delay_cmd->add_option("--scenario", scenario_path, "scenario key=value file")->required();
    delay_cmd->add_option("--start", start_hhmm, "work start, HH:MM (default from scenario)");
    delay_cmd->add_option("--out", out, "step report CSV path")->envname("ROADWORK_OUT");

    auto* optimize = app.add_subcommand("optimize", "sweep start times for minimum added delay");
    optimize->add_option("--scenario", scenario_path, "scenario key=value file")->required();
    optimize->add_option("--grid-min", grid_min, "candidate grid step in minutes")
        ->envname("ROADWORK_GRID_MIN");
    optimize->add_option("--tie-tolerance", tie_tolerance,
                         "optimal-window tolerance in veh h (default 1% of the minimum)");
    optimize->add_option("--out", out, "curve CSV path")->envname("ROADWORK_OUT");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (discretize->parsed()) return cmd_discretize(roads_file, spacing_m, out);
        if (collect->parsed())
            return cmd_collect(config, pointnet, transport_kind, duration_s, continuous,
                               period_s, out);
        if (calibrate->parsed()) return cmd_calibrate(samples, v_max, design_speed, out);
        if (convert->parsed())
            return cmd_convert(store_dir, table_path, params_path, lanes, bin_seconds, out);
        if (delay_cmd->parsed()) return cmd_delay(scenario_path, start_hhmm, out);
        if (optimize->parsed()) return cmd_optimize(scenario_path, grid_min, tie_tolerance, out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
    return kUsage;
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

} // namespace roadwork::cli
