// Regenerates the bundled fixtures under data/: tile images + manifest,
// calibration sample sets, the demo demand profile and a synthetic week
// of observations. Deterministic so the committed files can be rebuilt.

#include "roadwork/classify.hpp"
#include "roadwork/geo.hpp"
#include "roadwork/image.hpp"
#include "roadwork/calib.hpp"
#include "roadwork/stats.hpp"
#include "roadwork/store.hpp"
#include "roadwork/util.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace roadwork;
namespace fs = std::filesystem;

namespace {

struct TileSpec {
    long long x, y;
    int zoom;
    std::uint8_t r, g, b;
    const char* label;
};

const std::vector<TileSpec> kTiles = {
    {105113, 27854, 19, 0, 255, 0, "smooth"},
    {105114, 27854, 19, 250, 160, 0, "slow"},
    {105113, 27855, 19, 210, 60, 60, "congested"},
    {105114, 27855, 19, 150, 40, 40, "severe"},
};

void write_tiles(const fs::path& dir) {
    nlohmann::json manifest;
    manifest["param_x"] = "x";
    manifest["param_y"] = "y";
    manifest["param_zoom"] = "level";
    manifest["tiles"] = nlohmann::json::array();

    for (const auto& t : kTiles) {
        img::Image tile;
        tile.width = 256;
        tile.height = 256;
        tile.channels = 4;
        tile.pixels.assign(static_cast<size_t>(256) * 256 * 4, 0);   // transparent
        // Horizontal road stroke through the tile center, 5 px wide.
        for (int y = 126; y <= 130; ++y) {
            for (int x = 0; x < 256; ++x) {
                std::uint8_t* p = tile.at(x, y);
                p[0] = t.r;
                p[1] = t.g;
                p[2] = t.b;
                p[3] = 255;
            }
        }
        const std::string name = std::to_string(t.x) + "_" + std::to_string(t.y) + "_" +
                                 std::to_string(t.zoom) + ".png";
        util::write_binary_file(dir / name, img::encode_png(tile));
        manifest["tiles"].push_back({{"x", t.x}, {"y", t.y}, {"zoom", t.zoom}, {"file", name}});
        std::printf("tile %s (%s)\n", name.c_str(), t.label);
    }
    util::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    // Point net whose slippy projection lands on the center of each tile.
    std::vector<geo::RoadPoint> points;
    for (size_t i = 0; i < kTiles.size(); ++i) {
        const auto& t = kTiles[i];
        geo::TileAddress addr{t.zoom, t.x, t.y, 128.0, 128.0};
        geo::RoadPoint rp;
        rp.point_id = "T1#" + std::to_string(i);
        rp.pos = geo::tile_to_geo(addr);
        rp.road_id = "T1";
        rp.chainage_m = static_cast<double>(i) * 50.0;
        points.push_back(rp);
    }
    geo::write_pointnet_csv(dir / "pointnet.csv", points);
}

// Deterministic per-status sample set: stratified normal quantiles, so
// the sample mean equals the target mean exactly (pairs cancel).
void append_stratified(std::vector<calib::CalibrationSample>& out, feed::TrafficStatus status,
                       double mean, double sigma, int n) {
    for (int i = 0; i < n; ++i) {
        const double p = (i + 0.5) / n;
        double speed = mean + sigma * stats::normal_quantile(p);
        speed = std::round(speed * 100.0) / 100.0;
        out.push_back({speed, status});
    }
}

void write_calibration(const fs::path& dir) {
    using feed::TrafficStatus;
    {
        std::vector<calib::CalibrationSample> samples;
        append_stratified(samples, TrafficStatus::Severe, 12.0, 4.2, 180);
        append_stratified(samples, TrafficStatus::Congested, 33.0, 6.3, 220);
        append_stratified(samples, TrafficStatus::Slow, 44.0, 4.6, 240);
        append_stratified(samples, TrafficStatus::Smooth, 57.0, 6.5, 300);
        calib::save_samples_csv(dir / "e60_samples.csv", samples);
        std::printf("calibration e60: %zu samples\n", samples.size());
    }
    {
        std::vector<calib::CalibrationSample> samples;
        append_stratified(samples, TrafficStatus::Severe, 7.0, 2.0, 180);
        append_stratified(samples, TrafficStatus::Congested, 18.0, 5.5, 220);
        append_stratified(samples, TrafficStatus::Slow, 44.0, 6.5, 240);
        append_stratified(samples, TrafficStatus::Smooth, 62.0, 9.0, 300);
        calib::save_samples_csv(dir / "inner_ring_samples.csv", samples);
        std::printf("calibration inner ring: %zu samples\n", samples.size());
    }
}

// Double-peaked weekday shape with an overnight trough; values are
// approach totals (three lanes).
double demand_at(double hour) {
    static const std::vector<std::pair<double, double>> anchors = {
        {0.0, 950},  {4.0, 850},   {5.0, 1000},  {6.0, 1800},  {7.0, 3600},
        {8.0, 4200}, {9.0, 4100},  {10.0, 3400}, {12.0, 3200}, {14.0, 3300},
        {16.0, 3800},{17.5, 4150}, {19.0, 3700}, {20.0, 2900}, {21.0, 1900},
        {22.0, 1250},{23.0, 1000}, {24.0, 950},
    };
    for (size_t i = 1; i < anchors.size(); ++i) {
        if (hour <= anchors[i].first) {
            const auto& [h0, q0] = anchors[i - 1];
            const auto& [h1, q1] = anchors[i];
            return q0 + (q1 - q0) * (hour - h0) / (h1 - h0);
        }
    }
    return anchors.back().second;
}

void write_demand(const fs::path& dir) {
    const double td_h = 0.25;
    std::vector<double> demand;
    for (int i = 0; i < 96; ++i)
        demand.push_back(std::round(demand_at((i + 0.5) * td_h)));
    const fs::path path = dir / "case_study_profile.csv";
    std::string body = "step_index,Q_pcu_per_h\n";
    for (size_t i = 0; i < demand.size(); ++i)
        body += std::to_string(i) + "," + util::format_double(demand[i]) + "\n";
    util::write_text_file(path, body);
    std::printf("demand profile: 96 steps -> %s\n", path.c_str());
}

// One week of 15-minute statuses for two points: commuter peaks, calm
// nights, a sprinkle of Severe and Unknown.
void write_observation_week(const fs::path& dir) {
    using feed::TrafficStatus;
    fs::remove_all(dir);   // the store is append-only; start from scratch
    feed::ObservationStore store{dir};

    const std::int64_t week_start = 1709510400;   // 2024-03-04 00:00 UTC, a Monday
    for (int day = 0; day < 7; ++day) {
        for (int bin = 0; bin < 96; ++bin) {
            const double hour = bin * 0.25;
            for (int point = 0; point < 2; ++point) {
                TrafficStatus status;
                if (hour < 6.0) status = TrafficStatus::Smooth;
                else if (hour < 7.0) status = TrafficStatus::Slow;
                else if (hour < 9.0)
                    status = ((day + bin) % 5 == 0) ? TrafficStatus::Severe
                                                    : TrafficStatus::Congested;
                else if (hour < 16.5)
                    status = ((day + bin) % 3 == 0) ? TrafficStatus::Smooth
                                                    : TrafficStatus::Slow;
                else if (hour < 19.0) status = TrafficStatus::Congested;
                else if (hour < 21.0) status = TrafficStatus::Slow;
                else status = TrafficStatus::Smooth;

                if ((day * 96 + bin + point * 17) % 53 == 0) status = TrafficStatus::Unknown;

                feed::Observation obs;
                obs.point_id = "R1#" + std::to_string(point);
                obs.timestamp_utc = week_start + static_cast<std::int64_t>(day) * 86400 +
                                    static_cast<std::int64_t>(bin) * 900;
                obs.status = status;
                switch (status) {
                case TrafficStatus::Smooth: obs.r = 0; obs.g = 255; obs.b = 0; break;
                case TrafficStatus::Slow: obs.r = 250; obs.g = 160; obs.b = 0; break;
                case TrafficStatus::Congested: obs.r = 210; obs.g = 60; obs.b = 60; break;
                case TrafficStatus::Severe: obs.r = 150; obs.g = 40; obs.b = 40; break;
                case TrafficStatus::Unknown: obs.note = "no classifiable pixel"; break;
                }
                store.append(obs);
            }
        }
    }
    std::printf("observation week -> %s\n", dir.c_str());
}

} // namespace

int main(int argc, char** argv) {
    fs::path data_dir = argc > 1 ? argv[1] :
#ifdef ROADWORK_DATA_DIR
        ROADWORK_DATA_DIR;
#else
        "data";
#endif
    std::printf("writing fixtures under %s\n", data_dir.c_str());
    write_tiles(data_dir / "tiles");
    write_calibration(data_dir / "calibration");
    write_demand(data_dir / "demand");
    write_observation_week(data_dir / "observations" / "synthetic_week");
    return 0;
}
