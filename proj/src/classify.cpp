#include "roadwork/classify.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace roadwork::feed {

using nlohmann::json;

std::string to_string(TrafficStatus s) {
    switch (s) {
    case TrafficStatus::Smooth: return "smooth";
    case TrafficStatus::Slow: return "slow";
    case TrafficStatus::Congested: return "congested";
    case TrafficStatus::Severe: return "severe";
    case TrafficStatus::Unknown: return "unknown";
    }
    return "unknown";
}

TrafficStatus status_from_string(const std::string& name) {
    const std::string n = util::to_lower(util::trim(name));
    if (n == "smooth") return TrafficStatus::Smooth;
    if (n == "slow") return TrafficStatus::Slow;
    if (n == "congested") return TrafficStatus::Congested;
    if (n == "severe") return TrafficStatus::Severe;
    if (n == "unknown") return TrafficStatus::Unknown;
    throw InputError("unknown traffic status: '" + name + "'");
}

ClassifierRules default_classifier_rules() {
    ClassifierRules rules;
    rules.tau = 8;
    rules.min_alpha = 128;
    using GB = ColorRule::GreenBlue;
    rules.rules = {
        {TrafficStatus::Smooth, GB::Differ, 0, 240, 0, 255, 0, 255},
        {TrafficStatus::Slow, GB::Differ, 241, 255, 0, 255, 0, 255},
        {TrafficStatus::Congested, GB::Equal, 200, 255, 0, 255, 0, 255},
        {TrafficStatus::Severe, GB::Equal, 0, 199, 0, 255, 0, 255},
    };
    return rules;
}

namespace {

ColorRule::GreenBlue gb_from_string(const std::string& s) {
    if (s == "equal") return ColorRule::GreenBlue::Equal;
    if (s == "differ") return ColorRule::GreenBlue::Differ;
    if (s == "any") return ColorRule::GreenBlue::Any;
    throw ConfigError("classifier rules: gb must be equal/differ/any, got '" + s + "'");
}

std::string gb_to_string(ColorRule::GreenBlue gb) {
    switch (gb) {
    case ColorRule::GreenBlue::Equal: return "equal";
    case ColorRule::GreenBlue::Differ: return "differ";
    case ColorRule::GreenBlue::Any: return "any";
    }
    return "any";
}

} // namespace

ClassifierRules load_classifier_rules(const std::filesystem::path& json_path) {
    json j;
    try {
        j = json::parse(util::read_text_file(json_path));
    } catch (const json::parse_error& e) {
        throw ConfigError(json_path.string() + ": " + e.what());
    }
    ClassifierRules rules;
    rules.tau = j.value("tau", 8);
    rules.min_alpha = j.value("min_alpha", 128);
    if (!j.contains("rules") || !j["rules"].is_array() || j["rules"].empty())
        throw ConfigError(json_path.string() + ": 'rules' array required");
    for (const auto& r : j["rules"]) {
        ColorRule rule;
        rule.status = status_from_string(r.at("status").get<std::string>());
        rule.gb = gb_from_string(r.value("gb", "any"));
        rule.r_min = r.value("r_min", 0);
        rule.r_max = r.value("r_max", 255);
        rule.g_min = r.value("g_min", 0);
        rule.g_max = r.value("g_max", 255);
        rule.b_min = r.value("b_min", 0);
        rule.b_max = r.value("b_max", 255);
        rules.rules.push_back(rule);
    }
    return rules;
}

void save_classifier_rules(const std::filesystem::path& json_path, const ClassifierRules& rules) {
    json j;
    j["tau"] = rules.tau;
    j["min_alpha"] = rules.min_alpha;
    j["rules"] = json::array();
    for (const auto& r : rules.rules) {
        json jr;
        jr["status"] = to_string(r.status);
        jr["gb"] = gb_to_string(r.gb);
        jr["r_min"] = r.r_min;
        jr["r_max"] = r.r_max;
        jr["g_min"] = r.g_min;
        jr["g_max"] = r.g_max;
        jr["b_min"] = r.b_min;
        jr["b_max"] = r.b_max;
        j["rules"].push_back(jr);
    }
    util::write_text_file(json_path, j.dump(2) + "\n");
}

TrafficStatus classify_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                           const ClassifierRules& rules) {
    const int gb_delta = std::abs(int(g) - int(b));
    for (const auto& rule : rules.rules) {
        if (rule.gb == ColorRule::GreenBlue::Equal && gb_delta > rules.tau) continue;
        if (rule.gb == ColorRule::GreenBlue::Differ && gb_delta <= rules.tau) continue;
        if (r < rule.r_min || r > rule.r_max) continue;
        if (g < rule.g_min || g > rule.g_max) continue;
        if (b < rule.b_min || b > rule.b_max) continue;
        return rule.status;
    }
    return TrafficStatus::Unknown;
}

SampleResult sample_point(const img::Image& tile, double offset_x, double offset_y,
                          int radius_px, const ClassifierRules& rules) {
    if (tile.width <= 0 || tile.height <= 0 || tile.pixels.empty())
        throw InputError("sample_point: empty image");
    if (radius_px < 0) throw InputError("sample_point: radius must be >= 0");
    const int cx = static_cast<int>(std::floor(offset_x));
    const int cy = static_cast<int>(std::floor(offset_y));
    if (!tile.contains(cx, cy))
        throw InputError("sample_point: offset outside tile");

    auto opaque = [&](int x, int y) {
        return tile.channels < 4 || tile.at(x, y)[3] >= rules.min_alpha;
    };
    auto classify_at = [&](int x, int y) {
        const std::uint8_t* p = tile.at(x, y);
        return classify_rgb(p[0], p[1], p[2], rules);
    };

    SampleResult center;
    center.status = TrafficStatus::Unknown;
    if (opaque(cx, cy)) {
        const std::uint8_t* p = tile.at(cx, cy);
        center.r = p[0];
        center.g = p[1];
        center.b = p[2];
        center.has_rgb = true;
        center.status = classify_at(cx, cy);
        if (center.status != TrafficStatus::Unknown) return center;
    }

    // Search the neighborhood for the nearest classifiable pixel.
    struct Candidate {
        int dx, dy;
        int dist2;
    };
    std::vector<Candidate> ring;
    for (int dy = -radius_px; dy <= radius_px; ++dy) {
        for (int dx = -radius_px; dx <= radius_px; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int d2 = dx * dx + dy * dy;
            if (d2 > radius_px * radius_px) continue;
            ring.push_back({dx, dy, d2});
        }
    }
    std::sort(ring.begin(), ring.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        if (a.dy != b.dy) return a.dy < b.dy;
        return a.dx < b.dx;
    });

    for (const auto& c : ring) {
        const int x = cx + c.dx, y = cy + c.dy;
        if (!tile.contains(x, y) || !opaque(x, y)) continue;
        const TrafficStatus s = classify_at(x, y);
        if (s == TrafficStatus::Unknown) continue;
        const std::uint8_t* p = tile.at(x, y);
        return {s, p[0], p[1], p[2], true};
    }
    return center;   // Unknown; carries the center RGB when it was opaque
}

} // namespace roadwork::feed
