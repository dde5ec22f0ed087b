#pragma once

#include "roadwork/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace roadwork::feed {

// Four-level road condition as drawn on commercial traffic tiles, plus
// Unknown for background / missing data.
enum class TrafficStatus { Smooth, Slow, Congested, Severe, Unknown };

std::string to_string(TrafficStatus s);
TrafficStatus status_from_string(const std::string& name);   // throws InputError

// One color rule: a status plus conditions on the sampled RGB bytes.
// gb constrains the green/blue relation: "equal" means |G - B| <= tau,
// "differ" means |G - B| > tau, "any" skips the check.
struct ColorRule {
    TrafficStatus status = TrafficStatus::Unknown;
    enum class GreenBlue { Equal, Differ, Any } gb = GreenBlue::Any;
    int r_min = 0, r_max = 255;
    int g_min = 0, g_max = 255;
    int b_min = 0, b_max = 255;
};

// Provider-specific palette rules, loadable as data. The shipped default
// implements the common four-color palette: strokes where G and B differ
// are green/orange (split on R), strokes where G ~ B are red/purple
// (split on R at 200).
struct ClassifierRules {
    int tau = 8;           // tolerance applied to the G = B comparison
    int min_alpha = 128;   // pixels with alpha below this are background
    std::vector<ColorRule> rules;
};

ClassifierRules default_classifier_rules();
ClassifierRules load_classifier_rules(const std::filesystem::path& json_path);
void save_classifier_rules(const std::filesystem::path& json_path, const ClassifierRules& rules);

// Total on the RGB cube for the default rules: every color maps to
// exactly one status. Returns Unknown only if no rule matches
// (possible with custom rule sets).
TrafficStatus classify_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                           const ClassifierRules& rules);

struct SampleResult {
    TrafficStatus status = TrafficStatus::Unknown;
    std::uint8_t r = 0, g = 0, b = 0;
    bool has_rgb = false;
};

// Classifies the pixel at (offset_x, offset_y). If that pixel is
// background (transparent) or unclassifiable, searches outward for the
// nearest classifiable pixel within `radius_px` (Euclidean), returning
// Unknown when none exists. Offsets must lie inside the image.
SampleResult sample_point(const img::Image& tile, double offset_x, double offset_y,
                          int radius_px, const ClassifierRules& rules);

} // namespace roadwork::feed
