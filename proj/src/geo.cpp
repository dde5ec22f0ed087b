#include "roadwork/geo.hpp"

#include "roadwork/errors.hpp"
#include "roadwork/util.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace roadwork::geo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEarthRadiusM = 6371008.8;   // mean Earth radius

double deg2rad(double d) { return d * kPi / 180.0; }

std::mutex g_profiles_mutex;

std::map<std::string, ProviderProfile>& profile_registry() {
    static std::map<std::string, ProviderProfile> registry = [] {
        std::map<std::string, ProviderProfile> m;
        m.emplace("slippy", ProviderProfile{});
        return m;
    }();
    return registry;
}

} // namespace

void validate(const GeoPoint& p) {
    if (!(p.lat >= -90.0 && p.lat <= 90.0))
        throw InputError("latitude out of range: " + util::format_double(p.lat));
    if (!(p.lng >= -180.0 && p.lng <= 180.0))
        throw InputError("longitude out of range: " + util::format_double(p.lng));
}

void validate(const Polyline& line) {
    if (line.vertices.size() < 2)
        throw InputError("polyline needs at least 2 vertices");
    for (size_t i = 0; i < line.vertices.size(); ++i) {
        validate(line.vertices[i]);
        if (i > 0 && line.vertices[i].lat == line.vertices[i - 1].lat &&
            line.vertices[i].lng == line.vertices[i - 1].lng)
            throw InputError("polyline has consecutive duplicate vertices at index " +
                             std::to_string(i));
    }
}

const ProviderProfile& default_profile() {
    std::lock_guard<std::mutex> lock(g_profiles_mutex);
    return profile_registry().at("slippy");
}

void register_profile(const ProviderProfile& profile) {
    if (profile.name.empty()) throw ConfigError("provider profile needs a name");
    std::lock_guard<std::mutex> lock(g_profiles_mutex);
    profile_registry()[profile.name] = profile;
}

const ProviderProfile& find_profile(const std::string& name) {
    std::lock_guard<std::mutex> lock(g_profiles_mutex);
    auto it = profile_registry().find(name);
    if (it == profile_registry().end())
        throw ConfigError("unknown provider profile: '" + name + "'");
    return it->second;
}

PixelPoint world_pixel(const GeoPoint& p, int zoom, const ProviderProfile& profile) {
    validate(p);
    if (zoom < profile.min_zoom || zoom > profile.max_zoom)
        throw InputError("zoom " + std::to_string(zoom) + " outside profile '" + profile.name +
                         "' range [" + std::to_string(profile.min_zoom) + ", " +
                         std::to_string(profile.max_zoom) + "]");
    GeoPoint q = profile.datum_transform ? profile.datum_transform(p) : p;
    if (std::abs(q.lat) > profile.max_lat_deg)
        throw InputError("latitude " + util::format_double(q.lat) +
                         " outside projectable range (|lat| <= " +
                         util::format_double(profile.max_lat_deg) + ")");

    const double extent = static_cast<double>(profile.tile_size) * std::exp2(zoom);
    double px = (q.lng + 180.0) / 360.0 * extent;
    const double lat_rad = deg2rad(q.lat);
    const double merc = std::log(std::tan(lat_rad) + 1.0 / std::cos(lat_rad));
    double py = (1.0 - merc / kPi) / 2.0 * extent;

    // Clamp projection-boundary values into [0, extent).
    if (px >= extent) px = std::nextafter(extent, 0.0);
    if (py >= extent) py = std::nextafter(extent, 0.0);
    if (px < 0) px = 0;
    if (py < 0) py = 0;
    return {px, py};
}

TileAddress geo_to_tile(const GeoPoint& p, int zoom, const ProviderProfile& profile) {
    const PixelPoint px = world_pixel(p, zoom, profile);
    TileAddress t;
    t.zoom = zoom;
    t.x = static_cast<long long>(std::floor(px.x / profile.tile_size));
    t.y = static_cast<long long>(std::floor(px.y / profile.tile_size));
    t.offset_x = px.x - static_cast<double>(t.x) * profile.tile_size;
    t.offset_y = px.y - static_cast<double>(t.y) * profile.tile_size;
    return t;
}

GeoPoint tile_to_geo(const TileAddress& t, const ProviderProfile& profile) {
    if (t.zoom < profile.min_zoom || t.zoom > profile.max_zoom)
        throw InputError("zoom " + std::to_string(t.zoom) + " outside profile range");
    const long long n = 1LL << t.zoom;
    if (t.x < 0 || t.x >= n || t.y < 0 || t.y >= n)
        throw InputError("tile (" + std::to_string(t.x) + ", " + std::to_string(t.y) +
                         ") out of range at zoom " + std::to_string(t.zoom));
    if (t.offset_x < 0 || t.offset_x >= profile.tile_size || t.offset_y < 0 ||
        t.offset_y >= profile.tile_size)
        throw InputError("tile offset outside [0, tile_size)");

    const double extent = static_cast<double>(profile.tile_size) * std::exp2(t.zoom);
    const double px = static_cast<double>(t.x) * profile.tile_size + t.offset_x;
    const double py = static_cast<double>(t.y) * profile.tile_size + t.offset_y;

    GeoPoint p;
    p.lng = px / extent * 360.0 - 180.0;
    const double merc = kPi * (1.0 - 2.0 * py / extent);
    p.lat = std::atan(std::sinh(merc)) * 180.0 / kPi;
    return p;
}

double ground_resolution_m(double lat_deg, int zoom, const ProviderProfile& profile) {
    const double extent = static_cast<double>(profile.tile_size) * std::exp2(zoom);
    return std::cos(deg2rad(lat_deg)) * 2.0 * kPi * kEarthRadiusM / extent;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = deg2rad(a.lat), lat2 = deg2rad(b.lat);
    const double dlat = lat2 - lat1;
    const double dlng = deg2rad(b.lng - a.lng);
    const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1) * std::cos(lat2) * std::sin(dlng / 2) * std::sin(dlng / 2);
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(s)));
}

double polyline_length_m(const Polyline& line) {
    validate(line);
    double total = 0;
    for (size_t i = 1; i < line.vertices.size(); ++i)
        total += haversine_m(line.vertices[i - 1], line.vertices[i]);
    return total;
}

std::vector<GeoPoint> discretize(const Polyline& line, double spacing_m) {
    validate(line);
    if (!(spacing_m > 0)) throw InputError("spacing must be > 0");

    std::vector<double> seg_len(line.vertices.size() - 1);
    double total = 0;
    for (size_t i = 0; i + 1 < line.vertices.size(); ++i) {
        seg_len[i] = haversine_m(line.vertices[i], line.vertices[i + 1]);
        total += seg_len[i];
    }
    if (total <= 0) throw InputError("degenerate polyline: zero total length");

    // Position at arc length s, linear within each segment.
    auto point_at = [&](double s) -> GeoPoint {
        double acc = 0;
        for (size_t i = 0; i < seg_len.size(); ++i) {
            if (s <= acc + seg_len[i] || i + 1 == seg_len.size()) {
                const double f = std::min(1.0, std::max(0.0, (s - acc) / seg_len[i]));
                const GeoPoint& a = line.vertices[i];
                const GeoPoint& b = line.vertices[i + 1];
                return {a.lat + f * (b.lat - a.lat), a.lng + f * (b.lng - a.lng), a.datum};
            }
            acc += seg_len[i];
        }
        return line.vertices.back();
    };

    std::vector<GeoPoint> out;
    const double eps = 1e-9 * total;
    for (long long k = 0; static_cast<double>(k) * spacing_m < total - eps; ++k)
        out.push_back(point_at(static_cast<double>(k) * spacing_m));
    out.push_back(line.vertices.back());
    return out;
}

std::vector<RoadPoint> make_pointnet(const std::string& road_id, const Polyline& line,
                                     double spacing_m) {
    const auto points = discretize(line, spacing_m);
    const double total = polyline_length_m(line);
    std::vector<RoadPoint> out;
    out.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        RoadPoint rp;
        rp.point_id = road_id + "#" + std::to_string(i);
        rp.pos = points[i];
        rp.road_id = road_id;
        rp.chainage_m = (i + 1 == points.size()) ? total : static_cast<double>(i) * spacing_m;
        out.push_back(std::move(rp));
    }
    return out;
}

static const std::string kPointnetHeader = "point_id,lat,lng,road_id,chainage_m";

void write_pointnet_csv(const std::filesystem::path& path, const std::vector<RoadPoint>& points) {
    std::string body = kPointnetHeader + "\n";
    for (const auto& p : points) {
        body += util::csv_join({p.point_id, util::format_double(p.pos.lat),
                                util::format_double(p.pos.lng), p.road_id,
                                util::format_double(p.chainage_m)});
        body += '\n';
    }
    util::write_text_file(path, body);
}

std::vector<RoadPoint> read_pointnet_csv(const std::filesystem::path& path) {
    const auto rows = util::read_csv(path, kPointnetHeader);
    std::vector<RoadPoint> out;
    for (const auto& row : rows) {
        if (row.size() != 5)
            throw InputError(path.string() + ": expected 5 columns, got " +
                             std::to_string(row.size()));
        RoadPoint p;
        p.point_id = row[0];
        p.pos.lat = util::parse_double(row[1]);
        p.pos.lng = util::parse_double(row[2]);
        p.road_id = row[3];
        p.chainage_m = util::parse_double(row[4]);
        validate(p.pos);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace roadwork::geo
