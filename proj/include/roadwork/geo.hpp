#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace roadwork::geo {

struct GeoPoint {
    double lat = 0.0;   // degrees, [-90, 90]
    double lng = 0.0;   // degrees, [-180, 180]
    std::string datum = "wgs84";
};

void validate(const GeoPoint& p);

struct TileAddress {
    int zoom = 0;
    long long x = 0;         // tile column
    long long y = 0;         // tile row
    double offset_x = 0.0;   // pixel within tile, [0, tile_size)
    double offset_y = 0.0;
};

struct Polyline {
    std::vector<GeoPoint> vertices;   // length >= 2, consecutive vertices distinct
};

void validate(const Polyline& line);

// A provider profile bundles the projection conventions of one map source:
// tile size, zoom range, projection latitude bound and an optional datum
// pre-transform. The default is the spherical slippy-map scheme with a
// 256 px tile and a world pixel extent of tile_size * 2^zoom.
struct ProviderProfile {
    std::string name = "slippy";
    int tile_size = 256;
    int min_zoom = 0;
    int max_zoom = 22;
    double max_lat_deg = 85.05112878;   // Mercator projection bound
    std::string url_template;
    // Applied to every GeoPoint before projecting (surveyed-offset datums etc.).
    // Identity when empty.
    std::function<GeoPoint(const GeoPoint&)> datum_transform;
};

const ProviderProfile& default_profile();
// Registry so CLI configs can refer to profiles by name. "slippy" ships built in.
void register_profile(const ProviderProfile& profile);
const ProviderProfile& find_profile(const std::string& name);

// Geographic -> continuous world pixel position at the given zoom.
// x grows eastward, y grows southward (north-up tiles).
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};
PixelPoint world_pixel(const GeoPoint& p, int zoom, const ProviderProfile& profile = default_profile());

TileAddress geo_to_tile(const GeoPoint& p, int zoom, const ProviderProfile& profile = default_profile());
GeoPoint tile_to_geo(const TileAddress& t, const ProviderProfile& profile = default_profile());

// Ground size of one pixel (meters) at the given latitude and zoom.
double ground_resolution_m(double lat_deg, int zoom, const ProviderProfile& profile = default_profile());

// Great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

// Total polyline length in meters (haversine over segments).
double polyline_length_m(const Polyline& line);

// Points along the polyline at arc-length multiples of `spacing_m`,
// both endpoints always included. The trailing remainder, if any,
// still yields the final endpoint.
std::vector<GeoPoint> discretize(const Polyline& line, double spacing_m);

// --- point-net export ----------------------------------------------------

struct RoadPoint {
    std::string point_id;   // "<road_id>#<index>"
    GeoPoint pos;
    std::string road_id;
    double chainage_m = 0.0;
};

std::vector<RoadPoint> make_pointnet(const std::string& road_id, const Polyline& line, double spacing_m);

// CSV: point_id,lat,lng,road_id,chainage_m
void write_pointnet_csv(const std::filesystem::path& path, const std::vector<RoadPoint>& points);
std::vector<RoadPoint> read_pointnet_csv(const std::filesystem::path& path);

} // namespace roadwork::geo
