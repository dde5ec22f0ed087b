#include "roadwork/geo.hpp"

#include "roadwork/errors.hpp"
#include "support/temp_dir.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace roadwork;
using geo::GeoPoint;
using geo::Polyline;
using geo::TileAddress;

TEST_CASE("world center maps to the corner shared by the four central tiles") {
    const auto t = geo::geo_to_tile({0.0, 0.0}, 19);
    CHECK(t.x == (1LL << 18));
    CHECK(t.y == (1LL << 18));
    CHECK(t.offset_x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(t.offset_y == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("east hemisphere lands in tile x = 1 at zoom 1") {
    const auto t = geo::geo_to_tile({0.0, 180.0 - 1e-9}, 1);
    CHECK(t.x == 1);
}

TEST_CASE("tile corner at the world center inverts to (0, 0)") {
    const auto p = geo::tile_to_geo({19, 1LL << 18, 1LL << 18, 0.0, 0.0});
    CHECK(p.lat == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.lng == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("corner tiles at zoom 2 reach the projection bounds") {
    // y = 0 row starts at the Mercator latitude limit.
    const auto top = geo::tile_to_geo({2, 0, 0, 0.0, 0.0});
    CHECK(top.lat == doctest::Approx(geo::default_profile().max_lat_deg).epsilon(1e-6));
    CHECK(top.lng == doctest::Approx(-180.0));
    const auto t = geo::geo_to_tile({geo::default_profile().max_lat_deg, -180.0}, 2);
    CHECK(t.x == 0);
    CHECK(t.y == 0);
}

TEST_CASE("forward and inverse agree within a half pixel on a city coordinate") {
    const GeoPoint p{31.23, 121.47};
    const auto t = geo::geo_to_tile(p, 19);
    const auto back = geo::tile_to_geo(t);
    const double res = geo::ground_resolution_m(p.lat, 19);
    CHECK(geo::haversine_m(p, back) <= 0.5 * res);
}

TEST_CASE("round trip within half a pixel, random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lat_d(-84.0, 84.0);
    std::uniform_real_distribution<double> lng_d(-180.0, 180.0);
    std::uniform_int_distribution<int> zoom_d(3, 20);
    for (int i = 0; i < 300; ++i) {
        const GeoPoint p{lat_d(rng), lng_d(rng)};
        const int zoom = zoom_d(rng);
        auto t = geo::geo_to_tile(p, zoom);

        // The round trip itself stays within half a pixel of ground distance.
        const auto back = geo::tile_to_geo(t);
        const double tol = 0.5 * geo::ground_resolution_m(p.lat, zoom);
        CHECK(geo::haversine_m(p, back) <= tol);

        // Snapping to the pixel center, as sampling does, moves each axis
        // at most half a pixel.
        t.offset_x = std::floor(t.offset_x) + 0.5;
        t.offset_y = std::floor(t.offset_y) + 0.5;
        const auto snapped = geo::world_pixel(geo::tile_to_geo(t), zoom);
        const auto orig = geo::world_pixel(p, zoom);
        CHECK(std::abs(snapped.x - orig.x) <= 0.5 + 1e-6);
        CHECK(std::abs(snapped.y - orig.y) <= 0.5 + 1e-6);
    }
}

TEST_CASE("tile addresses survive inverse-then-forward, random tiles") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> zoom_d(1, 20);
    std::uniform_real_distribution<double> off_d(0.0, 255.999);
    for (int i = 0; i < 200; ++i) {
        const int zoom = zoom_d(rng);
        std::uniform_int_distribution<long long> idx_d(0, (1LL << zoom) - 1);
        const long long y_max = (1LL << zoom) - 1;
        TileAddress t{zoom, idx_d(rng), std::min(y_max, idx_d(rng)), off_d(rng), off_d(rng)};
        // Extreme rows project near the pole where the inverse loses
        // precision; keep the fixture in the usable band.
        const auto p = geo::tile_to_geo(t);
        if (std::abs(p.lat) > 84.0) continue;
        const auto back = geo::geo_to_tile(p, zoom);
        CHECK(back.x == t.x);
        CHECK(back.y == t.y);
        CHECK(back.offset_x == doctest::Approx(t.offset_x).epsilon(1e-6));
        CHECK(back.offset_y == doctest::Approx(t.offset_y).epsilon(1e-6));
    }
}

TEST_CASE("pixel coordinates grow east and south") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> lat_d(-80.0, 80.0);
    std::uniform_real_distribution<double> lng_d(-179.0, 179.0);
    for (int i = 0; i < 100; ++i) {
        const GeoPoint p{lat_d(rng), lng_d(rng)};
        const auto base = geo::world_pixel(p, 15);
        const auto east = geo::world_pixel({p.lat, p.lng + 0.01}, 15);
        const auto north = geo::world_pixel({p.lat + 0.01, p.lng}, 15);
        CHECK(east.x > base.x);
        CHECK(north.y < base.y);
    }
}

TEST_CASE("latitude beyond the projection bound is rejected") {
    CHECK_THROWS_AS(geo::geo_to_tile({86.0, 0.0}, 10), InputError);
    CHECK_THROWS_AS(geo::geo_to_tile({0.0, 0.0}, 99), InputError);
    CHECK_THROWS_AS(geo::geo_to_tile({91.0, 0.0}, 10), InputError);
}

TEST_CASE("datum transform hooks apply before projection") {
    geo::ProviderProfile shifted = geo::default_profile();
    shifted.name = "shifted_datum_test";
    shifted.datum_transform = [](const GeoPoint& p) {
        return GeoPoint{p.lat, p.lng + 0.5, p.datum};
    };
    geo::register_profile(shifted);
    const auto& found = geo::find_profile("shifted_datum_test");
    const auto plain = geo::world_pixel({10.0, 20.0}, 10);
    const auto moved = geo::world_pixel({10.0, 20.0}, 10, found);
    CHECK(moved.x > plain.x);
    CHECK(moved.y == doctest::Approx(plain.y));
    CHECK_THROWS_AS((void)geo::find_profile("nope"), ConfigError);
}

// --- discretization ---------------------------------------------------------

namespace {

// Straight segment of roughly the requested ground length, west to east
// near the given latitude.
Polyline straight_segment(double lat, double length_m) {
    const double lng_per_m = 1.0 / (111320.0 * std::cos(lat * 3.14159265358979 / 180.0));
    return {{{lat, 10.0}, {lat, 10.0 + length_m * lng_per_m}}};
}

} // namespace

TEST_CASE("a 200 m segment at 50 m spacing gives five points") {
    const auto line = straight_segment(31.0, 200.0);
    const double len = geo::polyline_length_m(line);
    const auto points = geo::discretize(line, len / 4.0);
    REQUIRE(points.size() == 5);
    for (size_t i = 1; i < points.size(); ++i) {
        const double d = geo::haversine_m(points[i - 1], points[i]);
        CHECK(d == doctest::Approx(len / 4.0).epsilon(1e-6));
    }
}

TEST_CASE("a segment shorter than the spacing keeps both endpoints") {
    const auto line = straight_segment(45.0, 30.0);
    const auto points = geo::discretize(line, 50.0);
    REQUIRE(points.size() == 2);
    CHECK(points.front().lat == line.vertices.front().lat);
    CHECK(points.back().lng == line.vertices.back().lng);
}

TEST_CASE("L-shaped polyline walks arc length across the corner") {
    // Legs of 70 m and 80 m; expect points at 0, 50, 100 and the 150 m
    // endpoint, deduplicated.
    const double lat = 31.0;
    const double m_per_deg_lat = 111132.0;
    const double lng_per_m = 1.0 / (111320.0 * std::cos(lat * 3.14159265358979 / 180.0));
    Polyline line{{{lat, 10.0},
                   {lat, 10.0 + 70.0 * lng_per_m},
                   {lat + 80.0 / m_per_deg_lat, 10.0 + 70.0 * lng_per_m}}};
    const double total = geo::polyline_length_m(line);
    REQUIRE(total == doctest::Approx(150.0).epsilon(0.01));

    const auto points = geo::discretize(line, 50.0);
    REQUIRE(points.size() == 4);

    // Independent oracle: walk the polyline accumulating haversine length
    // and measure each emitted point's arc position.
    double arc_best_ = 0;
    auto arc_position = [&](const geo::GeoPoint& p) {
        double best = 1e18, acc = 0;
        for (size_t s = 0; s + 1 < line.vertices.size(); ++s) {
            const auto& a = line.vertices[s];
            const auto& b = line.vertices[s + 1];
            const double seg = geo::haversine_m(a, b);
            for (int k = 0; k <= 2000; ++k) {
                const double f = k / 2000.0;
                const geo::GeoPoint q{a.lat + f * (b.lat - a.lat), a.lng + f * (b.lng - a.lng)};
                const double d = geo::haversine_m(p, q);
                if (d < best) {
                    best = d;
                    // remember arc length of the closest walk sample
                    arc_best_ = acc + f * seg;
                }
            }
            acc += seg;
        }
        return arc_best_;
    };
    const double expected[] = {0.0, 50.0, 100.0, total};
    for (size_t i = 0; i < points.size(); ++i)
        CHECK(arc_position(points[i]) == doctest::Approx(expected[i]).epsilon(0.001));
}

TEST_CASE("point count follows floor(length / spacing) + 1 (+1 off grid)") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> len_d(40.0, 2000.0);
    std::uniform_real_distribution<double> spacing_d(20.0, 120.0);
    for (int i = 0; i < 60; ++i) {
        const auto line = straight_segment(30.0, len_d(rng));
        const double total = geo::polyline_length_m(line);
        const double spacing = spacing_d(rng);
        const auto points = geo::discretize(line, spacing);

        const double ratio = total / spacing;
        size_t expected = static_cast<size_t>(std::floor(ratio)) + 1;
        const bool on_grid = std::abs(ratio - std::round(ratio)) < 1e-9;
        if (!on_grid) expected += 1;
        CHECK(points.size() == expected);

        // Consecutive spacing holds except for the final remainder.
        for (size_t k = 1; k + 1 < points.size(); ++k)
            CHECK(geo::haversine_m(points[k - 1], points[k]) ==
                  doctest::Approx(spacing).epsilon(1e-6));
    }
}

TEST_CASE("degenerate polylines are rejected") {
    CHECK_THROWS_AS(geo::discretize({{{10.0, 10.0}}}, 50.0), InputError);
    CHECK_THROWS_AS(geo::discretize({{{10.0, 10.0}, {10.0, 10.0}}}, 50.0), InputError);
    CHECK_THROWS_AS(geo::discretize(straight_segment(30.0, 100.0), 0.0), InputError);
}

TEST_CASE("point net export writes ids and chainage and reads back") {
    testing::TempDir dir;
    const auto line = straight_segment(31.0, 200.0);
    const double len = geo::polyline_length_m(line);
    const auto net = geo::make_pointnet("E60", line, len / 4.0);
    REQUIRE(net.size() == 5);
    CHECK(net[0].point_id == "E60#0");
    CHECK(net[4].point_id == "E60#4");
    CHECK(net[4].chainage_m == doctest::Approx(len));

    const auto path = dir / "net.csv";
    geo::write_pointnet_csv(path, net);
    const auto back = geo::read_pointnet_csv(path);
    REQUIRE(back.size() == net.size());
    CHECK(back[2].point_id == net[2].point_id);
    CHECK(back[2].pos.lat == doctest::Approx(net[2].pos.lat).epsilon(1e-12));
    CHECK(back[2].chainage_m == doctest::Approx(net[2].chainage_m));
}
