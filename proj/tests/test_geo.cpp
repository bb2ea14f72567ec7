#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cog/geo.hpp"

using namespace cog;

TEST_CASE("haversine basics") {
    CHECK(haversine_miles({0, 0}, {0, 0}) == 0.0);
    CHECK_THAT(haversine_miles({0, 0}, {0, 1}),
               Catch::Matchers::WithinAbs(69.10, 0.01));
    // one degree of latitude equals one degree of longitude at the equator
    CHECK_THAT(haversine_miles({0, 0}, {1, 0}),
               Catch::Matchers::WithinAbs(69.10, 0.01));
    CHECK_THAT(haversine_miles({40.4011, -78.4519}, {40.4831, -78.3519}),
               Catch::Matchers::WithinAbs(7.7, 0.1));
}

TEST_CASE("planar basics") {
    CHECK(planar_miles({40.0, -78.0}, {40.0, -78.0}) == 0.0);
    CHECK_THAT(planar_miles({0, 0}, {0, 1}), Catch::Matchers::WithinAbs(69.17, 0.01));
    CHECK_THAT(planar_miles({40.0, -78.0}, {41.0, -78.0}),
               Catch::Matchers::WithinAbs(69.17, 0.01));
}

TEST_CASE("GeoPoint validation") {
    CHECK_THROWS(GeoPoint(95.0, 0.0));
    CHECK_THROWS(GeoPoint(0.0, 200.0));
    CHECK_THROWS(GeoPoint(std::numeric_limits<double>::quiet_NaN(), 0.0));
}

TEST_CASE("distance_matrix") {
    CHECK_THROWS(distance_matrix({}, {{0, 0}}));
    SECTION("coincident 1x1") {
        auto m = distance_matrix({{40, -78}}, {{40, -78}});
        REQUIRE(m.rows() == 1);
        CHECK(m.at(0, 0) == 0.0);
    }
    SECTION("entries match per-pair calls, both metrics") {
        std::vector<GeoPoint> cs = {{40, -78}, {41, -77}};
        std::vector<GeoPoint> ss = {{40.5, -77.5}, {39.5, -78.5}};
        for (auto metric : {Metric::haversine, Metric::planar}) {
            auto m = distance_matrix(cs, ss, metric);
            for (std::size_t i = 0; i < cs.size(); ++i)
                for (std::size_t j = 0; j < ss.size(); ++j)
                    CHECK(m.at(i, j) == distance_miles(cs[i], ss[j], metric));
        }
    }
}

TEST_CASE("metric properties on random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lat(-60.0, 60.0), lon(-179.0, 179.0);
    auto rand_pt = [&] { return GeoPoint(lat(rng), lon(rng)); };

    SECTION("symmetry") {
        for (int t = 0; t < 200; ++t) {
            const auto a = rand_pt(), b = rand_pt();
            CHECK(haversine_miles(a, b) == haversine_miles(b, a));
            CHECK(planar_miles(a, b) == planar_miles(b, a));
        }
    }
    SECTION("triangle inequality, haversine") {
        for (int t = 0; t < 200; ++t) {
            const auto a = rand_pt(), b = rand_pt(), c = rand_pt();
            const double ab = haversine_miles(a, b), bc = haversine_miles(b, c);
            const double ac = haversine_miles(a, c);
            CHECK(ac <= (ab + bc) * (1.0 + 1e-9));
        }
    }
    SECTION("planar within 1% of haversine for nearby points") {
        std::uniform_real_distribution<double> dlat(-1.0, 1.0), dlon(-1.0, 1.0);
        int checked = 0;
        while (checked < 200) {
            const auto a = rand_pt();
            const GeoPoint b(std::clamp(a.lat + dlat(rng), -60.0, 60.0),
                             std::clamp(a.lon + dlon(rng), -179.0, 179.0));
            const double h = haversine_miles(a, b);
            if (h > 100.0 || h < 1e-6) continue;
            ++checked;
            CHECK_THAT(planar_miles(a, b), Catch::Matchers::WithinRel(h, 0.01));
        }
    }
}
