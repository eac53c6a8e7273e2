#include <array>
#include <cmath>

#include "doctest.h"
#include "glass/errors.hpp"
#include "glass/geo.hpp"
#include "glass/rng.hpp"

using namespace glass;

namespace {

GpsFix random_fix(SplitMix64& rng) {
    return {rng.next_double(-80.0, 80.0), rng.next_double(-179.0, 179.0)};
}

// Independent reimplementation of the tangent-plane reference choice used as
// an oracle: compare the absolute angles between the night->day direction and
// the two candidate directions.
RefChoice oracle_reference(const GpsFix& day, const GpsFix& fwd, const GpsFix& bwd,
                           const GpsFix& night) {
    auto enu = [&](const GpsFix& p) {
        const double east = kEarthRadiusM * (p.lon_deg - night.lon_deg) * (M_PI / 180.0) *
                            std::cos(night.lat_deg * M_PI / 180.0);
        const double north = kEarthRadiusM * (p.lat_deg - night.lat_deg) * (M_PI / 180.0);
        return std::array<double, 2>{east, north};
    };
    const auto d = enu(day);
    const auto f = enu(fwd);
    const auto b = enu(bwd);
    auto angle_to_day = [&](const std::array<double, 2>& v) {
        const double dot = d[0] * v[0] + d[1] * v[1];
        const double cross = d[0] * v[1] - d[1] * v[0];
        return std::abs(std::atan2(cross, dot));
    };
    // Larger angle to the day direction = smaller cosine similarity.
    return angle_to_day(f) > angle_to_day(b) ? RefChoice::Forward : RefChoice::Backward;
}

} // namespace

TEST_CASE("earth radius is the fixed mean value") {
    CHECK(kEarthRadiusM == 6371000.0);
}

TEST_CASE("haversine matches frozen references") {
    // One millidegree along a meridian.
    CHECK(haversine_m({0.0, 0.0}, {0.001, 0.0}) ==
          doctest::Approx(111.19492664455876).epsilon(1e-12));
    // Antipodal points, half the circumference.
    CHECK(haversine_m({0.0, 0.0}, {0.0, 180.0}) ==
          doctest::Approx(20015086.79602057).epsilon(1e-12));
    // A city-scale pair several hundred kilometres apart.
    CHECK(haversine_m({48.8566, 2.3522}, {52.52, 13.405}) ==
          doctest::Approx(877463.3259175433).epsilon(1e-12));
    CHECK(haversine_m({12.5, -33.25}, {12.5, -33.25}) == 0.0);
}

TEST_CASE("haversine is symmetric bitwise") {
    SplitMix64 rng(101);
    for (int i = 0; i < 10000; ++i) {
        const GpsFix a = random_fix(rng);
        const GpsFix b = random_fix(rng);
        CHECK(haversine_m(a, b) == haversine_m(b, a));
    }
}

TEST_CASE("haversine satisfies the triangle inequality") {
    SplitMix64 rng(202);
    for (int i = 0; i < 1000; ++i) {
        const GpsFix a = random_fix(rng);
        const GpsFix b = random_fix(rng);
        const GpsFix c = random_fix(rng);
        const double ab = haversine_m(a, b);
        const double bc = haversine_m(b, c);
        const double ac = haversine_m(a, c);
        CHECK(ac <= ab + bc + 1e-6);
    }
}

TEST_CASE("haversine rejects invalid fixes") {
    CHECK_THROWS_AS(haversine_m({91.0, 0.0}, {0.0, 0.0}), InputError);
    CHECK_THROWS_AS(haversine_m({0.0, 181.0}, {0.0, 0.0}), InputError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(haversine_m({nan, 0.0}, {0.0, 0.0}), InputError);
}

TEST_CASE("tangent plane offsets match frozen references") {
    const GpsFix origin{60.0, 8.0};
    // References computed independently with the same IEEE deltas; the
    // 60.001 - 60.0 subtraction is inexact and the freeze must carry it.
    const LocalVec east = to_local_enu(origin, {60.0, 8.001});
    CHECK(east.east_m == doctest::Approx(55.597463322248572).epsilon(1e-12));
    CHECK(east.north_m == 0.0);
    const LocalVec north = to_local_enu(origin, {60.001, 8.0});
    CHECK(north.north_m == doctest::Approx(111.19492664429958).epsilon(1e-12));
    CHECK(north.east_m == 0.0);
}

TEST_CASE("tangent plane projection round-trips") {
    SplitMix64 rng(303);
    for (int i = 0; i < 1000; ++i) {
        const GpsFix origin = random_fix(rng);
        const LocalVec v{rng.next_double(-500.0, 500.0), rng.next_double(-500.0, 500.0)};
        const GpsFix p = from_local_enu(origin, v);
        const LocalVec back = to_local_enu(origin, p);
        CHECK(back.east_m == doctest::Approx(v.east_m).epsilon(1e-9));
        CHECK(back.north_m == doctest::Approx(v.north_m).epsilon(1e-9));
    }
}

TEST_CASE("projection degenerates at the poles") {
    CHECK_THROWS_AS(from_local_enu({90.0, 0.0}, {1.0, 0.0}), GeometryError);
}

TEST_CASE("reference choice follows the night fix") {
    const GpsFix day{47.0, 8.0};
    const GpsFix fwd = from_local_enu(day, {10.0, 0.0});
    const GpsFix bwd = from_local_enu(day, {-10.0, 0.0});

    const GpsFix ahead = from_local_enu(day, {4.0, 0.3});
    CHECK(select_reference(day, fwd, bwd, ahead) == RefChoice::Forward);
    const GpsFix behind = from_local_enu(day, {-4.0, 0.3});
    CHECK(select_reference(day, fwd, bwd, behind) == RefChoice::Backward);
}

TEST_CASE("reference choice is invariant under heading rotation") {
    const GpsFix day{47.0, 8.0};
    for (int deg = 0; deg < 360; deg += 7) {
        const double rad = deg * M_PI / 180.0;
        const LocalVec dir{std::sin(rad), std::cos(rad)};
        const GpsFix fwd = from_local_enu(day, {10.0 * dir.east_m, 10.0 * dir.north_m});
        const GpsFix bwd = from_local_enu(day, {-10.0 * dir.east_m, -10.0 * dir.north_m});
        // A quarter of the way toward the forward frame, nudged sideways.
        const GpsFix night = from_local_enu(
            day, {2.5 * dir.east_m + 0.2 * dir.north_m, 2.5 * dir.north_m - 0.2 * dir.east_m});
        CHECK(select_reference(day, fwd, bwd, night) == RefChoice::Forward);
        const GpsFix night_b = from_local_enu(
            day,
            {-2.5 * dir.east_m + 0.2 * dir.north_m, -2.5 * dir.north_m - 0.2 * dir.east_m});
        CHECK(select_reference(day, fwd, bwd, night_b) == RefChoice::Backward);
    }
}

TEST_CASE("reference choice matches the angle oracle on random layouts") {
    SplitMix64 rng(404);
    int forward_seen = 0;
    for (int i = 0; i < 1000; ++i) {
        const GpsFix day{rng.next_double(-60.0, 60.0), rng.next_double(-120.0, 120.0)};
        const double heading = rng.next_double(0.0, 2.0 * M_PI);
        const LocalVec dir{std::sin(heading), std::cos(heading)};
        const double df = rng.next_double(5.0, 20.0);
        const double db = rng.next_double(5.0, 20.0);
        const GpsFix fwd = from_local_enu(day, {df * dir.east_m, df * dir.north_m});
        const GpsFix bwd = from_local_enu(day, {-db * dir.east_m, -db * dir.north_m});
        const double along = rng.next_double(-15.0, 15.0);
        const double cross = rng.next_double(-2.0, 2.0);
        const GpsFix night = from_local_enu(day, {along * dir.east_m + cross * dir.north_m,
                                                  along * dir.north_m - cross * dir.east_m});
        const RefChoice got = select_reference(day, fwd, bwd, night);
        CHECK(got == oracle_reference(day, fwd, bwd, night));
        if (got == RefChoice::Forward) ++forward_seen;
    }
    // Both branches must actually occur for the oracle comparison to bite.
    CHECK(forward_seen > 200);
    CHECK(forward_seen < 800);
}

TEST_CASE("reference choice rejects degenerate layouts") {
    const GpsFix day{47.0, 8.0};
    const GpsFix fwd = from_local_enu(day, {10.0, 0.0});
    const GpsFix bwd = from_local_enu(day, {-10.0, 0.0});
    const GpsFix night = from_local_enu(day, {4.0, 0.3});
    // Night coinciding with the day fix: the direction vector vanishes.
    CHECK_THROWS_AS(select_reference(day, fwd, bwd, day), GeometryError);
    // Night coinciding with a candidate.
    CHECK_THROWS_AS(select_reference(day, night, bwd, night), GeometryError);
    CHECK_THROWS_AS(select_reference(day, fwd, night, night), GeometryError);
}

TEST_CASE("scale factor hits its endpoints") {
    const GpsFix day{47.0, 8.0};
    const GpsFix ref = from_local_enu(day, {10.0, 0.0});
    CHECK(scale_factor(day, ref, day) == 0.0);
    CHECK(scale_factor(day, ref, ref) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scale factor projects out the cross-track offset") {
    const GpsFix day{47.0, 8.0};
    const GpsFix ref = from_local_enu(day, {10.0, 0.0});
    const GpsFix mid_high = from_local_enu(day, {5.0, 0.8});
    const GpsFix mid_low = from_local_enu(day, {5.0, -0.8});
    CHECK(scale_factor(day, ref, mid_high) == doctest::Approx(0.5).epsilon(1e-9));
    // The sign of the offset cannot matter.
    CHECK(scale_factor(day, ref, mid_high) ==
          doctest::Approx(scale_factor(day, ref, mid_low)).epsilon(1e-12));
}

TEST_CASE("scale factor clamps behind the day fix and not past the reference") {
    const GpsFix day{47.0, 8.0};
    const GpsFix ref = from_local_enu(day, {10.0, 0.0});
    const GpsFix behind = from_local_enu(day, {-3.0, 0.4});
    CHECK(scale_factor(day, ref, behind) == 0.0);
    const GpsFix beyond = from_local_enu(day, {14.0, 0.4});
    CHECK(scale_factor(day, ref, beyond) == doctest::Approx(1.4).epsilon(1e-9));
}

TEST_CASE("scale factor rejects a zero-length reference segment") {
    const GpsFix day{47.0, 8.0};
    const GpsFix night = from_local_enu(day, {4.0, 0.0});
    CHECK_THROWS_AS(scale_factor(day, day, night), GeometryError);
}

TEST_CASE("gps noise displaces along the day ray by the requested amount") {
    const GpsFix day{47.0, 8.0};
    const GpsFix night = from_local_enu(day, {5.0, 0.25});
    const double base = haversine_m(day, night);

    const GpsFix same = apply_gps_noise(night, day, 0.0);
    CHECK(same.lat_deg == doctest::Approx(night.lat_deg).epsilon(1e-12));
    CHECK(same.lon_deg == doctest::Approx(night.lon_deg).epsilon(1e-12));

    for (double extra : {2.0, 5.0, 0.5}) {
        const GpsFix moved = apply_gps_noise(night, day, extra);
        CHECK(std::abs(haversine_m(day, moved) - (base + extra)) < 1e-3);
        // Still on the same ray: the bearing is preserved.
        const LocalVec v0 = to_local_enu(day, night);
        const LocalVec v1 = to_local_enu(day, moved);
        CHECK(std::atan2(v1.north_m, v1.east_m) ==
              doctest::Approx(std::atan2(v0.north_m, v0.east_m)).epsilon(1e-9));
    }

    // Negative displacement moves toward the day fix but must not cross it.
    const GpsFix closer = apply_gps_noise(night, day, -2.0);
    CHECK(haversine_m(day, closer) == doctest::Approx(base - 2.0).epsilon(1e-6));
    CHECK_THROWS_AS(apply_gps_noise(night, day, -(base + 1.0)), InputError);
    CHECK_THROWS_AS(apply_gps_noise(day, day, 1.0), GeometryError);
}
