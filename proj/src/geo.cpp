#include "glass/geo.hpp"

#include <cmath>

#include "glass/errors.hpp"

namespace glass {

namespace {

constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;

// Below this many metres a tangent-plane vector counts as degenerate.
constexpr double kTinyVecM = 1e-9;

double cosine_similarity(const LocalVec& a, const LocalVec& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na < kTinyVecM || nb < kTinyVecM) {
        throw GeometryError("cosine similarity of a zero-length vector");
    }
    return (a.east_m * b.east_m + a.north_m * b.north_m) / (na * nb);
}

} // namespace

double LocalVec::norm() const {
    return std::hypot(east_m, north_m);
}

void validate_fix(const GpsFix& fix, const std::string& what) {
    if (!std::isfinite(fix.lat_deg) || !std::isfinite(fix.lon_deg)) {
        throw InputError(what + ": non-finite coordinate");
    }
    if (fix.lat_deg < -90.0 || fix.lat_deg > 90.0) {
        throw InputError(what + ": latitude out of range");
    }
    if (fix.lon_deg < -180.0 || fix.lon_deg > 180.0) {
        throw InputError(what + ": longitude out of range");
    }
}

const char* to_string(RefChoice c) {
    return c == RefChoice::Forward ? "forward" : "backward";
}

double haversine_m(const GpsFix& a, const GpsFix& b) {
    validate_fix(a, "haversine");
    validate_fix(b, "haversine");
    const double lat1 = a.lat_deg * kDegToRad;
    const double lat2 = b.lat_deg * kDegToRad;
    const double dlat = (b.lat_deg - a.lat_deg) * kDegToRad;
    const double dlon = (b.lon_deg - a.lon_deg) * kDegToRad;

    const double sl = std::sin(dlat * 0.5);
    const double so = std::sin(dlon * 0.5);
    double h = sl * sl + std::cos(lat1) * std::cos(lat2) * so * so;
    if (h > 1.0) h = 1.0;  // guard rounding before the square roots
    const double arc = 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
    return kEarthRadiusM * arc;
}

LocalVec to_local_enu(const GpsFix& origin, const GpsFix& p) {
    validate_fix(origin, "to_local_enu origin");
    validate_fix(p, "to_local_enu point");
    const double east = kEarthRadiusM * (p.lon_deg - origin.lon_deg) * kDegToRad *
                        std::cos(origin.lat_deg * kDegToRad);
    const double north = kEarthRadiusM * (p.lat_deg - origin.lat_deg) * kDegToRad;
    return {east, north};
}

GpsFix from_local_enu(const GpsFix& origin, const LocalVec& v) {
    validate_fix(origin, "from_local_enu origin");
    if (!std::isfinite(v.east_m) || !std::isfinite(v.north_m)) {
        throw InputError("from_local_enu: non-finite offset");
    }
    const double cos_lat = std::cos(origin.lat_deg * kDegToRad);
    if (std::abs(cos_lat) < 1e-12) {
        throw GeometryError("from_local_enu: east axis degenerates at the pole");
    }
    GpsFix out;
    out.lat_deg = origin.lat_deg + (v.north_m / kEarthRadiusM) * kRadToDeg;
    out.lon_deg = origin.lon_deg + (v.east_m / (kEarthRadiusM * cos_lat)) * kRadToDeg;
    return out;
}

RefChoice select_reference(const GpsFix& day, const GpsFix& day_forward,
                           const GpsFix& day_backward, const GpsFix& night) {
    const LocalVec to_day = to_local_enu(night, day);
    const LocalVec to_fwd = to_local_enu(night, day_forward);
    const LocalVec to_bwd = to_local_enu(night, day_backward);

    const double cs_fwd = cosine_similarity(to_day, to_fwd);
    const double cs_bwd = cosine_similarity(to_day, to_bwd);

    // The night frame sits along the forward travel direction exactly when
    // the forward candidate is on the far side of it, i.e. looks *less*
    // aligned with the day fix than the backward candidate does.
    return cs_fwd < cs_bwd ? RefChoice::Forward : RefChoice::Backward;
}

double scale_factor(const GpsFix& day, const GpsFix& day_ref, const GpsFix& night) {
    const LocalVec seg = to_local_enu(day, day_ref);
    const LocalVec off = to_local_enu(day, night);
    const double seg_sq = seg.east_m * seg.east_m + seg.north_m * seg.north_m;
    if (seg_sq < kTinyVecM * kTinyVecM) {
        throw GeometryError("scale_factor: day and reference fixes coincide");
    }
    double t = (off.east_m * seg.east_m + off.north_m * seg.north_m) / seg_sq;
    if (t < 0.0) t = 0.0;  // night projects behind the day fix
    if (t == 0.0) return 0.0;

    const GpsFix foot = from_local_enu(day, {t * seg.east_m, t * seg.north_m});
    return haversine_m(day, foot) / haversine_m(day, day_ref);
}

GpsFix apply_gps_noise(const GpsFix& night, const GpsFix& day, double extra_m) {
    if (!std::isfinite(extra_m)) {
        throw InputError("apply_gps_noise: non-finite displacement");
    }
    const LocalVec ray = to_local_enu(day, night);
    const double plane_len = ray.norm();
    if (plane_len < kTinyVecM) {
        throw GeometryError("apply_gps_noise: day and night fixes coincide");
    }
    const double target = haversine_m(day, night) + extra_m;
    if (target < 0.0) {
        throw InputError("apply_gps_noise: displacement would cross the day fix");
    }
    if (target == 0.0) return day;

    // Scale along the ray, then correct the scale until the great-circle
    // distance matches the target. Two rounds are already far inside a
    // millimetre at route scale; the third is margin.
    double s = target / plane_len;
    GpsFix out = night;
    for (int i = 0; i < 3; ++i) {
        out = from_local_enu(day, {s * ray.east_m, s * ray.north_m});
        const double got = haversine_m(day, out);
        if (got <= 0.0) break;
        s *= target / got;
    }
    return out;
}

} // namespace glass
