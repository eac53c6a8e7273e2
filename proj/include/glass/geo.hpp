#pragma once

#include <string>

namespace glass {

// Mean Earth radius used by every distance in this library. Both the
// great-circle distance and the tangent-plane projection must share this
// value or scale factors pick up a systematic bias.
inline constexpr double kEarthRadiusM = 6371000.0;

// WGS-ish fix in degrees. lat in [-90, 90], lon in [-180, 180].
struct GpsFix {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

// Throws InputError when the fix is non-finite or out of range.
void validate_fix(const GpsFix& fix, const std::string& what);

// Local east/north offsets in metres on the tangent plane of some origin fix.
struct LocalVec {
    double east_m = 0.0;
    double north_m = 0.0;

    double norm() const;
};

// Which neighbouring day frame acts as the intra-domain reference.
enum class RefChoice { Forward, Backward };

const char* to_string(RefChoice c);

// Great-circle distance in metres (haversine form, numerically stable for
// both tiny and antipodal separations).
double haversine_m(const GpsFix& a, const GpsFix& b);

// Equirectangular projection of p onto the tangent plane at origin. Adequate
// for route-scale geometry (well under a kilometre between frames).
LocalVec to_local_enu(const GpsFix& origin, const GpsFix& p);

// Inverse of to_local_enu. Throws GeometryError at the poles where the east
// axis degenerates.
GpsFix from_local_enu(const GpsFix& origin, const LocalVec& v);

// Picks the temporally forward or backward day frame as reference: forward
// wins only when the direction day->night aligns strictly better with
// day->forward than with day->backward (cosine similarity in the tangent
// plane of the night fix). Ties go backward.
//
// Throws GeometryError when any of the three difference vectors is
// degenerate (zero length).
RefChoice select_reference(const GpsFix& day, const GpsFix& day_forward,
                           const GpsFix& day_backward, const GpsFix& night);

// Ratio of the day->night distance to the day->reference distance, measured
// after projecting the night fix onto the day->reference line so that
// cross-track GPS scatter does not inflate it. Clamped at zero when the
// night fix projects behind the day fix; deliberately not clamped above one.
//
// Throws GeometryError when day and reference coincide.
double scale_factor(const GpsFix& day, const GpsFix& day_ref, const GpsFix& night);

// Moves the night fix extra_m metres further from the day fix along the ray
// day->night, so the returned fix is haversine(day, night) + extra_m from
// day (a couple of refinement steps keep that within a millimetre).
// Simulates receiver error for the robustness sweeps.
//
// Throws GeometryError when day and night coincide.
GpsFix apply_gps_noise(const GpsFix& night, const GpsFix& day, double extra_m);

} // namespace glass
