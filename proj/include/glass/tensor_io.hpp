#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glass/geo.hpp"
#include "glass/tensor.hpp"

namespace glass {

// GLT1 container: 4 byte magic "GLT1", u8 rank in [2,4], rank u32
// little-endian dims (each >= 1), then prod(dims) f32 little-endian values,
// row-major, last dimension fastest.
//
// Readers reject, with distinct messages: wrong magic, rank out of range,
// zero dims, headers whose element count exceeds kMaxTensorElements (checked
// before any allocation), truncated payloads, trailing bytes and non-finite
// values.
inline constexpr std::uint64_t kMaxTensorElements = 1ull << 30;

Tensor read_tensor(const std::filesystem::path& path);

// Writes via a temp file in the same directory plus an atomic rename, so a
// crash never leaves a half-written tensor at the target path.
void write_tensor(const Tensor& t, const std::filesystem::path& path);

// One row of a GPS track.
struct GpsRecord {
    std::string frame_id;
    double timestamp_s = 0.0;
    GpsFix fix;
};

struct GpsTrack {
    std::vector<GpsRecord> records;

    std::optional<std::size_t> find(const std::string& frame_id) const;
    // Same but throws ParseError naming the frame when absent.
    const GpsRecord& require(const std::string& frame_id) const;
};

// CSV with the exact header "frame_id,timestamp_s,lat_deg,lon_deg".
// Enforces unique frame ids, non-decreasing timestamps and coordinate
// ranges; every rejection names the offending line.
GpsTrack read_gps_csv(const std::filesystem::path& path);
void write_gps_csv(const GpsTrack& track, const std::filesystem::path& path);

} // namespace glass
