#include "glass/tensor_io.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "glass/errors.hpp"

namespace glass {

namespace {

constexpr char kMagic[4] = {'G', 'L', 'T', '1'};
constexpr int kMinRank = 2;
constexpr int kMaxRank = 4;

std::string where(const std::filesystem::path& path) {
    return "'" + path.string() + "'";
}

std::uint32_t load_u32_le(const unsigned char* b) {
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void store_u32_le(std::uint32_t v, unsigned char* b) {
    b[0] = static_cast<unsigned char>(v);
    b[1] = static_cast<unsigned char>(v >> 8);
    b[2] = static_cast<unsigned char>(v >> 16);
    b[3] = static_cast<unsigned char>(v >> 24);
}

} // namespace

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open tensor file " + where(path));

    char magic[4];
    if (!in.read(magic, 4)) throw ParseError(where(path) + ": truncated header");
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw ParseError(where(path) + ": bad magic, not a GLT1 tensor");
    }

    unsigned char rank_byte;
    if (!in.read(reinterpret_cast<char*>(&rank_byte), 1)) {
        throw ParseError(where(path) + ": truncated header");
    }
    if (rank_byte < kMinRank || rank_byte > kMaxRank) {
        throw ParseError(where(path) + ": rank " + std::to_string(rank_byte) +
                         " outside [2,4]");
    }

    Tensor t;
    std::uint64_t count = 1;
    for (int i = 0; i < rank_byte; ++i) {
        unsigned char raw[4];
        if (!in.read(reinterpret_cast<char*>(raw), 4)) {
            throw ParseError(where(path) + ": truncated dimension list");
        }
        const std::uint32_t dim = load_u32_le(raw);
        if (dim == 0) throw ParseError(where(path) + ": zero dimension");
        t.dims.push_back(dim);
        count *= dim;
        // Reject runaway headers before touching the allocator.
        if (count > kMaxTensorElements) {
            throw ParseError(where(path) + ": dimension product overflows the element limit");
        }
    }

    t.data.resize(count);
    in.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (static_cast<std::uint64_t>(in.gcount()) != count * sizeof(float)) {
        throw ParseError(where(path) + ": truncated payload, expected " +
                         std::to_string(count) + " values");
    }
    char extra;
    if (in.read(&extra, 1)) {
        throw ParseError(where(path) + ": trailing bytes after payload");
    }

    static_assert(std::endian::native == std::endian::little,
                  "payload byte-swap for big-endian hosts is not implemented");
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        if (!std::isfinite(t.data[i])) {
            throw ParseError(where(path) + ": non-finite value at element " + std::to_string(i));
        }
    }
    return t;
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
    if (t.rank() < kMinRank || t.rank() > kMaxRank) {
        throw ShapeError("write_tensor: rank " + std::to_string(t.rank()) + " outside [2,4]");
    }
    std::uint64_t count = 1;
    for (std::uint32_t d : t.dims) {
        if (d == 0) throw ShapeError("write_tensor: zero dimension");
        count *= d;
        if (count > kMaxTensorElements) throw ShapeError("write_tensor: tensor too large");
    }
    if (count != t.data.size()) {
        throw ShapeError("write_tensor: dims declare " + std::to_string(count) +
                         " elements but payload has " + std::to_string(t.data.size()));
    }
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        if (!std::isfinite(t.data[i])) {
            throw InputError("write_tensor: non-finite value at element " + std::to_string(i));
        }
    }

    static std::atomic<unsigned> temp_counter{0};
    const std::filesystem::path tmp =
        path.parent_path() /
        (path.filename().string() + ".tmp" + std::to_string(temp_counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot create " + where(tmp));
        out.write(kMagic, 4);
        const unsigned char rank = static_cast<unsigned char>(t.rank());
        out.write(reinterpret_cast<const char*>(&rank), 1);
        for (std::uint32_t d : t.dims) {
            unsigned char raw[4];
            store_u32_le(d, raw);
            out.write(reinterpret_cast<const char*>(raw), 4);
        }
        out.write(reinterpret_cast<const char*>(t.data.data()),
                  static_cast<std::streamsize>(t.data.size() * sizeof(float)));
        if (!out) throw ParseError("write failed for " + where(tmp));
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::size_t> GpsTrack::find(const std::string& frame_id) const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].frame_id == frame_id) return i;
    }
    return std::nullopt;
}

const GpsRecord& GpsTrack::require(const std::string& frame_id) const {
    const auto idx = find(frame_id);
    if (!idx) throw ParseError("GPS track has no frame '" + frame_id + "'");
    return records[*idx];
}

namespace {

constexpr const char* kCsvHeader = "frame_id,timestamp_s,lat_deg,lon_deg";

double parse_csv_double(const std::string& field, const std::filesystem::path& path,
                        std::size_t line_no, const char* col) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw ParseError(where(path) + " line " + std::to_string(line_no) + ": bad " +
                         std::string(col) + " value '" + field + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(where(path) + " line " + std::to_string(line_no) + ": non-finite " +
                         std::string(col));
    }
    return value;
}

} // namespace

GpsTrack read_gps_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open GPS file " + where(path));

    std::string line;
    if (!std::getline(in, line)) throw ParseError(where(path) + ": empty file");
    if (line != kCsvHeader) {
        throw ParseError(where(path) + " line 1: header must be exactly '" +
                         std::string(kCsvHeader) + "'");
    }

    GpsTrack track;
    std::unordered_set<std::string> seen;
    double prev_ts = -std::numeric_limits<double>::infinity();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            throw ParseError(where(path) + " line " + std::to_string(line_no) + ": empty row");
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 4) {
            throw ParseError(where(path) + " line " + std::to_string(line_no) + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        }

        GpsRecord rec;
        rec.frame_id = fields[0];
        if (rec.frame_id.empty()) {
            throw ParseError(where(path) + " line " + std::to_string(line_no) + ": empty frame_id");
        }
        if (!seen.insert(rec.frame_id).second) {
            throw ParseError(where(path) + " line " + std::to_string(line_no) +
                             ": duplicate frame_id '" + rec.frame_id + "'");
        }
        rec.timestamp_s = parse_csv_double(fields[1], path, line_no, "timestamp_s");
        rec.fix.lat_deg = parse_csv_double(fields[2], path, line_no, "lat_deg");
        rec.fix.lon_deg = parse_csv_double(fields[3], path, line_no, "lon_deg");
        if (rec.timestamp_s < prev_ts) {
            throw ParseError(where(path) + " line " + std::to_string(line_no) +
                             ": timestamps must be non-decreasing");
        }
        prev_ts = rec.timestamp_s;
        try {
            validate_fix(rec.fix, "gps row");
        } catch (const InputError& e) {
            throw ParseError(where(path) + " line " + std::to_string(line_no) + ": " + e.what());
        }
        track.records.push_back(std::move(rec));
    }
    return track;
}

void write_gps_csv(const GpsTrack& track, const std::filesystem::path& path) {
    std::string body(kCsvHeader);
    body.push_back('\n');
    char buf[512];
    for (const auto& rec : track.records) {
        validate_fix(rec.fix, "gps row '" + rec.frame_id + "'");
        // Shortest-exact formatting: the read-back double is bit-identical,
        // so geometry derived from a bundle matches the in-memory scene.
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", rec.frame_id.c_str(),
                      rec.timestamp_s, rec.fix.lat_deg, rec.fix.lon_deg);
        body += buf;
    }

    static std::atomic<unsigned> temp_counter{0};
    const std::filesystem::path tmp =
        path.parent_path() /
        (path.filename().string() + ".tmp" + std::to_string(temp_counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot create " + where(tmp));
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!out) throw ParseError("write failed for " + where(tmp));
    }
    std::filesystem::rename(tmp, path);
}

} // namespace glass
