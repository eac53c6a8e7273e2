#pragma once

#include <cstdint>

#include "glass/correspond.hpp"
#include "glass/tensor_io.hpp"
#include "glass/warp.hpp"

namespace glass {

// A generated day/night/reference triple with known ground truth. The night
// frame is the day frame translated by (shift_x, shift_y) pixels; the
// reference frame is translated by shift / lambda, and the GPS fixes are
// laid out so the geometric scale factor recovers lambda. truth_valid marks
// the day pixels whose true match lies inside the night grid (fresh random
// features fill the uncovered border, no wraparound).
struct SyntheticScene {
    PairSample sample;
    CorrespondenceField truth_day_to_night;
    BinaryMask truth_valid;
    int shift_x = 0;
    int shift_y = 0;
    int ref_shift_x = 0;
    int ref_shift_y = 0;
    double lambda = 1.0;
};

struct SceneParams {
    int h = 16;
    int w = 16;
    int d = 8;             // feature channels per scale
    int num_classes = 19;
    int shift_x = 3;
    int shift_y = 2;
    double lambda = 0.5;   // night position along the day->reference segment
    double ref_dist_m = 10.0;   // day->reference GPS separation
    double cross_track_m = 0.25;  // small perpendicular offset of the night fix
    double gps_noise_m = 0.0;     // extra radial GPS error applied to the night fix
    std::uint64_t seed = 1;
};

// Deterministic in every parameter including the seed. Feature vectors are
// random unit vectors tied to pixel identity; generation re-salts the seed
// until every wrong pairing scores at least 0.1 below the true one in the
// fused volume, so matching volumes are guaranteed peaked. Class maps are
// one-hot with uniformly drawn classes.
//
// Throws InputError when |shift| >= half the grid, lambda <= 0, shift/lambda
// is not a whole number of pixels, or the grid/channel counts are
// non-positive.
SyntheticScene gen_translated_scene(const SceneParams& params);

// Integer correspondences by exhaustive search: for every source pixel the
// target pixel with the highest cosine score in the fused two-scale volume,
// ties to the lowest linear target index. Oracle for the soft matcher.
struct MatchMap {
    int h = 0;
    int w = 0;
    std::vector<std::int32_t> tx, ty;
};

MatchMap brute_force_match(const FeatureMap& src_local, const FeatureMap& src_global,
                           const FeatureMap& tgt_local, const FeatureMap& tgt_global);

// Near-linear GPS track: count fixes heading_deg east of north, spacing_m
// apart, with Gaussian cross-track jitter of jitter_m. Frame ids are f000,
// f001, ... and timestamps advance one second per fix.
GpsTrack gen_route(int count, double spacing_m, double heading_deg,
                   double jitter_m, std::uint64_t seed);

// Bundle layout shared by the generator and the pipeline commands.
struct BundlePaths {
    static constexpr const char* day_local = "day_local.glt";
    static constexpr const char* day_global = "day_global.glt";
    static constexpr const char* night_local = "night_local.glt";
    static constexpr const char* night_global = "night_global.glt";
    static constexpr const char* ref_local = "ref_local.glt";
    static constexpr const char* ref_global = "ref_global.glt";
    static constexpr const char* seg_day = "seg_day.glt";
    static constexpr const char* seg_night = "seg_night.glt";
    static constexpr const char* labels_day = "labels_day.glt";
    static constexpr const char* gps = "gps.csv";
    static constexpr const char* truth_field = "truth_field.glt";
    static constexpr const char* truth_valid = "truth_valid.glt";

    static constexpr const char* frame_day = "d";
    static constexpr const char* frame_day_forward = "d_plus";
    static constexpr const char* frame_day_backward = "d_minus";
    static constexpr const char* frame_night = "n";
};

// Writes a scene as a directory of tensors plus gps.csv.
void write_bundle(const SyntheticScene& scene, const std::filesystem::path& dir);

// Loads the eight tensors and the four fixes back into a sample.
// Missing frames or files surface as ParseError naming the piece.
PairSample read_bundle(const std::filesystem::path& dir);

} // namespace glass
