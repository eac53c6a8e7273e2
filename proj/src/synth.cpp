#include "glass/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "glass/errors.hpp"
#include "glass/losses.hpp"
#include "glass/rng.hpp"

namespace glass {

namespace {

constexpr GpsFix kBaseFix{47.0, 8.0};

// Fused cross-correlation ceiling between distinct pixel identities; the
// true match scores ~1, so this leaves a margin of at least 0.1.
constexpr double kMaxCrossScore = 0.9;

void fill_unit_vector(SplitMix64& rng, float* dst, int d) {
    double sq = 0.0;
    std::vector<double> v(static_cast<std::size_t>(d));
    do {
        sq = 0.0;
        for (int k = 0; k < d; ++k) {
            v[k] = rng.next_gaussian();
            sq += v[k] * v[k];
        }
    } while (sq < 1e-12);
    const double inv = 1.0 / std::sqrt(sq);
    for (int k = 0; k < d; ++k) dst[k] = static_cast<float>(v[k] * inv);
}

struct TranslatedMaps {
    FeatureMap local_map;
    FeatureMap global_map;
    // Pool row index backing each pixel, used for the margin check.
    std::vector<std::int32_t> identity;
};

} // namespace

SyntheticScene gen_translated_scene(const SceneParams& params) {
    const int h = params.h;
    const int w = params.w;
    const int d = params.d;
    const int c = params.num_classes;
    if (h <= 0 || w <= 0 || d <= 0 || c <= 0) {
        throw InputError("scene: grid, channel and class counts must be positive");
    }
    if (std::abs(params.shift_x) * 2 >= w || std::abs(params.shift_y) * 2 >= h) {
        throw InputError("scene: shift must stay under half the grid size");
    }
    if (!std::isfinite(params.lambda) || params.lambda <= 0.0) {
        throw InputError("scene: lambda must be positive");
    }
    const double rx = static_cast<double>(params.shift_x) / params.lambda;
    const double ry = static_cast<double>(params.shift_y) / params.lambda;
    if (std::abs(rx - std::round(rx)) > 1e-9 || std::abs(ry - std::round(ry)) > 1e-9) {
        throw InputError("scene: shift / lambda must be a whole number of pixels");
    }
    const int ref_x = static_cast<int>(std::lround(rx));
    const int ref_y = static_cast<int>(std::lround(ry));
    if (std::abs(ref_x) * 2 >= w || std::abs(ref_y) * 2 >= h) {
        throw InputError("scene: reference shift must stay under half the grid size");
    }
    if (params.ref_dist_m <= 0.0 || !std::isfinite(params.ref_dist_m)) {
        throw InputError("scene: reference distance must be positive");
    }
    if (!(params.cross_track_m > 0.0) || !std::isfinite(params.cross_track_m)) {
        throw InputError("scene: cross-track offset must be positive");
    }
    if (!std::isfinite(params.gps_noise_m) || params.gps_noise_m < 0.0) {
        throw InputError("scene: GPS noise must be non-negative");
    }

    const std::size_t pixels = static_cast<std::size_t>(h) * w;
    SplitMix64 base(params.seed);

    // Feature synthesis can in principle produce an accidental near-match
    // between two unrelated pixels; re-salt and redraw until the fused score
    // separation holds so downstream matching is guaranteed peaked.
    for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
        SplitMix64 rng = base.fork(attempt);

        // Pool of pixel identities: day pixels first, fresh border identities
        // appended as needed.
        std::vector<float> pool_local(pixels * d);
        std::vector<float> pool_global(pixels * d);
        for (std::size_t p = 0; p < pixels; ++p) {
            fill_unit_vector(rng, pool_local.data() + p * d, d);
        }
        for (std::size_t p = 0; p < pixels; ++p) {
            fill_unit_vector(rng, pool_global.data() + p * d, d);
        }
        std::vector<std::int32_t> day_classes(pixels);
        for (std::size_t p = 0; p < pixels; ++p) {
            day_classes[p] = static_cast<std::int32_t>(rng.next_below(c));
        }

        auto fresh_identity = [&]() {
            const std::size_t id = pool_local.size() / d;
            pool_local.resize(pool_local.size() + d);
            pool_global.resize(pool_global.size() + d);
            fill_unit_vector(rng, pool_local.data() + id * d, d);
            fill_unit_vector(rng, pool_global.data() + id * d, d);
            return static_cast<std::int32_t>(id);
        };

        // A translated view of the day identities: pixel (x, y) shows day
        // pixel (x - sx, y - sy); uncovered pixels get fresh identities and
        // fresh classes (no wraparound).
        auto translated_identity = [&](int sx, int sy, std::vector<std::int32_t>& ids,
                                       std::vector<std::int32_t>& classes) {
            ids.resize(pixels);
            classes.resize(pixels);
            SplitMix64 class_rng = rng.fork(0x5EED);
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const int ox = x - sx;
                    const int oy = y - sy;
                    const std::size_t i = static_cast<std::size_t>(y) * w + x;
                    if (ox >= 0 && ox < w && oy >= 0 && oy < h) {
                        const std::size_t o = static_cast<std::size_t>(oy) * w + ox;
                        ids[i] = static_cast<std::int32_t>(o);
                        classes[i] = day_classes[o];
                    } else {
                        ids[i] = fresh_identity();
                        classes[i] = static_cast<std::int32_t>(class_rng.next_below(c));
                    }
                }
            }
        };

        std::vector<std::int32_t> night_ids, night_classes;
        translated_identity(params.shift_x, params.shift_y, night_ids, night_classes);
        std::vector<std::int32_t> ref_ids, ref_classes;
        translated_identity(ref_x, ref_y, ref_ids, ref_classes);

        // Margin check over every pair of distinct identities.
        const std::size_t ids = pool_local.size() / d;
        bool separated = true;
        for (std::size_t i = 0; i < ids && separated; ++i) {
            const float* li = pool_local.data() + i * d;
            const float* gi = pool_global.data() + i * d;
            for (std::size_t j = i + 1; j < ids; ++j) {
                const float* lj = pool_local.data() + j * d;
                const float* gj = pool_global.data() + j * d;
                double dl = 0.0;
                double dg = 0.0;
                for (int k = 0; k < d; ++k) {
                    dl += static_cast<double>(li[k]) * lj[k];
                    dg += static_cast<double>(gi[k]) * gj[k];
                }
                if (std::abs(dl * dg) > kMaxCrossScore) {
                    separated = false;
                    break;
                }
            }
        }
        if (!separated) continue;

        SyntheticScene scene;
        scene.shift_x = params.shift_x;
        scene.shift_y = params.shift_y;
        scene.ref_shift_x = ref_x;
        scene.ref_shift_y = ref_y;
        scene.lambda = params.lambda;

        auto materialize = [&](const std::vector<std::int32_t>& id_grid, FeatureMap& lo,
                               FeatureMap& gl) {
            lo = FeatureMap(h, w, d);
            gl = FeatureMap(h, w, d);
            for (std::size_t p = 0; p < pixels; ++p) {
                const std::size_t id = static_cast<std::size_t>(id_grid[p]);
                std::copy_n(pool_local.data() + id * d, d, lo.data.data() + p * d);
                std::copy_n(pool_global.data() + id * d, d, gl.data.data() + p * d);
            }
        };
        std::vector<std::int32_t> day_ids(pixels);
        for (std::size_t p = 0; p < pixels; ++p) day_ids[p] = static_cast<std::int32_t>(p);
        materialize(day_ids, scene.sample.day_local, scene.sample.day_global);
        materialize(night_ids, scene.sample.night_local, scene.sample.night_global);
        materialize(ref_ids, scene.sample.ref_local, scene.sample.ref_global);

        auto one_hot_map = [&](const std::vector<std::int32_t>& classes) {
            SegMap seg(h, w, c);
            for (std::size_t p = 0; p < pixels; ++p) {
                seg.data[p * c + static_cast<std::size_t>(classes[p])] = 1.0f;
            }
            return seg;
        };
        scene.sample.seg_day = one_hot_map(day_classes);
        scene.sample.seg_night = one_hot_map(night_classes);

        // GPS layout: day at the base, reference candidates one step ahead
        // and behind along due east, the night fix lambda of the way to the
        // forward candidate plus a small northward offset. The offset keeps
        // the cosine test away from its collinear tie and disappears from
        // the scale factor, which projects it out.
        scene.sample.x_day = kBaseFix;
        scene.sample.x_day_forward = from_local_enu(kBaseFix, {params.ref_dist_m, 0.0});
        scene.sample.x_day_backward = from_local_enu(kBaseFix, {-params.ref_dist_m, 0.0});
        scene.sample.x_night = from_local_enu(
            kBaseFix, {params.lambda * params.ref_dist_m, params.cross_track_m});
        if (params.gps_noise_m > 0.0) {
            scene.sample.x_night =
                apply_gps_noise(scene.sample.x_night, scene.sample.x_day, params.gps_noise_m);
        }

        scene.truth_day_to_night = CorrespondenceField(h, w, h, w);
        scene.truth_valid = BinaryMask(h, w);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const int tx = x + params.shift_x;
                const int ty = y + params.shift_y;
                const bool inside = tx >= 0 && tx < w && ty >= 0 && ty < h;
                scene.truth_valid.set(y, x, inside ? 1 : 0);
                scene.truth_day_to_night.set(y, x,
                                             static_cast<float>(std::clamp(tx, 0, w - 1)),
                                             static_cast<float>(std::clamp(ty, 0, h - 1)));
            }
        }
        scene.sample.validate_shapes();
        return scene;
    }
    throw InputError("scene: could not separate pixel features after 32 attempts");
}

MatchMap brute_force_match(const FeatureMap& src_local, const FeatureMap& src_global,
                           const FeatureMap& tgt_local, const FeatureMap& tgt_global) {
    if (src_local.h != src_global.h || src_local.w != src_global.w ||
        tgt_local.h != tgt_global.h || tgt_local.w != tgt_global.w) {
        throw ShapeError("brute_force_match: local/global grids disagree");
    }
    const FeatureMap sl = normalize_features(src_local);
    const FeatureMap sg = normalize_features(src_global);
    const FeatureMap tl = normalize_features(tgt_local);
    const FeatureMap tg = normalize_features(tgt_global);
    if (sl.d != tl.d || sg.d != tg.d) {
        throw ShapeError("brute_force_match: channel mismatch");
    }

    MatchMap out;
    out.h = src_local.h;
    out.w = src_local.w;
    const std::size_t np = static_cast<std::size_t>(out.h) * out.w;
    const std::size_t nq = static_cast<std::size_t>(tgt_local.h) * tgt_local.w;
    out.tx.resize(np);
    out.ty.resize(np);
    for (std::size_t p = 0; p < np; ++p) {
        double best = -2.0;
        std::size_t best_q = 0;
        for (std::size_t q = 0; q < nq; ++q) {
            double dl = 0.0;
            for (int k = 0; k < sl.d; ++k) {
                dl += static_cast<double>(sl.data[p * sl.d + k]) * tl.data[q * tl.d + k];
            }
            double dg = 0.0;
            for (int k = 0; k < sg.d; ++k) {
                dg += static_cast<double>(sg.data[p * sg.d + k]) * tg.data[q * tg.d + k];
            }
            const double fused = dl * dg;
            if (fused > best) {  // strict: ties keep the lowest linear index
                best = fused;
                best_q = q;
            }
        }
        out.tx[p] = static_cast<std::int32_t>(best_q % tgt_local.w);
        out.ty[p] = static_cast<std::int32_t>(best_q / tgt_local.w);
    }
    return out;
}

GpsTrack gen_route(int count, double spacing_m, double heading_deg, double jitter_m,
                   std::uint64_t seed) {
    if (count <= 0) throw InputError("route: count must be positive");
    if (!(spacing_m > 0.0) || !std::isfinite(spacing_m)) {
        throw InputError("route: spacing must be positive");
    }
    if (jitter_m < 0.0 || !std::isfinite(jitter_m)) {
        throw InputError("route: jitter must be non-negative");
    }
    const double heading = heading_deg * (M_PI / 180.0);
    const double ex = std::sin(heading);   // east component per metre
    const double ny = std::cos(heading);   // north component per metre
    SplitMix64 rng(seed);
    GpsTrack track;
    char name[16];
    for (int i = 0; i < count; ++i) {
        const double along = spacing_m * static_cast<double>(i);
        const double cross = jitter_m > 0.0 ? jitter_m * rng.next_gaussian() : 0.0;
        // Perpendicular of (ex, ny) is (ny, -ex).
        const LocalVec v{along * ex + cross * ny, along * ny - cross * ex};
        GpsRecord rec;
        std::snprintf(name, sizeof(name), "f%03d", i);
        rec.frame_id = name;
        rec.timestamp_s = static_cast<double>(i);
        rec.fix = from_local_enu(kBaseFix, v);
        track.records.push_back(std::move(rec));
    }
    return track;
}

void write_bundle(const SyntheticScene& scene, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const PairSample& s = scene.sample;
    write_tensor(s.day_local.to_tensor(), dir / BundlePaths::day_local);
    write_tensor(s.day_global.to_tensor(), dir / BundlePaths::day_global);
    write_tensor(s.night_local.to_tensor(), dir / BundlePaths::night_local);
    write_tensor(s.night_global.to_tensor(), dir / BundlePaths::night_global);
    write_tensor(s.ref_local.to_tensor(), dir / BundlePaths::ref_local);
    write_tensor(s.ref_global.to_tensor(), dir / BundlePaths::ref_global);
    write_tensor(s.seg_day.to_tensor(), dir / BundlePaths::seg_day);
    write_tensor(s.seg_night.to_tensor(), dir / BundlePaths::seg_night);

    // Hard day labels for the supervised loss path, taken from the soft map.
    LabelMap labels(s.seg_day.h, s.seg_day.w);
    for (int y = 0; y < labels.h; ++y) {
        for (int x = 0; x < labels.w; ++x) {
            labels.set(y, x, argmax_class(s.seg_day.at(y, x)));
        }
    }
    write_tensor(labels.to_tensor(), dir / BundlePaths::labels_day);

    write_tensor(scene.truth_day_to_night.to_tensor(), dir / BundlePaths::truth_field);
    write_tensor(scene.truth_valid.to_tensor(), dir / BundlePaths::truth_valid);

    GpsTrack track;
    track.records.push_back({BundlePaths::frame_day_backward, 0.0, s.x_day_backward});
    track.records.push_back({BundlePaths::frame_day, 1.0, s.x_day});
    track.records.push_back({BundlePaths::frame_day_forward, 2.0, s.x_day_forward});
    track.records.push_back({BundlePaths::frame_night, 3.0, s.x_night});
    write_gps_csv(track, dir / BundlePaths::gps);
}

PairSample read_bundle(const std::filesystem::path& dir) {
    auto feature = [&](const char* name) {
        return FeatureMap::from_tensor(read_tensor(dir / name), name);
    };
    auto seg = [&](const char* name) {
        return SegMap::from_tensor(read_tensor(dir / name), name);
    };
    PairSample s;
    s.day_local = feature(BundlePaths::day_local);
    s.day_global = feature(BundlePaths::day_global);
    s.night_local = feature(BundlePaths::night_local);
    s.night_global = feature(BundlePaths::night_global);
    s.ref_local = feature(BundlePaths::ref_local);
    s.ref_global = feature(BundlePaths::ref_global);
    s.seg_day = seg(BundlePaths::seg_day);
    s.seg_night = seg(BundlePaths::seg_night);

    const GpsTrack track = read_gps_csv(dir / BundlePaths::gps);
    s.x_day = track.require(BundlePaths::frame_day).fix;
    s.x_day_forward = track.require(BundlePaths::frame_day_forward).fix;
    s.x_day_backward = track.require(BundlePaths::frame_day_backward).fix;
    s.x_night = track.require(BundlePaths::frame_night).fix;
    s.validate_shapes();
    return s;
}

} // namespace glass
