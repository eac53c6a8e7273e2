#include "glass/warp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glass/errors.hpp"

namespace glass {

void PairSample::validate_shapes() const {
    const FeatureMap* maps[] = {&day_local,   &day_global, &night_local,
                                &night_global, &ref_local,  &ref_global};
    const char* names[] = {"day_local",   "day_global", "night_local",
                           "night_global", "ref_local",  "ref_global"};
    const int gh = day_local.h;
    const int gw = day_local.w;
    for (std::size_t i = 0; i < 6; ++i) {
        if (maps[i]->h != gh || maps[i]->w != gw) {
            throw ShapeError(std::string("sample: grid of ") + names[i] +
                             " differs from day_local");
        }
    }
    if (night_local.d != day_local.d || ref_local.d != day_local.d) {
        throw ShapeError("sample: local feature channels differ across frames");
    }
    if (night_global.d != day_global.d || ref_global.d != day_global.d) {
        throw ShapeError("sample: global feature channels differ across frames");
    }
    if (seg_day.h != gh || seg_day.w != gw || seg_night.h != gh || seg_night.w != gw) {
        throw ShapeError("sample: segmentation grid differs from the feature grid");
    }
    if (seg_day.c != seg_night.c) {
        throw ShapeError("sample: class counts differ between day and night maps");
    }
}

WarpResult backward_warp(const SegMap& src, const CorrespondenceField& field) {
    if (field.tgt_h != src.h || field.tgt_w != src.w) {
        throw ShapeError("backward_warp: field coordinate space " +
                         std::to_string(field.tgt_w) + "x" + std::to_string(field.tgt_h) +
                         " does not match the source grid");
    }
    WarpResult res;
    res.seg = SegMap(field.h, field.w, src.c);
    res.oob = BinaryMask(field.h, field.w);

    const float max_x = static_cast<float>(src.w - 1);
    const float max_y = static_cast<float>(src.h - 1);

    for (int y = 0; y < field.h; ++y) {
        for (int x = 0; x < field.w; ++x) {
            const float rx = field.x(y, x);
            const float ry = field.y(y, x);
            if (!std::isfinite(rx) || !std::isfinite(ry)) {
                throw InputError("backward_warp: non-finite coordinate at (" +
                                 std::to_string(x) + "," + std::to_string(y) + ")");
            }

            // The sample box of the raw coordinate: a single column/row when
            // the coordinate is integral, two otherwise. Touching outside the
            // source grid marks the pixel, sampling still happens on clamped
            // coordinates.
            const float fx0 = std::floor(rx);
            const float fy0 = std::floor(ry);
            const float bx1 = (rx == fx0) ? fx0 : fx0 + 1.0f;
            const float by1 = (ry == fy0) ? fy0 : fy0 + 1.0f;
            if (fx0 < 0.0f || bx1 > max_x || fy0 < 0.0f || by1 > max_y) {
                res.oob.set(y, x, 1);
            }

            const float cx = std::clamp(rx, 0.0f, max_x);
            const float cy = std::clamp(ry, 0.0f, max_y);
            const int x0 = static_cast<int>(cx);
            const int y0 = static_cast<int>(cy);
            const int x1 = std::min(x0 + 1, src.w - 1);
            const int y1 = std::min(y0 + 1, src.h - 1);
            const double ax = cx - x0;
            const double ay = cy - y0;

            const auto v00 = src.at(y0, x0);
            const auto v10 = src.at(y0, x1);
            const auto v01 = src.at(y1, x0);
            const auto v11 = src.at(y1, x1);
            const double w00 = (1.0 - ax) * (1.0 - ay);
            const double w10 = ax * (1.0 - ay);
            const double w01 = (1.0 - ax) * ay;
            const double w11 = ax * ay;

            auto out = res.seg.at(y, x);
            double sum = 0.0;
            for (int k = 0; k < src.c; ++k) {
                const double v = w00 * v00[k] + w10 * v10[k] + w01 * v01[k] + w11 * v11[k];
                out[k] = static_cast<float>(v);
                sum += v;
            }
            // Bilinear weights sum to one so this is a no-op up to rounding,
            // but it pins the output invariant exactly.
            if (sum > 0.0 && sum != 1.0) {
                for (int k = 0; k < src.c; ++k) {
                    out[k] = static_cast<float>(out[k] / sum);
                }
            }
        }
    }
    return res;
}

namespace {

void merge_oob(BinaryMask& into, const BinaryMask& extra) {
    for (std::size_t i = 0; i < into.bits.size(); ++i) {
        into.bits[i] = (into.bits[i] || extra.bits[i]) ? 1 : 0;
    }
}

CorrespondenceField fused_flow(const FeatureMap& src_local, const FeatureMap& src_global,
                               const FeatureMap& tgt_local, const FeatureMap& tgt_global,
                               double alpha, int threads) {
    const CorrVolume local_vol = correlation(src_local, tgt_local, threads);
    const CorrVolume global_vol = correlation(src_global, tgt_global, threads);
    return soft_argmax_flow(fuse_volumes(local_vol, global_vol), alpha, threads);
}

} // namespace

PseudoLabels make_pseudolabels(const PairSample& sample, double alpha, int threads) {
    sample.validate_shapes();
    validate_fix(sample.x_day, "sample day fix");
    validate_fix(sample.x_day_forward, "sample forward fix");
    validate_fix(sample.x_day_backward, "sample backward fix");
    validate_fix(sample.x_night, "sample night fix");

    PseudoLabels out;

    // Inter-domain matching in both directions.
    const CorrespondenceField f_day_to_night =
        fused_flow(sample.day_local, sample.day_global, sample.night_local,
                   sample.night_global, alpha, threads);
    const CorrespondenceField f_night_to_day =
        fused_flow(sample.night_local, sample.night_global, sample.day_local,
                   sample.day_global, alpha, threads);

    WarpResult w_n2d = backward_warp(sample.seg_night, f_day_to_night);
    out.night_to_day = std::move(w_n2d.seg);
    out.oob_night_to_day = std::move(w_n2d.oob);
    WarpResult w_d2n = backward_warp(sample.seg_day, f_night_to_day);
    out.day_to_night = std::move(w_d2n.seg);
    out.oob_day_to_night = std::move(w_d2n.oob);

    // Reference selection. A night fix sitting exactly on the day fix is a
    // valid degenerate layout: the scaled flow collapses to the identity, so
    // the direction of the reference frame cannot matter. Every other
    // degeneracy propagates from the geometry layer.
    if (to_local_enu(sample.x_day, sample.x_night).norm() < 1e-9) {
        out.ref_choice = RefChoice::Backward;
        out.lambda = 0.0;
    } else {
        out.ref_choice = select_reference(sample.x_day, sample.x_day_forward,
                                          sample.x_day_backward, sample.x_night);
        const GpsFix& x_ref = out.ref_choice == RefChoice::Forward ? sample.x_day_forward
                                                                   : sample.x_day_backward;
        out.lambda = scale_factor(sample.x_day, x_ref, sample.x_night);
    }

    // Intra-domain matching day <-> reference, scaled by lambda.
    const CorrespondenceField f_day_to_ref =
        fused_flow(sample.day_local, sample.day_global, sample.ref_local, sample.ref_global,
                   alpha, threads);
    const CorrespondenceField f_ref_to_day =
        fused_flow(sample.ref_local, sample.ref_global, sample.day_local, sample.day_global,
                   alpha, threads);

    BinaryMask clamped_d2n;
    const CorrespondenceField f_day_to_night_intra =
        scale_flow(f_day_to_ref, out.lambda, &clamped_d2n);
    BinaryMask clamped_n2d;
    const CorrespondenceField f_night_to_day_intra =
        scale_flow(f_ref_to_day, out.lambda, &clamped_n2d);

    WarpResult wi_n2d = backward_warp(sample.seg_night, f_day_to_night_intra);
    out.night_to_day_intra = std::move(wi_n2d.seg);
    out.oob_night_to_day_intra = std::move(wi_n2d.oob);
    merge_oob(out.oob_night_to_day_intra, clamped_d2n);

    WarpResult wi_d2n = backward_warp(sample.seg_day, f_night_to_day_intra);
    out.day_to_night_intra = std::move(wi_d2n.seg);
    out.oob_day_to_night_intra = std::move(wi_d2n.oob);
    merge_oob(out.oob_day_to_night_intra, clamped_n2d);

    return out;
}

} // namespace glass
