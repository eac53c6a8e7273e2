#include "glass/correspond.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "glass/errors.hpp"

namespace glass {

int effective_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GLASS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Runs fn(begin, end) over a static partition of [0, total). Each chunk owns
// a disjoint output range and every per-element computation is sequenced
// internally, so results cannot depend on the worker count.
void parallel_chunks(std::size_t total, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    const int n = std::clamp<int>(threads, 1, total == 0 ? 1 : static_cast<int>(total));
    if (n <= 1 || total == 0) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    const std::size_t chunk = (total + n - 1) / n;
    for (int i = 0; i < n; ++i) {
        const std::size_t begin = chunk * static_cast<std::size_t>(i);
        const std::size_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace

CorrVolume::CorrVolume(int sh, int sw, int th, int tw)
    : src_h(sh), src_w(sw), tgt_h(th), tgt_w(tw) {
    if (sh <= 0 || sw <= 0 || th <= 0 || tw <= 0) {
        throw ShapeError("CorrVolume: non-positive grid dimension");
    }
    scores.assign(src_count() * tgt_count(), 0.0f);
}

Tensor CorrVolume::to_tensor() const {
    return {{static_cast<std::uint32_t>(src_h), static_cast<std::uint32_t>(src_w),
             static_cast<std::uint32_t>(tgt_h), static_cast<std::uint32_t>(tgt_w)},
            scores};
}

CorrespondenceField::CorrespondenceField(int h_, int w_, int th, int tw)
    : h(h_), w(w_), tgt_h(th), tgt_w(tw) {
    if (h_ <= 0 || w_ <= 0 || th <= 0 || tw <= 0) {
        throw ShapeError("CorrespondenceField: non-positive grid dimension");
    }
    coords.assign(static_cast<std::size_t>(h_) * w_ * 2, 0.0f);
}

Tensor CorrespondenceField::to_tensor() const {
    return {{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(w), 2u}, coords};
}

CorrespondenceField CorrespondenceField::from_tensor(const Tensor& t, int tgt_h, int tgt_w,
                                                     const std::string& what) {
    if (t.rank() != 3 || t.dims[2] != 2) {
        throw ShapeError(what + ": expected an h x w x 2 coordinate tensor");
    }
    CorrespondenceField f(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), tgt_h,
                          tgt_w);
    f.coords = t.data;
    return f;
}

FeatureMap normalize_features(const FeatureMap& f, std::size_t* degenerate_count) {
    FeatureMap out(f.h, f.w, f.d);
    std::size_t zeros = 0;
    const std::size_t pixels = static_cast<std::size_t>(f.h) * f.w;
    for (std::size_t p = 0; p < pixels; ++p) {
        const float* src = f.data.data() + p * f.d;
        float* dst = out.data.data() + p * f.d;
        double sq = 0.0;
        for (int k = 0; k < f.d; ++k) sq += static_cast<double>(src[k]) * src[k];
        if (sq <= 0.0) {
            ++zeros;  // zero vector stays zero rather than dividing by it
            continue;
        }
        const double inv = 1.0 / std::sqrt(sq);
        for (int k = 0; k < f.d; ++k) dst[k] = static_cast<float>(src[k] * inv);
    }
    if (degenerate_count) *degenerate_count = zeros;
    return out;
}

CorrVolume correlation(const FeatureMap& src, const FeatureMap& tgt, int threads) {
    if (src.d != tgt.d) {
        throw ShapeError("correlation: channel mismatch, " + std::to_string(src.d) + " vs " +
                         std::to_string(tgt.d));
    }
    const FeatureMap ns = normalize_features(src);
    const FeatureMap nt = normalize_features(tgt);

    CorrVolume vol(src.h, src.w, tgt.h, tgt.w);
    const std::size_t nq = vol.tgt_count();
    const int d = src.d;
    parallel_chunks(vol.src_count(), effective_threads(threads),
                    [&](std::size_t begin, std::size_t end) {
                        for (std::size_t p = begin; p < end; ++p) {
                            const float* fp = ns.data.data() + p * d;
                            float* row = vol.scores.data() + p * nq;
                            for (std::size_t q = 0; q < nq; ++q) {
                                const float* fq = nt.data.data() + q * d;
                                double acc = 0.0;
                                for (int k = 0; k < d; ++k) {
                                    acc += static_cast<double>(fp[k]) * fq[k];
                                }
                                row[q] = static_cast<float>(acc);
                            }
                        }
                    });
    return vol;
}

CorrVolume fuse_volumes(const CorrVolume& local_vol, const CorrVolume& global_vol) {
    if (local_vol.src_h != global_vol.src_h || local_vol.src_w != global_vol.src_w ||
        local_vol.tgt_h != global_vol.tgt_h || local_vol.tgt_w != global_vol.tgt_w) {
        throw ShapeError("fuse_volumes: volume shapes differ");
    }
    CorrVolume out(local_vol.src_h, local_vol.src_w, local_vol.tgt_h, local_vol.tgt_w);
    for (std::size_t i = 0; i < out.scores.size(); ++i) {
        out.scores[i] = local_vol.scores[i] * global_vol.scores[i];
    }
    return out;
}

CorrespondenceField soft_argmax_flow(const CorrVolume& volume, double alpha, int threads) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw InputError("soft_argmax_flow: alpha must be finite and non-negative");
    }
    CorrespondenceField field(volume.src_h, volume.src_w, volume.tgt_h, volume.tgt_w);
    const std::size_t nq = volume.tgt_count();
    const int tw = volume.tgt_w;

    parallel_chunks(volume.src_count(), effective_threads(threads),
                    [&](std::size_t begin, std::size_t end) {
                        std::vector<double> weights(nq);
                        for (std::size_t p = begin; p < end; ++p) {
                            const float* row = volume.scores.data() + p * nq;
                            // Subtract the row max before exponentiating so
                            // large temperatures stay inside double range.
                            double mx = row[0];
                            for (std::size_t q = 1; q < nq; ++q) {
                                mx = std::max(mx, static_cast<double>(row[q]));
                            }
                            double z = 0.0;
                            for (std::size_t q = 0; q < nq; ++q) {
                                const double e = std::exp(alpha * (row[q] - mx));
                                weights[q] = e;
                                z += e;
                            }
                            double fx = 0.0;
                            double fy = 0.0;
                            for (std::size_t q = 0; q < nq; ++q) {
                                const double wgt = weights[q] / z;
                                fx += wgt * static_cast<double>(q % tw);
                                fy += wgt * static_cast<double>(q / tw);
                            }
                            field.coords[p * 2 + 0] = static_cast<float>(fx);
                            field.coords[p * 2 + 1] = static_cast<float>(fy);
                        }
                    });
    return field;
}

CorrespondenceField scale_flow(const CorrespondenceField& field, double lambda,
                               BinaryMask* clamped_out) {
    if (!std::isfinite(lambda)) throw InputError("scale_flow: non-finite lambda");
    CorrespondenceField out(field.h, field.w, field.tgt_h, field.tgt_w);
    if (clamped_out) *clamped_out = BinaryMask(field.h, field.w);
    const float max_x = static_cast<float>(field.tgt_w - 1);
    const float max_y = static_cast<float>(field.tgt_h - 1);
    for (int y = 0; y < field.h; ++y) {
        for (int x = 0; x < field.w; ++x) {
            const double sx = x + lambda * (static_cast<double>(field.x(y, x)) - x);
            const double sy = y + lambda * (static_cast<double>(field.y(y, x)) - y);
            float cx = static_cast<float>(sx);
            float cy = static_cast<float>(sy);
            const bool outside = cx < 0.0f || cx > max_x || cy < 0.0f || cy > max_y;
            if (outside && clamped_out) clamped_out->set(y, x, 1);
            cx = std::clamp(cx, 0.0f, max_x);
            cy = std::clamp(cy, 0.0f, max_y);
            out.set(y, x, cx, cy);
        }
    }
    return out;
}

BinaryMask similarity_map(const FeatureMap& night, int px, int py,
                          const FeatureMap& day, double threshold) {
    if (night.d != day.d) {
        throw ShapeError("similarity_map: channel mismatch, " + std::to_string(night.d) +
                         " vs " + std::to_string(day.d));
    }
    if (px < 0 || px >= night.w || py < 0 || py >= night.h) {
        throw InputError("similarity_map: query point (" + std::to_string(px) + "," +
                         std::to_string(py) + ") outside the night grid");
    }
    if (!std::isfinite(threshold)) throw InputError("similarity_map: non-finite threshold");

    const FeatureMap nn = normalize_features(night);
    const FeatureMap nd = normalize_features(day);
    const float* ref = nn.data.data() + (static_cast<std::size_t>(py) * nn.w + px) * nn.d;

    BinaryMask mask(day.h, day.w);
    const std::size_t pixels = static_cast<std::size_t>(day.h) * day.w;
    for (std::size_t p = 0; p < pixels; ++p) {
        const float* fq = nd.data.data() + p * nd.d;
        double acc = 0.0;
        for (int k = 0; k < nd.d; ++k) acc += static_cast<double>(ref[k]) * fq[k];
        mask.bits[p] = acc > threshold ? 1 : 0;
    }
    return mask;
}

} // namespace glass
