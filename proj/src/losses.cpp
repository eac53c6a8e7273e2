#include "glass/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glass/errors.hpp"

namespace glass {

ClassConfig ClassConfig::street_scene_default(int num_classes) {
    ClassConfig cfg;
    cfg.num_classes = num_classes;
    for (int k = 11; k <= 18 && k < num_classes; ++k) {
        cfg.dynamic_classes.push_back(k);
    }
    cfg.validate();
    return cfg;
}

bool ClassConfig::is_dynamic(int k) const {
    return std::find(dynamic_classes.begin(), dynamic_classes.end(), k) !=
           dynamic_classes.end();
}

void ClassConfig::validate() const {
    if (num_classes <= 0) throw InputError("class config: non-positive class count");
    std::vector<int> seen;
    for (int k : dynamic_classes) {
        if (k < 0 || k >= num_classes) {
            throw InputError("class config: dynamic class " + std::to_string(k) +
                             " outside [0," + std::to_string(num_classes) + ")");
        }
        if (std::find(seen.begin(), seen.end(), k) != seen.end()) {
            throw InputError("class config: duplicate dynamic class " + std::to_string(k));
        }
        seen.push_back(k);
    }
}

namespace {

template <typename T>
int argmax_impl(std::span<const T> probs) {
    if (probs.empty()) throw InputError("argmax of an empty vector");
    int best = 0;
    T best_v = probs[0];
    for (int k = 1; k < static_cast<int>(probs.size()); ++k) {
        if (probs[k] > best_v) {  // strict: ties keep the lowest index
            best_v = probs[k];
            best = k;
        }
    }
    return best;
}

double clamped_log(double p) {
    return std::log(std::clamp(p, kProbFloor, 1.0));
}

} // namespace

int argmax_class(std::span<const float> probs) {
    return argmax_impl(probs);
}

std::vector<float> one_hot(std::span<const float> probs) {
    std::vector<float> out(probs.size(), 0.0f);
    out[static_cast<std::size_t>(argmax_class(probs))] = 1.0f;
    return out;
}

double cross_entropy_h(std::span<const float> supervisor, std::span<const float> pred) {
    if (supervisor.size() != pred.size()) {
        throw ShapeError("cross_entropy_h: class count mismatch");
    }
    for (float v : supervisor) {
        if (!std::isfinite(v)) throw InputError("cross_entropy_h: non-finite supervisor");
    }
    for (float v : pred) {
        if (!std::isfinite(v)) throw InputError("cross_entropy_h: non-finite prediction");
    }
    const int k = argmax_class(supervisor);
    return clamped_log(static_cast<double>(pred[static_cast<std::size_t>(k)]));
}

BinaryMask ignore_mask(const SegMap& target, const SegMap& supervisor, const ClassConfig& cfg) {
    if (target.h != supervisor.h || target.w != supervisor.w || target.c != supervisor.c) {
        throw ShapeError("ignore_mask: map shapes disagree");
    }
    if (target.c != cfg.num_classes) {
        throw ShapeError("ignore_mask: map has " + std::to_string(target.c) +
                         " classes, config expects " + std::to_string(cfg.num_classes));
    }
    BinaryMask mask(target.h, target.w);
    for (int y = 0; y < target.h; ++y) {
        for (int x = 0; x < target.w; ++x) {
            const int kt = argmax_class(target.at(y, x));
            if (!cfg.is_dynamic(kt)) continue;
            const int ks = argmax_class(supervisor.at(y, x));
            if (kt != ks) mask.set(y, x, 1);
        }
    }
    return mask;
}

namespace {

// Shared scalar core so the f32 entry point and the double-precision
// verifier path cannot drift apart. Probs(y, x) must return a span of c
// probabilities of the target map.
template <typename TargetAt>
double warping_loss_core(int h, int w, int c, TargetAt&& target_at, const SegMap& supervisor,
                         const ConfidenceMap& m, const ClassConfig& cfg) {
    if (supervisor.h != h || supervisor.w != w || supervisor.c != c) {
        throw ShapeError("warping_loss: map shapes disagree");
    }
    if (m.h != h || m.w != w) {
        throw ShapeError("warping_loss: confidence grid differs from the label grid");
    }
    if (c != cfg.num_classes) {
        throw ShapeError("warping_loss: map has " + std::to_string(c) +
                         " classes, config expects " + std::to_string(cfg.num_classes));
    }

    double acc = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto tgt = target_at(y, x);
            const int kt = argmax_impl(tgt);
            const int ks = argmax_class(supervisor.at(y, x));
            // Dynamic-class disagreement: the pixel leaves the sum entirely.
            if (cfg.is_dynamic(kt) && kt != ks) continue;
            if (!m.at(y, x)) continue;
            acc += clamped_log(static_cast<double>(tgt[static_cast<std::size_t>(ks)]));
        }
    }
    // Normalized by the full pixel count, not the surviving one; masking
    // reduces the loss instead of re-weighting it.
    const double n = static_cast<double>(h) * static_cast<double>(w);
    return -acc / (n * static_cast<double>(c));
}

} // namespace

double warping_loss(const SegMap& target, const SegMap& supervisor, const ConfidenceMap& m,
                    const ClassConfig& cfg) {
    return warping_loss_core(
        target.h, target.w, target.c,
        [&](int y, int x) { return target.at(y, x); }, supervisor, m, cfg);
}

double warping_loss_f64(std::span<const double> target_probs, int h, int w, int c,
                        const SegMap& supervisor, const ConfidenceMap& m,
                        const ClassConfig& cfg) {
    if (target_probs.size() != static_cast<std::size_t>(h) * w * c) {
        throw ShapeError("warping_loss: target buffer size mismatch");
    }
    return warping_loss_core(
        h, w, c,
        [&](int y, int x) {
            return std::span<const double>(
                target_probs.data() + (static_cast<std::size_t>(y) * w + x) * c,
                static_cast<std::size_t>(c));
        },
        supervisor, m, cfg);
}

SegLossResult seg_loss(const SegMap& pred, const LabelMap& labels, const ClassConfig& cfg) {
    if (labels.h != pred.h || labels.w != pred.w) {
        throw ShapeError("seg_loss: label grid differs from the prediction grid");
    }
    if (pred.c != cfg.num_classes) {
        throw ShapeError("seg_loss: prediction has " + std::to_string(pred.c) +
                         " classes, config expects " + std::to_string(cfg.num_classes));
    }
    double acc = 0.0;
    std::size_t used = 0;
    for (int y = 0; y < pred.h; ++y) {
        for (int x = 0; x < pred.w; ++x) {
            const std::int32_t label = labels.at(y, x);
            if (label == LabelMap::kIgnoreLabel) continue;
            if (label < 0 || label >= pred.c) {
                throw InputError("seg_loss: label " + std::to_string(label) +
                                 " outside the class range at pixel (" + std::to_string(x) +
                                 "," + std::to_string(y) + ")");
            }
            acc += -clamped_log(static_cast<double>(pred.at(y, x)[label]));
            ++used;
        }
    }
    if (used == 0) return {0.0, true};
    return {acc / static_cast<double>(used), false};
}

void compose_objectives(LossBreakdown& parts) {
    const double values[] = {parts.l_night_to_day, parts.l_day_to_night, parts.l_seg,
                             parts.l_light,        parts.l_adv,          parts.l_dis,
                             parts.mu1,            parts.mu2,            parts.mu3,
                             parts.mu4};
    for (double v : values) {
        if (!std::isfinite(v)) throw InputError("compose_objectives: non-finite input");
    }
    parts.objective_day = parts.mu1 * parts.l_light + parts.mu2 * parts.l_adv;
    parts.objective_night = parts.mu1 * parts.l_light + parts.l_night_to_day +
                            parts.l_day_to_night + parts.mu2 * parts.l_adv;
    parts.objective_source =
        parts.mu1 * parts.l_light + parts.mu3 * parts.l_seg + parts.mu4 * parts.l_dis;
}

} // namespace glass
