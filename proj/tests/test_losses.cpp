#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "glass/confidence.hpp"
#include "glass/errors.hpp"
#include "glass/losses.hpp"
#include "glass/rng.hpp"

using namespace glass;

namespace {

SegMap seg_from_rows(int h, int w, int c, const std::vector<std::vector<float>>& pixels) {
    SegMap seg(h, w, c);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto& src = pixels[static_cast<std::size_t>(y) * w + x];
            std::copy(src.begin(), src.end(), seg.at(y, x).begin());
        }
    }
    return seg;
}

SegMap random_soft_seg(int h, int w, int c, std::uint64_t seed) {
    SegMap seg(h, w, c);
    SplitMix64 rng(seed);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto px = seg.at(y, x);
            double sum = 0.0;
            for (int k = 0; k < c; ++k) {
                px[k] = static_cast<float>(rng.next_double(0.05, 1.0));
                sum += px[k];
            }
            for (int k = 0; k < c; ++k) px[k] = static_cast<float>(px[k] / sum);
        }
    }
    return seg;
}

ConfidenceMap all_ones(int h, int w) {
    ConfidenceMap m(h, w);
    std::fill(m.bits.begin(), m.bits.end(), std::uint8_t{1});
    return m;
}

} // namespace

TEST_CASE("argmax and one-hot resolve ties to the lowest index") {
    const std::vector<float> tie = {0.4f, 0.4f, 0.2f};
    CHECK(argmax_class(tie) == 0);
    const std::vector<float> plain = {0.1f, 0.2f, 0.7f};
    CHECK(argmax_class(plain) == 2);
    const auto oh = one_hot(tie);
    CHECK(oh == std::vector<float>{1.0f, 0.0f, 0.0f});
}

TEST_CASE("cross entropy hits its closed forms") {
    const std::vector<float> sup = {0.0f, 1.0f, 0.0f};
    const std::vector<float> sure = {0.0f, 1.0f, 0.0f};
    CHECK(cross_entropy_h(sup, sure) == 0.0);

    std::vector<float> uniform(19, 1.0f / 19.0f);
    std::vector<float> sup19(19, 0.0f);
    sup19[4] = 1.0f;
    CHECK(cross_entropy_h(sup19, uniform) ==
          doctest::Approx(-2.9444389791664403).epsilon(1e-7));

    // A zero probability is clamped, not -inf.
    const std::vector<float> hole = {1.0f, 0.0f};
    const std::vector<float> sup2 = {0.0f, 1.0f};
    CHECK(cross_entropy_h(sup2, hole) ==
          doctest::Approx(-27.631021115928547).epsilon(1e-12));

    CHECK_THROWS_AS(cross_entropy_h(sup, sup2), ShapeError);
    const std::vector<float> bad = {std::numeric_limits<float>::infinity(), 0.0f};
    CHECK_THROWS_AS(cross_entropy_h(sup2, bad), InputError);
}

TEST_CASE("warping loss reproduces a hand-worked grid") {
    // 2x2, 3 classes. Supervisor classes: 0, 1, 2, 0.
    const SegMap sup = seg_from_rows(2, 2, 3, {
        {1.0f, 0.0f, 0.0f},
        {0.0f, 1.0f, 0.0f},
        {0.0f, 0.0f, 1.0f},
        {1.0f, 0.0f, 0.0f},
    });
    // Target: first two pixels agree with the supervisor, third is masked
    // out, fourth has a dynamic dominant class that disagrees.
    const SegMap tgt = seg_from_rows(2, 2, 3, {
        {0.7f, 0.2f, 0.1f},
        {0.3f, 0.6f, 0.1f},
        {0.5f, 0.3f, 0.2f},
        {0.1f, 0.2f, 0.7f},
    });
    ConfidenceMap m = all_ones(2, 2);
    m.set(1, 0, 0);
    ClassConfig cfg;
    cfg.num_classes = 3;
    cfg.dynamic_classes = {2};

    // Only log(0.7) and log(0.6) survive, divided by the full 2 * 2 * 3.
    const double want = -(std::log(0.7) + std::log(0.6)) / 12.0;
    CHECK(want == doctest::Approx(0.07229171397539359).epsilon(1e-15));
    CHECK(warping_loss(tgt, sup, m, cfg) == doctest::Approx(want).epsilon(1e-6));

    // Double-precision entry point agrees on the same data.
    std::vector<double> tgt64(tgt.data.begin(), tgt.data.end());
    CHECK(warping_loss_f64(tgt64, 2, 2, 3, sup, m, cfg) ==
          doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("the ignore rule needs dynamics and disagreement together") {
    ClassConfig cfg;
    cfg.num_classes = 3;
    cfg.dynamic_classes = {2};

    const SegMap sup = seg_from_rows(1, 3, 3, {
        {0.0f, 0.0f, 1.0f},   // agrees with a dynamic target pixel
        {1.0f, 0.0f, 0.0f},   // disagrees with a dynamic target pixel
        {1.0f, 0.0f, 0.0f},   // disagrees with a static target pixel
    });
    const SegMap tgt = seg_from_rows(1, 3, 3, {
        {0.1f, 0.1f, 0.8f},
        {0.1f, 0.1f, 0.8f},
        {0.2f, 0.6f, 0.2f},
    });
    const BinaryMask ign = ignore_mask(tgt, sup, cfg);
    CHECK(ign.at(0, 0) == 0);
    CHECK(ign.at(0, 1) == 1);
    CHECK(ign.at(0, 2) == 0);

    // The surviving pixels are the non-ignored ones: log(0.8) + log(0.2).
    const double want = -(std::log(0.8) + std::log(0.2)) / 9.0;
    CHECK(warping_loss(tgt, sup, all_ones(1, 3), cfg) ==
          doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("an all-zero confidence map silences the loss") {
    const SegMap tgt = random_soft_seg(4, 4, 5, 81);
    const SegMap sup = random_soft_seg(4, 4, 5, 82);
    ClassConfig cfg;
    cfg.num_classes = 5;
    CHECK(warping_loss(tgt, sup, ConfidenceMap(4, 4), cfg) == 0.0);
}

TEST_CASE("the warping loss is never negative") {
    SplitMix64 rng(83);
    ClassConfig cfg = ClassConfig::street_scene_default(6);
    for (int trial = 0; trial < 50; ++trial) {
        const int h = 2 + static_cast<int>(rng.next_below(4));
        const int w = 2 + static_cast<int>(rng.next_below(4));
        const SegMap tgt = random_soft_seg(h, w, 6, rng.next_u64());
        const SegMap sup = random_soft_seg(h, w, 6, rng.next_u64());
        ConfidenceMap m(h, w);
        for (auto& bit : m.bits) bit = rng.next_below(2) ? 1 : 0;
        CHECK(warping_loss(tgt, sup, m, cfg) >= 0.0);
    }
}

TEST_CASE("raising the supervised class mass lowers the loss") {
    ClassConfig cfg;
    cfg.num_classes = 4;
    const SegMap sup = random_soft_seg(3, 3, 4, 84);
    SegMap tgt = random_soft_seg(3, 3, 4, 85);
    const ConfidenceMap m = all_ones(3, 3);
    const double before = warping_loss(tgt, sup, m, cfg);

    // Move mass toward the supervising class without changing any argmax
    // that the ignore rule looks at (no dynamic classes configured, so the
    // pixel set is stable by construction).
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 3; ++x) {
            auto px = tgt.at(y, x);
            const int k = argmax_class(sup.at(y, x));
            float taken = 0.0f;
            for (int j = 0; j < 4; ++j) {
                if (j == k) continue;
                const float bite = px[j] * 0.5f;
                px[j] -= bite;
                taken += bite;
            }
            px[k] += taken;
        }
    }
    const double after = warping_loss(tgt, sup, m, cfg);
    CHECK(after < before);
}

TEST_CASE("perturbing an ignored pixel cannot move the loss") {
    ClassConfig cfg;
    cfg.num_classes = 3;
    cfg.dynamic_classes = {1};
    SegMap tgt = seg_from_rows(1, 2, 3, {
        {0.2f, 0.7f, 0.1f},   // dynamic argmax, disagrees: ignored
        {0.6f, 0.2f, 0.2f},
    });
    const SegMap sup = seg_from_rows(1, 2, 3, {
        {1.0f, 0.0f, 0.0f},
        {1.0f, 0.0f, 0.0f},
    });
    const ConfidenceMap m = all_ones(1, 2);
    const double before = warping_loss(tgt, sup, m, cfg);
    auto px = tgt.at(0, 0);
    px[0] = 0.1f; px[1] = 0.85f; px[2] = 0.05f;  // still dynamic, still disagreeing
    CHECK(warping_loss(tgt, sup, m, cfg) == before);
}

TEST_CASE("seg loss averages the labelled pixels only") {
    ClassConfig cfg;
    cfg.num_classes = 19;
    SegMap pred(2, 2, 19);
    for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 2; ++x) {
            for (auto& v : pred.at(y, x)) v = 1.0f / 19.0f;
        }
    }
    LabelMap labels(2, 2);
    labels.set(0, 0, 3);
    labels.set(0, 1, 7);
    labels.set(1, 0, LabelMap::kIgnoreLabel);
    labels.set(1, 1, 0);
    const SegLossResult r = seg_loss(pred, labels, cfg);
    CHECK_FALSE(r.all_ignored);
    CHECK(r.value == doctest::Approx(2.9444389791664403).epsilon(1e-6));

    LabelMap nothing(2, 2);
    for (auto& l : nothing.labels) l = LabelMap::kIgnoreLabel;
    const SegLossResult empty = seg_loss(pred, nothing, cfg);
    CHECK(empty.all_ignored);
    CHECK(empty.value == 0.0);

    LabelMap bad(2, 2);
    bad.set(0, 0, 19);
    CHECK_THROWS_AS(seg_loss(pred, bad, cfg), InputError);
}

TEST_CASE("objectives compose exactly with power-of-two weights") {
    LossBreakdown parts;
    parts.l_light = 2.0;
    parts.l_adv = 4.0;
    parts.l_night_to_day = 0.25;
    parts.l_day_to_night = 0.5;
    parts.l_seg = 1.0;
    parts.l_dis = 0.5;
    parts.mu1 = 0.5;
    parts.mu2 = 0.25;
    parts.mu3 = 1.0;
    parts.mu4 = 2.0;
    compose_objectives(parts);
    CHECK(parts.objective_day == 2.0);
    CHECK(parts.objective_night == 2.75);
    CHECK(parts.objective_source == 3.0);
}

TEST_CASE("objectives compose with the default weights") {
    LossBreakdown parts;
    parts.l_light = 1.0;
    parts.l_adv = 4.0;
    parts.l_night_to_day = 0.25;
    parts.l_day_to_night = 0.5;
    parts.l_seg = 1.0;
    parts.l_dis = 1.0;
    compose_objectives(parts);
    CHECK(parts.objective_day == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(parts.objective_night == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(parts.objective_source == doctest::Approx(2.01).epsilon(1e-12));

    // Scaling one raw part scales its contribution linearly.
    LossBreakdown doubled = parts;
    doubled.l_adv = 8.0;
    compose_objectives(doubled);
    CHECK(doubled.objective_day - parts.objective_day ==
          doctest::Approx(0.01 * 4.0).epsilon(1e-12));

    LossBreakdown bad = parts;
    bad.l_seg = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(compose_objectives(bad), InputError);
}

TEST_CASE("class configs validate their dynamic list") {
    ClassConfig dup;
    dup.num_classes = 5;
    dup.dynamic_classes = {1, 1};
    CHECK_THROWS_AS(dup.validate(), InputError);

    ClassConfig oob;
    oob.num_classes = 5;
    oob.dynamic_classes = {5};
    CHECK_THROWS_AS(oob.validate(), InputError);

    const ClassConfig full = ClassConfig::street_scene_default();
    full.validate();
    CHECK(full.num_classes == 19);
    CHECK_FALSE(full.is_dynamic(10));
    for (int k = 11; k < 19; ++k) CHECK(full.is_dynamic(k));

    // Smaller palettes keep only the classes that exist.
    const ClassConfig small = ClassConfig::street_scene_default(13);
    small.validate();
    CHECK(small.is_dynamic(11));
    CHECK(small.is_dynamic(12));
    CHECK(small.dynamic_classes.size() == 2);
}
