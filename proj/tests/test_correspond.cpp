#include <cmath>
#include <cstdlib>
#include <cstring>

#include "doctest.h"
#include "glass/correspond.hpp"
#include "glass/errors.hpp"
#include "glass/rng.hpp"

using namespace glass;

namespace {

FeatureMap random_features(int h, int w, int d, std::uint64_t seed) {
    FeatureMap f(h, w, d);
    SplitMix64 rng(seed);
    for (float& v : f.data) v = static_cast<float>(rng.next_double(-1.0, 1.0));
    return f;
}

// Test-local cosine volume: normalize and dot in double, no shared code with
// the implementation beyond the formula itself.
std::vector<double> oracle_correlation(const FeatureMap& src, const FeatureMap& tgt) {
    auto normalized = [](const FeatureMap& f) {
        std::vector<double> out(f.data.begin(), f.data.end());
        const std::size_t pixels = static_cast<std::size_t>(f.h) * f.w;
        for (std::size_t p = 0; p < pixels; ++p) {
            double sq = 0.0;
            for (int k = 0; k < f.d; ++k) sq += out[p * f.d + k] * out[p * f.d + k];
            if (sq <= 0.0) continue;
            const double inv = 1.0 / std::sqrt(sq);
            for (int k = 0; k < f.d; ++k) out[p * f.d + k] *= inv;
        }
        return out;
    };
    const auto ns = normalized(src);
    const auto nt = normalized(tgt);
    const std::size_t np = static_cast<std::size_t>(src.h) * src.w;
    const std::size_t nq = static_cast<std::size_t>(tgt.h) * tgt.w;
    std::vector<double> vol(np * nq);
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t q = 0; q < nq; ++q) {
            double acc = 0.0;
            for (int k = 0; k < src.d; ++k) acc += ns[p * src.d + k] * nt[q * src.d + k];
            vol[p * nq + q] = acc;
        }
    }
    return vol;
}

} // namespace

TEST_CASE("normalization produces unit vectors and keeps zeros") {
    FeatureMap f(1, 2, 2);
    f.data = {3.0f, 4.0f, 0.0f, 0.0f};
    std::size_t zeros = 0;
    const FeatureMap n = normalize_features(f, &zeros);
    CHECK(n.data[0] == doctest::Approx(0.6).epsilon(1e-7));
    CHECK(n.data[1] == doctest::Approx(0.8).epsilon(1e-7));
    CHECK(n.data[2] == 0.0f);
    CHECK(n.data[3] == 0.0f);
    CHECK(zeros == 1);

    // Idempotence: normalizing a normalized map is a near no-op.
    const FeatureMap nn = normalize_features(n);
    for (std::size_t i = 0; i < n.data.size(); ++i) {
        CHECK(std::abs(nn.data[i] - n.data[i]) < 1e-7);
    }
}

TEST_CASE("correlation matches a double-precision oracle") {
    const FeatureMap src = random_features(8, 8, 4, 11);
    const FeatureMap tgt = random_features(8, 8, 4, 12);
    const CorrVolume vol = correlation(src, tgt, 1);
    const auto oracle = oracle_correlation(src, tgt);
    REQUIRE(vol.scores.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        CHECK(std::abs(static_cast<double>(vol.scores[i]) - oracle[i]) < 1e-6);
        CHECK(vol.scores[i] >= -1.0f - 1e-6f);
        CHECK(vol.scores[i] <= 1.0f + 1e-6f);
    }
}

TEST_CASE("orthonormal features give an identity volume") {
    // Each pixel holds a distinct basis vector, so scores are Kronecker deltas.
    const int n = 4;
    FeatureMap f(2, 2, n);
    for (int p = 0; p < n; ++p) f.data[static_cast<std::size_t>(p) * n + p] = 1.0f;
    const CorrVolume vol = correlation(f, f, 1);
    for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t q = 0; q < 4; ++q) {
            CHECK(vol.score(p, q) == (p == q ? 1.0f : 0.0f));
        }
    }
}

TEST_CASE("correlation is bitwise identical across worker counts") {
    const FeatureMap src = random_features(9, 7, 5, 21);
    const FeatureMap tgt = random_features(6, 8, 5, 22);
    const CorrVolume v1 = correlation(src, tgt, 1);
    const CorrVolume v2 = correlation(src, tgt, 2);
    const CorrVolume v8 = correlation(src, tgt, 8);
    CHECK(std::memcmp(v1.scores.data(), v2.scores.data(),
                      v1.scores.size() * sizeof(float)) == 0);
    CHECK(std::memcmp(v1.scores.data(), v8.scores.data(),
                      v1.scores.size() * sizeof(float)) == 0);

    const CorrespondenceField f1 = soft_argmax_flow(v1, 1e4, 1);
    const CorrespondenceField f8 = soft_argmax_flow(v1, 1e4, 8);
    CHECK(std::memcmp(f1.coords.data(), f8.coords.data(),
                      f1.coords.size() * sizeof(float)) == 0);
}

TEST_CASE("correlation rejects channel mismatches") {
    const FeatureMap a = random_features(2, 2, 3, 1);
    const FeatureMap b = random_features(2, 2, 4, 2);
    CHECK_THROWS_AS(correlation(a, b), ShapeError);
}

TEST_CASE("fusion multiplies element-wise") {
    CorrVolume a(1, 2, 1, 2);
    a.scores = {0.5f, -0.25f, 1.0f, 0.0f};
    CorrVolume ones(1, 2, 1, 2);
    ones.scores = {1.0f, 1.0f, 1.0f, 1.0f};
    const CorrVolume same = fuse_volumes(a, ones);
    CHECK(same.scores == a.scores);
    const CorrVolume sq = fuse_volumes(a, a);
    CHECK(sq.scores[0] == 0.25f);
    CHECK(sq.scores[1] == 0.0625f);

    CorrVolume other(2, 1, 1, 2);
    CHECK_THROWS_AS(fuse_volumes(a, other), ShapeError);
}

TEST_CASE("uniform scores yield the grid centroid at any temperature") {
    CorrVolume vol(3, 3, 6, 6);
    for (float& s : vol.scores) s = 0.375f;
    for (double alpha : {0.0, 1.0, 1e4}) {
        const CorrespondenceField field = soft_argmax_flow(vol, alpha, 1);
        for (int y = 0; y < 3; ++y) {
            for (int x = 0; x < 3; ++x) {
                CHECK(field.x(y, x) == 2.5f);
                CHECK(field.y(y, x) == 2.5f);
            }
        }
    }
}

TEST_CASE("zero temperature ignores the scores entirely") {
    SplitMix64 rng(31);
    CorrVolume vol(2, 2, 5, 4);
    for (float& s : vol.scores) s = static_cast<float>(rng.next_double(-1.0, 1.0));
    const CorrespondenceField field = soft_argmax_flow(vol, 0.0, 1);
    for (std::size_t p = 0; p < 4; ++p) {
        CHECK(field.coords[p * 2 + 0] == 1.5f);  // mean of 0..3
        CHECK(field.coords[p * 2 + 1] == 2.0f);  // mean of 0..4
    }
}

TEST_CASE("high temperature converges to the argmax") {
    SplitMix64 rng(32);
    CorrVolume vol(4, 4, 7, 7);
    std::vector<std::size_t> best(16);
    for (std::size_t p = 0; p < 16; ++p) {
        for (std::size_t q = 0; q < 49; ++q) {
            vol.score(p, q) = static_cast<float>(rng.next_double(-1.0, 0.3));
        }
        best[p] = rng.next_below(49);
        vol.score(p, best[p]) = 0.9f;  // clear winner with a wide margin
    }
    const CorrespondenceField field = soft_argmax_flow(vol, 100.0, 1);
    for (std::size_t p = 0; p < 16; ++p) {
        CHECK(std::abs(field.coords[p * 2 + 0] - static_cast<double>(best[p] % 7)) < 1e-2);
        CHECK(std::abs(field.coords[p * 2 + 1] - static_cast<double>(best[p] / 7)) < 1e-2);
    }
}

TEST_CASE("sharpening is monotone toward the argmax") {
    SplitMix64 rng(33);
    CorrVolume vol(3, 3, 6, 6);
    std::vector<std::size_t> best(9);
    for (std::size_t p = 0; p < 9; ++p) {
        for (std::size_t q = 0; q < 36; ++q) {
            vol.score(p, q) = static_cast<float>(rng.next_double(-1.0, 0.8));
        }
        best[p] = rng.next_below(36);
        vol.score(p, best[p]) = 0.87f;  // margin of at least 0.05 over the rest
    }
    double prev_err = 1e9;
    for (double alpha : {1e2, 1e3, 1e4}) {
        const CorrespondenceField field = soft_argmax_flow(vol, alpha, 1);
        double err = 0.0;
        for (std::size_t p = 0; p < 9; ++p) {
            err += std::abs(field.coords[p * 2 + 0] - static_cast<double>(best[p] % 6));
            err += std::abs(field.coords[p * 2 + 1] - static_cast<double>(best[p] / 6));
        }
        CHECK(err <= prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err < 1e-6);  // fully collapsed at the top temperature
}

TEST_CASE("flow coordinates always live inside the target box") {
    SplitMix64 rng(34);
    for (int trial = 0; trial < 20; ++trial) {
        const int th = 2 + static_cast<int>(rng.next_below(5));
        const int tw = 2 + static_cast<int>(rng.next_below(5));
        CorrVolume vol(3, 2, th, tw);
        for (float& s : vol.scores) s = static_cast<float>(rng.next_double(-1.0, 1.0));
        const double alpha = rng.next_double(0.0, 1e4);
        const CorrespondenceField field = soft_argmax_flow(vol, alpha, 1);
        for (std::size_t i = 0; i < field.coords.size(); i += 2) {
            CHECK(field.coords[i] >= 0.0f);
            CHECK(field.coords[i] <= static_cast<float>(tw - 1));
            CHECK(field.coords[i + 1] >= 0.0f);
            CHECK(field.coords[i + 1] <= static_cast<float>(th - 1));
        }
    }
}

TEST_CASE("adding a row-wide constant leaves the flow nearly unchanged") {
    SplitMix64 rng(35);
    CorrVolume vol(2, 2, 5, 5);
    for (float& s : vol.scores) s = static_cast<float>(rng.next_double(-0.5, 0.5));
    CorrVolume shifted = vol;
    for (float& s : shifted.scores) s += 0.25f;
    const CorrespondenceField a = soft_argmax_flow(vol, 50.0, 1);
    const CorrespondenceField b = soft_argmax_flow(shifted, 50.0, 1);
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        CHECK(std::abs(a.coords[i] - b.coords[i]) < 1e-6);
    }
}

TEST_CASE("soft argmax rejects bad temperatures") {
    CorrVolume vol(1, 1, 2, 2);
    CHECK_THROWS_AS(soft_argmax_flow(vol, -1.0), InputError);
    CHECK_THROWS_AS(soft_argmax_flow(vol, std::nan("")), InputError);
}

TEST_CASE("flow scaling interpolates between identity and the field") {
    CorrespondenceField field(2, 2, 8, 8);
    field.set(0, 0, 4.0f, 6.0f);
    field.set(0, 1, 3.0f, 0.0f);
    field.set(1, 0, 0.0f, 1.0f);
    field.set(1, 1, 7.0f, 7.0f);

    const CorrespondenceField zero = scale_flow(field, 0.0);
    CHECK(zero.x(0, 0) == 0.0f);
    CHECK(zero.y(0, 0) == 0.0f);
    CHECK(zero.x(1, 1) == 1.0f);
    CHECK(zero.y(1, 1) == 1.0f);

    const CorrespondenceField one = scale_flow(field, 1.0);
    CHECK(one.coords == field.coords);

    const CorrespondenceField half = scale_flow(field, 0.5);
    CHECK(half.x(0, 0) == 2.0f);   // 0 + 0.5 * 4
    CHECK(half.y(0, 0) == 3.0f);
    CHECK(half.x(0, 1) == 2.0f);   // 1 + 0.5 * (3 - 1)
    CHECK(half.y(0, 1) == 0.0f);
}

TEST_CASE("flow scaling clamps and reports overshoot") {
    CorrespondenceField field(1, 2, 4, 4);
    field.set(0, 0, 3.0f, 3.0f);   // doubles to (6, 6), outside a 4x4 grid
    field.set(0, 1, 2.0f, 1.0f);   // doubles to (3, 2), still inside
    BinaryMask clamped;
    const CorrespondenceField out = scale_flow(field, 2.0, &clamped);
    CHECK(out.x(0, 0) == 3.0f);
    CHECK(out.y(0, 0) == 3.0f);
    CHECK(clamped.at(0, 0) == 1);
    CHECK(out.x(0, 1) == 3.0f);
    CHECK(out.y(0, 1) == 2.0f);
    CHECK(clamped.at(0, 1) == 0);

    CHECK_THROWS_AS(scale_flow(field, std::nan("")), InputError);
}

TEST_CASE("similarity mask matches a direct recomputation") {
    const FeatureMap night = random_features(5, 6, 4, 41);
    const FeatureMap day = random_features(5, 6, 4, 42);
    const int px = 3, py = 2;
    const double threshold = 0.25;
    const BinaryMask mask = similarity_map(night, px, py, day, threshold);
    REQUIRE(mask.h == 5);
    REQUIRE(mask.w == 6);

    const auto vol = oracle_correlation(night, day);
    const std::size_t p = static_cast<std::size_t>(py) * 6 + px;
    for (std::size_t q = 0; q < 30; ++q) {
        const bool want = vol[p * 30 + q] > threshold;
        CHECK(mask.bits[q] == (want ? 1 : 0));
    }
}

TEST_CASE("similarity of a frame with itself peaks at the query pixel") {
    const FeatureMap f = random_features(4, 4, 6, 43);
    const BinaryMask mask = similarity_map(f, 1, 2, f, 0.999);
    CHECK(mask.at(2, 1) == 1);  // cosine of a vector with itself is 1

    CHECK_THROWS_AS(similarity_map(f, 4, 0, f, 0.5), InputError);
    CHECK_THROWS_AS(similarity_map(f, 0, -1, f, 0.5), InputError);
    const FeatureMap other = random_features(4, 4, 5, 44);
    CHECK_THROWS_AS(similarity_map(f, 0, 0, other, 0.5), ShapeError);
}

TEST_CASE("worker count resolution prefers explicit requests") {
    CHECK(effective_threads(3) == 3);
    setenv("GLASS_THREADS", "5", 1);
    CHECK(effective_threads(0) == 5);
    CHECK(effective_threads(2) == 2);
    setenv("GLASS_THREADS", "not-a-number", 1);
    CHECK(effective_threads(0) >= 1);
    unsetenv("GLASS_THREADS");
    CHECK(effective_threads(0) >= 1);
}
