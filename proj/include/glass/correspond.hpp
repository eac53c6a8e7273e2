#pragma once

#include <cstddef>
#include <vector>

#include "glass/tensor.hpp"

namespace glass {

// Dense matching scores between every source position p and every target
// position q. Scores are cosine similarities, so each lies in [-1, 1]
// (fused volumes are products of cosines and stay in range).
struct CorrVolume {
    int src_h = 0;
    int src_w = 0;
    int tgt_h = 0;
    int tgt_w = 0;
    // scores[p * tgt_count + q], p and q row-major over their grids.
    std::vector<float> scores;

    CorrVolume() = default;
    CorrVolume(int sh, int sw, int th, int tw);

    std::size_t src_count() const { return static_cast<std::size_t>(src_h) * src_w; }
    std::size_t tgt_count() const { return static_cast<std::size_t>(tgt_h) * tgt_w; }

    float score(std::size_t p, std::size_t q) const { return scores[p * tgt_count() + q]; }
    float& score(std::size_t p, std::size_t q) { return scores[p * tgt_count() + q]; }

    Tensor to_tensor() const;
};

// Per source pixel, an absolute (x, y) coordinate in the target grid.
// Values produced by soft_argmax_flow are convex combinations of grid
// coordinates and therefore always inside the target box; hand-built fields
// may carry out-of-box values, which the warper treats as out of bounds.
struct CorrespondenceField {
    int h = 0;      // source grid
    int w = 0;
    int tgt_h = 0;  // coordinate space the entries live in
    int tgt_w = 0;
    std::vector<float> coords;  // (x, y) pairs, row-major over the source grid

    CorrespondenceField() = default;
    CorrespondenceField(int h_, int w_, int th, int tw);

    float x(int yy, int xx) const { return coords[(static_cast<std::size_t>(yy) * w + xx) * 2 + 0]; }
    float y(int yy, int xx) const { return coords[(static_cast<std::size_t>(yy) * w + xx) * 2 + 1]; }
    void set(int yy, int xx, float cx, float cy) {
        coords[(static_cast<std::size_t>(yy) * w + xx) * 2 + 0] = cx;
        coords[(static_cast<std::size_t>(yy) * w + xx) * 2 + 1] = cy;
    }

    Tensor to_tensor() const;  // rank 3, h x w x 2
    static CorrespondenceField from_tensor(const Tensor& t, int tgt_h, int tgt_w,
                                           const std::string& what);
};

// L2-normalizes every pixel's feature vector (norms accumulated in double).
// Zero vectors stay zero; if degenerate_count is given it receives how many
// such pixels were seen.
FeatureMap normalize_features(const FeatureMap& f, std::size_t* degenerate_count = nullptr);

// Cosine-similarity volume between two feature maps (normalization included).
// Each output score is an independent double-precision dot product stored as
// f32, so results are bitwise identical for any worker count. threads = 0
// means use the environment default.
//
// Throws ShapeError on channel mismatch.
CorrVolume correlation(const FeatureMap& src, const FeatureMap& tgt, int threads = 0);

// Element-wise product of two volumes of identical shape.
CorrVolume fuse_volumes(const CorrVolume& local_vol, const CorrVolume& global_vol);

// Temperature-weighted expectation of target coordinates: per source pixel,
// softmax(alpha * scores) over all targets (max-subtracted before
// exponentiation so large alpha cannot overflow), then the weighted mean of
// the target (x, y) grid. alpha = 0 degenerates to the target centroid.
//
// Throws InputError for negative or non-finite alpha.
CorrespondenceField soft_argmax_flow(const CorrVolume& volume, double alpha, int threads = 0);

// Scales the displacement part of a field: out(p) = p + lambda * (F(p) - p),
// then clamps into the target box. When clamped_out is non-null it receives
// a mask of the pixels whose pre-clamp coordinate left the box, which the
// pipeline folds into the out-of-bounds masks.
CorrespondenceField scale_flow(const CorrespondenceField& field, double lambda,
                               BinaryMask* clamped_out = nullptr);

// Cosine similarity between one night-side feature vector and every day
// position, thresholded (strictly greater) into a binary mask on the day
// grid.
//
// Throws InputError when the query point lies outside the night grid and
// ShapeError on channel mismatch.
BinaryMask similarity_map(const FeatureMap& night, int px, int py,
                          const FeatureMap& day, double threshold);

// Number of workers a kernel will actually use: an explicit request wins,
// otherwise the GLASS_THREADS environment variable, otherwise the hardware
// concurrency.
int effective_threads(int requested);

} // namespace glass
