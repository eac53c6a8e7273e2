#pragma once

#include "glass/correspond.hpp"
#include "glass/geo.hpp"
#include "glass/tensor.hpp"

namespace glass {

// Everything the pipeline consumes for one day/night pairing: two-scale
// features for the day frame, the night frame and the chosen day reference
// frame, the segmentation outputs for day and night, and the four fixes.
// All grids must agree in h and w; validate_shapes enforces that.
struct PairSample {
    FeatureMap day_local, day_global;
    FeatureMap night_local, night_global;
    FeatureMap ref_local, ref_global;
    SegMap seg_day, seg_night;
    GpsFix x_day, x_day_forward, x_day_backward, x_night;

    int h() const { return day_local.h; }
    int w() const { return day_local.w; }

    // Throws ShapeError on any grid or channel mismatch.
    void validate_shapes() const;
};

struct WarpResult {
    SegMap seg;
    BinaryMask oob;
};

// Bilinear backward warp of a probability map: out(p) samples src at
// field(p), per channel, then renormalizes the pixel to sum 1. oob(p) is set
// when the sample box around the raw coordinate touched outside the source
// grid (coordinates are clamped before sampling, so the output is still
// defined there).
WarpResult backward_warp(const SegMap& src, const CorrespondenceField& field);

// The four cross-checked label maps for one sample, plus the geometry that
// produced the intra-domain pair.
struct PseudoLabels {
    SegMap night_to_day;        // inter-domain, warped from the night map
    SegMap day_to_night;        // inter-domain, warped from the day map
    SegMap night_to_day_intra;  // via the scaled day->reference flow
    SegMap day_to_night_intra;
    BinaryMask oob_night_to_day, oob_day_to_night;
    BinaryMask oob_night_to_day_intra, oob_day_to_night_intra;
    RefChoice ref_choice = RefChoice::Backward;
    double lambda = 0.0;
};

// Full matching pipeline on one sample: fused two-scale correlation in both
// directions, temperature soft-argmax, GPS reference selection and flow
// scaling, then the four backward warps. The intra out-of-bounds masks
// include pixels whose scaled flow had to be clamped into the grid.
//
// A night fix coinciding with the day fix is valid (the scaled flow
// degenerates to the identity); other degenerate GPS layouts propagate as
// GeometryError.
PseudoLabels make_pseudolabels(const PairSample& sample, double alpha, int threads = 0);

} // namespace glass
