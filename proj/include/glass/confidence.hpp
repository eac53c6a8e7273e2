#pragma once

#include "glass/tensor.hpp"

namespace glass {

// 1 where a pseudo-label is trustworthy, 0 where it is not.
using ConfidenceMap = BinaryMask;

// Agreement test between a pseudo-label map and its intra-domain
// counterpart: pixel p is confident when the dominant class of a at p
// appears as the dominant class of b anywhere in the 3x3 neighbourhood of p
// (clipped at the borders). Pixels flagged in oob are forced to 0 whatever
// the labels say. Argmax ties resolve to the lowest class index.
//
// Throws ShapeError when the three grids disagree or channel counts differ.
ConfidenceMap confidence_map(const SegMap& a, const SegMap& b, const BinaryMask& oob);

// Fraction of zeros; the robustness sweeps track how it grows with GPS
// error. Throws InputError on an empty map.
double zero_fraction(const ConfidenceMap& m);

} // namespace glass
