#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "glass/correspond.hpp"
#include "glass/losses.hpp"

namespace glass {

// Defaults pinned by the verification contract.
inline constexpr double kGradFdStep = 1e-5;
inline constexpr double kGradRelTolerance = 1e-4;

// One scalar comparison. axis is 0 for x, 1 for y in the flow check and the
// class index in the loss check.
struct GradEntry {
    std::size_t p = 0;  // source pixel (linear) or image pixel
    std::size_t q = 0;  // target pixel (linear); unused by the loss check
    int axis = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_err = 0.0;
};

struct GradReport {
    std::size_t entries_checked = 0;
    double max_rel_err = 0.0;
    double tolerance = kGradRelTolerance;
    bool pass = false;
    std::vector<GradEntry> entries;
};

// relative error |a - n| / max(|a|, |n|, 1e-8); the floor keeps genuinely
// zero gradients from dividing by zero.
double grad_rel_err(double analytic, double numeric);

struct FlowProbe {
    std::size_t p = 0;  // source pixel, linear over the source grid
    std::size_t q = 0;  // perturbed target score, linear over the target grid
};

struct LossProbe {
    std::size_t pixel = 0;
    int k = 0;  // class whose log-probability is perturbed
};

// Checks d flow(p) / d score(p, q) = alpha * w(p, q) * (q - flow(p)), where
// w is the softmax weight, against central differences with step fd_step.
// All check-path arithmetic runs in double regardless of how the volume is
// stored. Both coordinates of every probe are compared.
//
// Probes must index inside the volume (InputError otherwise). alpha in
// [0.1, 100] keeps the comparison well conditioned; alpha = 0 is also valid
// and must come back identically zero on both sides.
GradReport grad_flow_wrt_corr(const CorrVolume& volume, double alpha,
                              const std::vector<FlowProbe>& probes,
                              double fd_step = kGradFdStep,
                              double tolerance = kGradRelTolerance);

// Deterministic probe set for a volume: pixels cycle over the source grid,
// targets are drawn from the given seed and re-drawn until the probe is
// well conditioned for the pinned step. That requires the softmax weight to
// sit inside [min_weight, 1 - min_weight] and the analytic gradient to
// clear a small floor on both axes; outside those bands the comparison
// measures cancellation noise instead of the Jacobian (negligible weights
// bury the response, saturated ones collapse the flow onto the target, and
// a target aligned with the flow point zeroes one axis). Pixels with no
// usable target are skipped; InputError when the whole volume is
// degenerate. alpha = 0 compares exactly, so every probe qualifies.
std::vector<FlowProbe> make_flow_probes(const CorrVolume& volume, double alpha,
                                        std::size_t count, std::uint64_t seed,
                                        double min_weight = 1e-3);

// Checks d warping_loss / d log target(q, k). The analytic value is
// -m(q) / (N * C) when q is non-ignored and k is the supervisor's class,
// zero otherwise. The finite-difference side re-evaluates the full loss with
// the target held in double precision so the pinned step survives storage
// rounding.
//
// Probed pixels must not sit in the ignore set and the probed probability
// must stay strictly inside (kProbFloor, 1) after perturbation (InputError
// otherwise).
GradReport grad_loss_wrt_target(const SegMap& target, const SegMap& supervisor,
                                const ConfidenceMap& m, const ClassConfig& cfg,
                                const std::vector<LossProbe>& probes,
                                double fd_step = kGradFdStep,
                                double tolerance = kGradRelTolerance);

std::vector<LossProbe> make_loss_probes(const SegMap& target, const SegMap& supervisor,
                                        const ClassConfig& cfg, std::size_t count,
                                        std::uint64_t seed);

} // namespace glass
