#pragma once

#include <span>
#include <vector>

#include "glass/confidence.hpp"
#include "glass/tensor.hpp"

namespace glass {

// Class palette metadata. The dynamic set holds classes whose instances move
// between frames (vehicles, riders, pedestrians), which makes their warped
// labels unreliable when they disagree with the direct prediction.
struct ClassConfig {
    int num_classes = 19;
    std::vector<int> dynamic_classes;

    // 19-class street-scene palette; indices 11..18 are the movable things.
    static ClassConfig street_scene_default(int num_classes = 19);

    bool is_dynamic(int k) const;
    // Throws InputError on duplicates or out-of-range entries.
    void validate() const;
};

// Probabilities are clamped into [kProbFloor, 1] before any log.
inline constexpr double kProbFloor = 1e-12;

// Index of the largest entry; ties resolve to the lowest index.
int argmax_class(std::span<const float> probs);

// One-hot vector of the argmax class.
std::vector<float> one_hot(std::span<const float> probs);

// Soft cross entropy against the one-hot of the supervisor:
// sum_k onehot(supervisor)_k * log(clamp(pred_k)). Always <= 0; equals 0
// exactly when the prediction puts probability 1 on the supervisor's class.
//
// Throws ShapeError on length mismatch, InputError on non-finite entries.
double cross_entropy_h(std::span<const float> supervisor, std::span<const float> pred);

// Pixels whose own dominant class is dynamic AND disagrees with the
// supervising map's dominant class; those are excluded from the warping
// loss. Both conditions must hold, so a dynamic pixel that agrees survives.
BinaryMask ignore_mask(const SegMap& target, const SegMap& supervisor, const ClassConfig& cfg);

// Confidence-weighted warping loss:
//   -(1 / (N * C)) * sum over non-ignored pixels of m(q) * H(supervisor(q), target(q))
// where N is the full pixel count (h * w, independent of masking) and H is
// cross_entropy_h above. Non-negative by construction.
double warping_loss(const SegMap& target, const SegMap& supervisor,
                    const ConfidenceMap& m, const ClassConfig& cfg);

// Same loss with the target probabilities held in double (h * w * c,
// channel-fastest). The derivative verifier perturbs the target below f32
// resolution, which would be lost through SegMap storage; both entry points
// share one scalar core.
double warping_loss_f64(std::span<const double> target_probs, int h, int w, int c,
                        const SegMap& supervisor, const ConfidenceMap& m,
                        const ClassConfig& cfg);

struct SegLossResult {
    double value = 0.0;
    bool all_ignored = false;  // set when no pixel carried a usable label
};

// Mean negative log likelihood of the labelled class over pixels whose label
// is not LabelMap::kIgnoreLabel. Labels >= num_classes are rejected.
SegLossResult seg_loss(const SegMap& pred, const LabelMap& labels, const ClassConfig& cfg);

// Scalar parts and composition weights of the training objectives. The
// externally supplied terms (light, adversarial, discriminator) default to
// zero so partial breakdowns still compose.
struct LossBreakdown {
    double l_night_to_day = 0.0;
    double l_day_to_night = 0.0;
    double l_seg = 0.0;
    double l_light = 0.0;
    double l_adv = 0.0;
    double l_dis = 0.0;

    double mu1 = 0.01;  // weight of the light-enhancement term
    double mu2 = 0.01;  // weight of the adversarial term
    double mu3 = 1.0;   // weight of the segmentation term
    double mu4 = 1.0;   // weight of the discriminator term

    // Filled by compose_objectives.
    double objective_day = 0.0;
    double objective_night = 0.0;
    double objective_source = 0.0;
};

// objective_day    = mu1 * l_light + mu2 * l_adv
// objective_night  = mu1 * l_light + l_night_to_day + l_day_to_night + mu2 * l_adv
// objective_source = mu1 * l_light + mu3 * l_seg + mu4 * l_dis
//
// Linear in every part; throws InputError on non-finite inputs.
void compose_objectives(LossBreakdown& parts);

} // namespace glass
