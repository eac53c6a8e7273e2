#include "glass/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glass/errors.hpp"
#include "glass/rng.hpp"

namespace glass {

double grad_rel_err(double analytic, double numeric) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    return std::abs(analytic - numeric) / denom;
}

namespace {

// Softmax-weighted coordinate expectation of one score row, all in double.
void soft_argmax_row(const std::vector<double>& row, double alpha, int tgt_w, double& fx,
                     double& fy) {
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double z = 0.0;
    std::vector<double> weights(row.size());
    for (std::size_t q = 0; q < row.size(); ++q) {
        weights[q] = std::exp(alpha * (row[q] - mx));
        z += weights[q];
    }
    fx = 0.0;
    fy = 0.0;
    for (std::size_t q = 0; q < row.size(); ++q) {
        const double wgt = weights[q] / z;
        fx += wgt * static_cast<double>(q % tgt_w);
        fy += wgt * static_cast<double>(q / tgt_w);
    }
}

double softmax_weight(const std::vector<double>& row, double alpha, std::size_t q) {
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : row) z += std::exp(alpha * (v - mx));
    return std::exp(alpha * (row[q] - mx)) / z;
}

void finalize(GradReport& report, double tolerance) {
    report.entries_checked = report.entries.size();
    report.tolerance = tolerance;
    report.max_rel_err = 0.0;
    for (const auto& e : report.entries) {
        report.max_rel_err = std::max(report.max_rel_err, e.rel_err);
    }
    report.pass = report.max_rel_err < tolerance;
}

} // namespace

GradReport grad_flow_wrt_corr(const CorrVolume& volume, double alpha,
                              const std::vector<FlowProbe>& probes, double fd_step,
                              double tolerance) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw InputError("grad check: alpha must be finite and non-negative");
    }
    if (fd_step <= 0.0) throw InputError("grad check: step must be positive");
    const std::size_t np = volume.src_count();
    const std::size_t nq = volume.tgt_count();

    GradReport report;
    std::vector<double> row(nq);
    for (const FlowProbe& probe : probes) {
        if (probe.p >= np || probe.q >= nq) {
            throw InputError("grad check: probe outside the volume");
        }
        for (std::size_t q = 0; q < nq; ++q) {
            row[q] = static_cast<double>(volume.score(probe.p, q));
        }

        double fx, fy;
        soft_argmax_row(row, alpha, volume.tgt_w, fx, fy);
        const double weight = softmax_weight(row, alpha, probe.q);
        const double qx = static_cast<double>(probe.q % volume.tgt_w);
        const double qy = static_cast<double>(probe.q / volume.tgt_w);
        const double analytic_x = alpha * weight * (qx - fx);
        const double analytic_y = alpha * weight * (qy - fy);

        const double saved = row[probe.q];
        row[probe.q] = saved + fd_step;
        double fx_hi, fy_hi;
        soft_argmax_row(row, alpha, volume.tgt_w, fx_hi, fy_hi);
        row[probe.q] = saved - fd_step;
        double fx_lo, fy_lo;
        soft_argmax_row(row, alpha, volume.tgt_w, fx_lo, fy_lo);
        row[probe.q] = saved;
        const double numeric_x = (fx_hi - fx_lo) / (2.0 * fd_step);
        const double numeric_y = (fy_hi - fy_lo) / (2.0 * fd_step);

        report.entries.push_back(
            {probe.p, probe.q, 0, analytic_x, numeric_x, grad_rel_err(analytic_x, numeric_x)});
        report.entries.push_back(
            {probe.p, probe.q, 1, analytic_y, numeric_y, grad_rel_err(analytic_y, numeric_y)});
    }
    finalize(report, tolerance);
    return report;
}

std::vector<FlowProbe> make_flow_probes(const CorrVolume& volume, double alpha,
                                        std::size_t count, std::uint64_t seed,
                                        double min_weight) {
    const std::size_t np = volume.src_count();
    const std::size_t nq = volume.tgt_count();
    SplitMix64 rng(seed);
    std::vector<FlowProbe> probes;
    probes.reserve(count);
    std::vector<double> row(nq);
    // A probe is only useful when the analytic gradient clears the
    // cancellation floor of the pinned step on both axes. That fails in
    // three ways: a negligible softmax weight buries the response, a
    // saturated one collapses the flow onto the probed target (q - F -> 0),
    // and a target sharing a row or column with the flow point zeroes that
    // axis alone. Targets are redrawn into the usable band; source pixels
    // offering no usable target are skipped. alpha = 0 makes both sides
    // identically zero, which compares exactly, so every probe qualifies.
    constexpr double kMinAxisGrad = 1e-3;
    double fx = 0.0, fy = 0.0;
    const auto conditioned = [&](std::size_t q) {
        if (alpha == 0.0) return true;
        const double w = softmax_weight(row, alpha, q);
        if (w < min_weight || w > 1.0 - min_weight) return false;
        const double qx = static_cast<double>(q % static_cast<std::size_t>(volume.tgt_w));
        const double qy = static_cast<double>(q / static_cast<std::size_t>(volume.tgt_w));
        return alpha * w * std::abs(qx - fx) >= kMinAxisGrad &&
               alpha * w * std::abs(qy - fy) >= kMinAxisGrad;
    };
    std::size_t p = 0;
    std::size_t barren = 0;  // consecutive pixels with no usable target
    while (probes.size() < count) {
        if (barren >= np) {
            throw InputError("grad check: no well-conditioned probe targets");
        }
        for (std::size_t q = 0; q < nq; ++q) {
            row[q] = static_cast<double>(volume.score(p, q));
        }
        soft_argmax_row(row, alpha, volume.tgt_w, fx, fy);
        std::size_t q = rng.next_below(nq);
        for (int attempt = 0; attempt < 64 && !conditioned(q); ++attempt) {
            q = rng.next_below(nq);
        }
        if (!conditioned(q)) {
            std::size_t cand = 0;
            while (cand < nq && !conditioned(cand)) ++cand;
            if (cand == nq) {
                ++barren;
                p = (p + 1) % np;
                continue;
            }
            q = cand;
        }
        barren = 0;
        probes.push_back({p, q});
        p = (p + 1) % np;
    }
    return probes;
}

GradReport grad_loss_wrt_target(const SegMap& target, const SegMap& supervisor,
                                const ConfidenceMap& m, const ClassConfig& cfg,
                                const std::vector<LossProbe>& probes, double fd_step,
                                double tolerance) {
    if (fd_step <= 0.0) throw InputError("grad check: step must be positive");
    const std::size_t pixels = static_cast<std::size_t>(target.h) * target.w;
    const int c = target.c;

    std::vector<double> probs(target.data.begin(), target.data.end());
    const double n_times_c =
        static_cast<double>(target.h) * target.w * static_cast<double>(c);

    GradReport report;
    for (const LossProbe& probe : probes) {
        if (probe.pixel >= pixels || probe.k < 0 || probe.k >= c) {
            throw InputError("grad check: probe outside the map");
        }
        const int y = static_cast<int>(probe.pixel) / target.w;
        const int x = static_cast<int>(probe.pixel) % target.w;
        const int kt = argmax_class(target.at(y, x));
        const int ks = argmax_class(supervisor.at(y, x));
        if (cfg.is_dynamic(kt) && kt != ks) {
            throw InputError("grad check: probe lands on an ignored pixel");
        }

        const std::size_t idx = probe.pixel * static_cast<std::size_t>(c) + probe.k;
        const double p0 = probs[idx];
        const double hi = p0 * std::exp(fd_step);
        const double lo = p0 * std::exp(-fd_step);
        if (lo <= kProbFloor || hi >= 1.0) {
            throw InputError("grad check: probed probability too close to the clamp bounds");
        }
        // The perturbation must not move the pixel's dominant class, or the
        // ignore test would flip mid-difference.
        if (probe.k == kt) {
            double runner = -1.0;
            for (int j = 0; j < c; ++j) {
                if (j != kt) runner = std::max(runner, static_cast<double>(target.at(y, x)[j]));
            }
            if (lo <= runner) {
                throw InputError("grad check: probe would flip the dominant class");
            }
        } else if (hi >= static_cast<double>(target.at(y, x)[kt])) {
            throw InputError("grad check: probe would flip the dominant class");
        }

        const double analytic =
            (m.at(y, x) && probe.k == ks) ? -1.0 / n_times_c : 0.0;

        probs[idx] = hi;
        const double loss_hi =
            warping_loss_f64(probs, target.h, target.w, c, supervisor, m, cfg);
        probs[idx] = lo;
        const double loss_lo =
            warping_loss_f64(probs, target.h, target.w, c, supervisor, m, cfg);
        probs[idx] = p0;
        // d(log p)/d(step) is exactly 1, so dividing the loss delta by the
        // step gives the derivative with respect to the log-probability.
        const double numeric = (loss_hi - loss_lo) / (2.0 * fd_step);

        report.entries.push_back(
            {probe.pixel, 0, probe.k, analytic, numeric, grad_rel_err(analytic, numeric)});
    }
    finalize(report, tolerance);
    return report;
}

std::vector<LossProbe> make_loss_probes(const SegMap& target, const SegMap& supervisor,
                                        const ClassConfig& cfg, std::size_t count,
                                        std::uint64_t seed) {
    const std::size_t pixels = static_cast<std::size_t>(target.h) * target.w;
    const int c = target.c;
    SplitMix64 rng(seed);
    std::vector<LossProbe> probes;
    probes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 256 && !placed; ++attempt) {
            const std::size_t pixel = rng.next_below(pixels);
            const int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(c)));
            const int y = static_cast<int>(pixel) / target.w;
            const int x = static_cast<int>(pixel) % target.w;
            const int kt = argmax_class(target.at(y, x));
            const int ks = argmax_class(supervisor.at(y, x));
            if (cfg.is_dynamic(kt) && kt != ks) continue;
            const double p0 = static_cast<double>(target.at(y, x)[k]);
            if (p0 < 1e-6 || p0 > 0.98) continue;
            // Leave a wide margin against argmax flips under the probe step.
            double runner = -1.0;
            for (int j = 0; j < c; ++j) {
                if (j != kt) runner = std::max(runner, static_cast<double>(target.at(y, x)[j]));
            }
            const double top = static_cast<double>(target.at(y, x)[kt]);
            if (k == kt && p0 * 0.999 <= runner) continue;
            if (k != kt && p0 * 1.001 >= top) continue;
            probes.push_back({pixel, k});
            placed = true;
        }
        if (!placed) {
            throw InputError("grad check: could not place a well-conditioned probe");
        }
    }
    return probes;
}

} // namespace glass
