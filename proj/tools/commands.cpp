#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glass/confidence.hpp"
#include "glass/correspond.hpp"
#include "glass/digest.hpp"
#include "glass/errors.hpp"
#include "glass/gradcheck.hpp"
#include "glass/json_canon.hpp"
#include "glass/losses.hpp"
#include "glass/rng.hpp"
#include "glass/synth.hpp"
#include "glass/tensor_io.hpp"
#include "glass/version.hpp"
#include "glass/warp.hpp"

namespace glass::cli {

namespace fs = std::filesystem;

// Output names shared between the producing and consuming commands.
const char* kOutFlowDayToNight = "flow_day_to_night.glt";
const char* kOutFlowNightToDay = "flow_night_to_day.glt";
const char* kOutPseudoNightToDay = "p_night_to_day.glt";
const char* kOutPseudoDayToNight = "p_day_to_night.glt";
const char* kOutPseudoNightToDayIntra = "p_night_to_day_intra.glt";
const char* kOutPseudoDayToNightIntra = "p_day_to_night_intra.glt";
const char* kOutConfNightToDay = "conf_night_to_day.glt";
const char* kOutConfDayToNight = "conf_day_to_night.glt";
const char* kOutOobNightToDay = "oob_night_to_day.glt";
const char* kOutOobDayToNight = "oob_day_to_night.glt";
const char* kOutOobNightToDayIntra = "oob_night_to_day_intra.glt";
const char* kOutOobDayToNightIntra = "oob_day_to_night_intra.glt";
const char* kOutSimilarity = "similarity.glt";
const char* kOutSweepCsv = "sweep.csv";
const char* kOutReport = "report.json";

namespace {

std::pair<int, int> parse_size(const std::string& s) {
    const std::size_t sep = s.find('x');
    if (sep == std::string::npos || sep == 0 || sep + 1 >= s.size()) {
        throw InputError("expected a size of the form HxW, got '" + s + "'");
    }
    try {
        const int h = std::stoi(s.substr(0, sep));
        const int w = std::stoi(s.substr(sep + 1));
        return {h, w};
    } catch (const std::exception&) {
        throw InputError("expected a size of the form HxW, got '" + s + "'");
    }
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string item =
            comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InputError(std::string(what) + ": bad number '" + item + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw InputError(std::string(what) + ": empty list");
    return out;
}

std::pair<int, int> parse_int_pair(const std::string& s, const char* what) {
    const auto values = parse_double_list(s, what);
    if (values.size() != 2 || values[0] != std::floor(values[0]) ||
        values[1] != std::floor(values[1])) {
        throw InputError(std::string(what) + ": expected two integers, got '" + s + "'");
    }
    return {static_cast<int>(values[0]), static_cast<int>(values[1])};
}

// Assembles the canonical run report. Only file names and digests are
// recorded, never absolute paths, so a rerun in a different directory
// produces identical bytes.
class ReportBuilder {
public:
    explicit ReportBuilder(std::string command) : command_(std::move(command)) {}

    void add_input(const std::string& key, const fs::path& path) {
        Json entry = Json::object();
        entry.set("digest", Json::string(digest_file(path)));
        entry.set("file", Json::string(path.filename().string()));
        inputs_.set(key, std::move(entry));
    }

    void add_output(const std::string& key, const std::string& relative_name) {
        Json entry = Json::object();
        entry.set("file", Json::string(relative_name));
        outputs_.set(key, std::move(entry));
    }

    Json& parameters() { return parameters_; }
    Json& results() { return results_; }

    void write(const fs::path& out_dir) const {
        Json doc = Json::object();
        doc.set("command", Json::string(command_));
        doc.set("inputs", inputs_);
        doc.set("outputs", outputs_);
        doc.set("parameters", parameters_);
        doc.set("results", results_);
        Json tool = Json::object();
        tool.set("name", Json::string(kToolName));
        tool.set("version", Json::string(kToolVersion));
        doc.set("tool", std::move(tool));
        write_file_bytes(out_dir / kOutReport, doc.dump());
    }

private:
    std::string command_;
    Json inputs_ = Json::object();
    Json outputs_ = Json::object();
    Json parameters_ = Json::object();
    Json results_ = Json::object();
};

fs::path require_out_dir(const std::string& out) {
    if (out.empty()) throw InputError("--out is required");
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

CorrespondenceField fused_flow(const FeatureMap& src_local, const FeatureMap& src_global,
                               const FeatureMap& tgt_local, const FeatureMap& tgt_global,
                               double alpha, int threads) {
    const CorrVolume local_vol = correlation(src_local, tgt_local, threads);
    const CorrVolume global_vol = correlation(src_global, tgt_global, threads);
    return soft_argmax_flow(fuse_volumes(local_vol, global_vol), alpha, threads);
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
    BinaryMask out = a;
    for (std::size_t i = 0; i < out.bits.size(); ++i) {
        out.bits[i] = (out.bits[i] || b.bits[i]) ? 1 : 0;
    }
    return out;
}

struct ConfidencePair {
    ConfidenceMap night_to_day;
    ConfidenceMap day_to_night;
    double zf_night_to_day = 0.0;
    double zf_day_to_night = 0.0;
};

// Each pseudo-label pair is judged against the union of its two
// out-of-bounds masks: a pixel that sampled outside the grid on either route
// cannot be trusted on either side of the comparison.
ConfidencePair make_confidences(const PseudoLabels& pl) {
    ConfidencePair cp;
    cp.night_to_day =
        confidence_map(pl.night_to_day, pl.night_to_day_intra,
                       mask_union(pl.oob_night_to_day, pl.oob_night_to_day_intra));
    cp.day_to_night =
        confidence_map(pl.day_to_night, pl.day_to_night_intra,
                       mask_union(pl.oob_day_to_night, pl.oob_day_to_night_intra));
    cp.zf_night_to_day = zero_fraction(cp.night_to_day);
    cp.zf_day_to_night = zero_fraction(cp.day_to_night);
    return cp;
}

} // namespace

void cmd_synth(const SynthOptions& opt) {
    const fs::path out = require_out_dir(opt.out);
    const auto [h, w] = parse_size(opt.size);
    const auto [sx, sy] = parse_int_pair(opt.shift, "--shift");

    SceneParams params;
    params.h = h;
    params.w = w;
    params.d = opt.channels;
    params.num_classes = opt.classes;
    params.shift_x = sx;
    params.shift_y = sy;
    params.lambda = opt.lambda;
    params.ref_dist_m = opt.ref_dist_m;
    params.cross_track_m = opt.cross_track_m;
    params.gps_noise_m = opt.gps_noise_m;
    params.seed = opt.seed;

    const SyntheticScene scene = gen_translated_scene(params);
    write_bundle(scene, out);

    ReportBuilder report("synth");
    report.parameters().set("size", Json::string(opt.size));
    report.parameters().set("channels", Json::integer(opt.channels));
    report.parameters().set("classes", Json::integer(opt.classes));
    report.parameters().set("shift", Json::string(opt.shift));
    report.parameters().set("lambda", Json::number(opt.lambda));
    report.parameters().set("ref_dist_m", Json::number(opt.ref_dist_m));
    report.parameters().set("cross_track_m", Json::number(opt.cross_track_m));
    report.parameters().set("gps_noise_m", Json::number(opt.gps_noise_m));
    report.parameters().set("seed", Json::string(std::to_string(opt.seed)));
    const char* files[] = {BundlePaths::day_local,    BundlePaths::day_global,
                           BundlePaths::night_local,  BundlePaths::night_global,
                           BundlePaths::ref_local,    BundlePaths::ref_global,
                           BundlePaths::seg_day,      BundlePaths::seg_night,
                           BundlePaths::labels_day,   BundlePaths::truth_field,
                           BundlePaths::truth_valid,  BundlePaths::gps};
    for (const char* f : files) report.add_output(f, f);
    report.results().set("ref_shift_x", Json::integer(scene.ref_shift_x));
    report.results().set("ref_shift_y", Json::integer(scene.ref_shift_y));
    report.write(out);
}

void cmd_match(const MatchOptions& opt) {
    const fs::path out = require_out_dir(opt.out);
    const FeatureMap day_local =
        FeatureMap::from_tensor(read_tensor(opt.day_local), "day_local");
    const FeatureMap day_global =
        FeatureMap::from_tensor(read_tensor(opt.day_global), "day_global");
    const FeatureMap night_local =
        FeatureMap::from_tensor(read_tensor(opt.night_local), "night_local");
    const FeatureMap night_global =
        FeatureMap::from_tensor(read_tensor(opt.night_global), "night_global");

    if (day_local.h != day_global.h || day_local.w != day_global.w ||
        night_local.h != night_global.h || night_local.w != night_global.w) {
        throw ShapeError("match: local/global grids disagree");
    }

    const CorrespondenceField day_to_night =
        fused_flow(day_local, day_global, night_local, night_global, opt.alpha, opt.threads);
    const CorrespondenceField night_to_day =
        fused_flow(night_local, night_global, day_local, day_global, opt.alpha, opt.threads);

    write_tensor(day_to_night.to_tensor(), out / kOutFlowDayToNight);
    write_tensor(night_to_day.to_tensor(), out / kOutFlowNightToDay);

    ReportBuilder report("match");
    report.add_input("day_local", opt.day_local);
    report.add_input("day_global", opt.day_global);
    report.add_input("night_local", opt.night_local);
    report.add_input("night_global", opt.night_global);
    report.add_output("flow_day_to_night", kOutFlowDayToNight);
    report.add_output("flow_night_to_day", kOutFlowNightToDay);
    report.parameters().set("alpha", Json::number(opt.alpha));
    report.parameters().set("threads", Json::integer(opt.threads));
    report.results().set("day_grid_h", Json::integer(day_local.h));
    report.results().set("day_grid_w", Json::integer(day_local.w));
    report.results().set("night_grid_h", Json::integer(night_local.h));
    report.results().set("night_grid_w", Json::integer(night_local.w));
    report.write(out);
}

void cmd_pseudolabel(const PseudolabelOptions& opt) {
    const fs::path out = require_out_dir(opt.out);
    const fs::path bundle(opt.bundle);
    const PairSample sample = read_bundle(bundle);
    const PseudoLabels pl = make_pseudolabels(sample, opt.alpha, opt.threads);
    const ConfidencePair cp = make_confidences(pl);

    write_tensor(pl.night_to_day.to_tensor(), out / kOutPseudoNightToDay);
    write_tensor(pl.day_to_night.to_tensor(), out / kOutPseudoDayToNight);
    write_tensor(pl.night_to_day_intra.to_tensor(), out / kOutPseudoNightToDayIntra);
    write_tensor(pl.day_to_night_intra.to_tensor(), out / kOutPseudoDayToNightIntra);
    write_tensor(cp.night_to_day.to_tensor(), out / kOutConfNightToDay);
    write_tensor(cp.day_to_night.to_tensor(), out / kOutConfDayToNight);
    write_tensor(pl.oob_night_to_day.to_tensor(), out / kOutOobNightToDay);
    write_tensor(pl.oob_day_to_night.to_tensor(), out / kOutOobDayToNight);
    write_tensor(pl.oob_night_to_day_intra.to_tensor(), out / kOutOobNightToDayIntra);
    write_tensor(pl.oob_day_to_night_intra.to_tensor(), out / kOutOobDayToNightIntra);

    ReportBuilder report("pseudolabel");
    const char* inputs[] = {BundlePaths::day_local,   BundlePaths::day_global,
                            BundlePaths::night_local, BundlePaths::night_global,
                            BundlePaths::ref_local,   BundlePaths::ref_global,
                            BundlePaths::seg_day,     BundlePaths::seg_night,
                            BundlePaths::gps};
    for (const char* f : inputs) report.add_input(f, bundle / f);
    const char* outputs[] = {kOutPseudoNightToDay,      kOutPseudoDayToNight,
                             kOutPseudoNightToDayIntra, kOutPseudoDayToNightIntra,
                             kOutConfNightToDay,        kOutConfDayToNight,
                             kOutOobNightToDay,         kOutOobDayToNight,
                             kOutOobNightToDayIntra,    kOutOobDayToNightIntra};
    for (const char* f : outputs) report.add_output(f, f);
    report.parameters().set("alpha", Json::number(opt.alpha));
    report.parameters().set("threads", Json::integer(opt.threads));
    report.results().set("lambda", Json::number(pl.lambda));
    report.results().set("reference", Json::string(to_string(pl.ref_choice)));
    report.results().set("zero_fraction_night_to_day", Json::number(cp.zf_night_to_day));
    report.results().set("zero_fraction_day_to_night", Json::number(cp.zf_day_to_night));
    report.write(out);
}

void cmd_loss(const LossOptions& opt) {
    const fs::path out = require_out_dir(opt.out);
    const fs::path bundle(opt.bundle);
    const fs::path labels_dir(opt.labels);

    const SegMap seg_day =
        SegMap::from_tensor(read_tensor(bundle / BundlePaths::seg_day), "seg_day");
    const SegMap seg_night =
        SegMap::from_tensor(read_tensor(bundle / BundlePaths::seg_night), "seg_night");
    const SegMap p_n2d = SegMap::from_tensor(
        read_tensor(labels_dir / kOutPseudoNightToDay), kOutPseudoNightToDay);
    const SegMap p_d2n = SegMap::from_tensor(
        read_tensor(labels_dir / kOutPseudoDayToNight), kOutPseudoDayToNight);
    const BinaryMask conf_n2d = BinaryMask::from_tensor(
        read_tensor(labels_dir / kOutConfNightToDay), kOutConfNightToDay);
    const BinaryMask conf_d2n = BinaryMask::from_tensor(
        read_tensor(labels_dir / kOutConfDayToNight), kOutConfDayToNight);

    ClassConfig cfg;
    if (opt.dynamic_classes == "default") {
        cfg = ClassConfig::street_scene_default(seg_day.c);
    } else {
        cfg.num_classes = seg_day.c;
        if (opt.dynamic_classes != "none") {
            for (double v : parse_double_list(opt.dynamic_classes, "--dynamic-classes")) {
                if (v != std::floor(v)) {
                    throw InputError("--dynamic-classes: expected integers");
                }
                cfg.dynamic_classes.push_back(static_cast<int>(v));
            }
        }
        cfg.validate();
    }

    LossBreakdown breakdown;
    if (!opt.mu.empty()) {
        const auto mu = parse_double_list(opt.mu, "--mu");
        if (mu.size() != 4) throw InputError("--mu: expected four weights");
        breakdown.mu1 = mu[0];
        breakdown.mu2 = mu[1];
        breakdown.mu3 = mu[2];
        breakdown.mu4 = mu[3];
    }
    breakdown.l_light = opt.l_light;
    breakdown.l_adv = opt.l_adv;
    breakdown.l_dis = opt.l_dis;
    breakdown.l_night_to_day = warping_loss(p_n2d, seg_day, conf_n2d, cfg);
    breakdown.l_day_to_night = warping_loss(seg_night, p_d2n, conf_d2n, cfg);

    ReportBuilder report("loss");
    report.add_input("seg_day", bundle / BundlePaths::seg_day);
    report.add_input("seg_night", bundle / BundlePaths::seg_night);
    report.add_input(kOutPseudoNightToDay, labels_dir / kOutPseudoNightToDay);
    report.add_input(kOutPseudoDayToNight, labels_dir / kOutPseudoDayToNight);
    report.add_input(kOutConfNightToDay, labels_dir / kOutConfNightToDay);
    report.add_input(kOutConfDayToNight, labels_dir / kOutConfDayToNight);

    bool all_ignored = false;
    if (!opt.seg_pred.empty() || !opt.seg_labels.empty()) {
        if (opt.seg_pred.empty() || opt.seg_labels.empty()) {
            throw InputError("--seg-pred and --seg-labels must be given together");
        }
        const SegMap pred = SegMap::from_tensor(read_tensor(opt.seg_pred), "seg_pred");
        const LabelMap truth =
            LabelMap::from_tensor(read_tensor(opt.seg_labels), "seg_labels");
        const SegLossResult r = seg_loss(pred, truth, cfg);
        breakdown.l_seg = r.value;
        all_ignored = r.all_ignored;
        report.add_input("seg_pred", opt.seg_pred);
        report.add_input("seg_labels", opt.seg_labels);
    }

    compose_objectives(breakdown);

    report.parameters().set("mu1", Json::number(breakdown.mu1));
    report.parameters().set("mu2", Json::number(breakdown.mu2));
    report.parameters().set("mu3", Json::number(breakdown.mu3));
    report.parameters().set("mu4", Json::number(breakdown.mu4));
    Json dyn = Json::array();
    for (int k : cfg.dynamic_classes) dyn.push(Json::integer(k));
    report.parameters().set("dynamic_classes", std::move(dyn));
    report.results().set("l_night_to_day", Json::number(breakdown.l_night_to_day));
    report.results().set("l_day_to_night", Json::number(breakdown.l_day_to_night));
    report.results().set("l_seg", Json::number(breakdown.l_seg));
    report.results().set("l_light", Json::number(breakdown.l_light));
    report.results().set("l_adv", Json::number(breakdown.l_adv));
    report.results().set("l_dis", Json::number(breakdown.l_dis));
    report.results().set("seg_all_ignored", Json::boolean(all_ignored));
    report.results().set("objective_day", Json::number(breakdown.objective_day));
    report.results().set("objective_night", Json::number(breakdown.objective_night));
    report.results().set("objective_source", Json::number(breakdown.objective_source));
    report.write(out);
}

void cmd_noise_sweep(const NoiseSweepOptions& opt) {
    const fs::path out = require_out_dir(opt.out);
    const std::vector<double> levels = parse_double_list(opt.levels, "--levels");
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        if (levels[i] >= levels[i + 1]) {
            throw InputError("--levels must be strictly ascending");
        }
    }
    for (double level : levels) {
        if (level < 0.0) throw InputError("--levels must be non-negative");
    }
    if (opt.trials <= 0) throw InputError("--trials must be positive");

    // One base scene per trial; only the injected GPS error varies across
    // levels, so every comparison is paired.
    SplitMix64 seeder(opt.seed);
    std::vector<std::uint64_t> trial_seeds;
    for (int t = 0; t < opt.trials; ++t) trial_seeds.push_back(seeder.next_u64());

    std::string csv = "level_m,trial,zero_fraction\n";
    std::vector<double> level_means(levels.size(), 0.0);
    for (std::size_t li = 0; li < levels.size(); ++li) {
        double sum = 0.0;
        for (int t = 0; t < opt.trials; ++t) {
            SceneParams params;
            params.seed = trial_seeds[static_cast<std::size_t>(t)];
            params.gps_noise_m = levels[li];
            // A metre of receiver error shifts the scaled flow by
            // ref_shift / ref_dist pixels; 5 m spacing puts the sweep's
            // standard levels clearly past the 3x3 agreement kernel.
            params.ref_dist_m = 5.0;
            const SyntheticScene scene = gen_translated_scene(params);
            const PseudoLabels pl = make_pseudolabels(scene.sample, opt.alpha, opt.threads);
            const ConfidencePair cp = make_confidences(pl);
            const double zf = 0.5 * (cp.zf_night_to_day + cp.zf_day_to_night);
            sum += zf;
            csv += format_number(levels[li]);
            csv += ',';
            csv += std::to_string(t);
            csv += ',';
            csv += format_number(zf);
            csv += '\n';
        }
        level_means[li] = sum / static_cast<double>(opt.trials);
    }
    write_file_bytes(out / kOutSweepCsv, csv);

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < level_means.size(); ++i) {
        if (level_means[i] > level_means[i + 1]) monotone = false;
    }

    ReportBuilder report("noise-sweep");
    report.add_output("sweep", kOutSweepCsv);
    report.parameters().set("levels", Json::string(opt.levels));
    report.parameters().set("trials", Json::integer(opt.trials));
    report.parameters().set("alpha", Json::number(opt.alpha));
    report.parameters().set("seed", Json::string(std::to_string(opt.seed)));
    Json means = Json::array();
    for (double m : level_means) means.push(Json::number(m));
    report.results().set("level_means", std::move(means));
    report.results().set("monotone_non_decreasing", Json::boolean(monotone));
    report.write(out);
}

void cmd_gradcheck(const GradcheckOptions& opt) {
    const fs::path out = require_out_dir(opt.out);
    SplitMix64 rng(opt.seed);

    // Flow side: a random volume over a 6x6 pair of grids.
    CorrVolume volume(6, 6, 6, 6);
    for (float& v : volume.scores) {
        v = static_cast<float>(rng.next_double(-1.0, 1.0));
    }
    const auto flow_probes =
        make_flow_probes(volume, opt.alpha, opt.probes, rng.next_u64());
    const GradReport flow_report =
        grad_flow_wrt_corr(volume, opt.alpha, flow_probes, opt.fd_step, opt.tolerance);

    // Loss side: random soft maps, a mostly-on confidence mask and the
    // default dynamic palette.
    const int h = 8, w = 8, c = 19;
    auto random_seg = [&](SegMap& seg) {
        seg = SegMap(h, w, c);
        for (int p = 0; p < h * w; ++p) {
            double sum = 0.0;
            double vals[32];
            for (int k = 0; k < c; ++k) {
                vals[k] = rng.next_double(0.05, 1.0);
                sum += vals[k];
            }
            for (int k = 0; k < c; ++k) {
                seg.data[static_cast<std::size_t>(p) * c + k] =
                    static_cast<float>(vals[k] / sum);
            }
        }
        seg.validate("gradcheck map");
    };
    SegMap target, supervisor;
    random_seg(target);
    random_seg(supervisor);
    ConfidenceMap m(h, w);
    for (auto& bit : m.bits) bit = rng.next_double() < 0.8 ? 1 : 0;
    const ClassConfig cfg = ClassConfig::street_scene_default(c);

    const auto loss_probes = make_loss_probes(target, supervisor, cfg, opt.probes,
                                              rng.next_u64());
    const GradReport loss_report = grad_loss_wrt_target(target, supervisor, m, cfg,
                                                        loss_probes, opt.fd_step,
                                                        opt.tolerance);

    const bool pass = flow_report.pass && loss_report.pass;

    ReportBuilder report("gradcheck");
    report.parameters().set("probes", Json::integer(static_cast<std::int64_t>(opt.probes)));
    report.parameters().set("alpha", Json::number(opt.alpha));
    report.parameters().set("seed", Json::string(std::to_string(opt.seed)));
    report.parameters().set("tolerance", Json::number(opt.tolerance));
    report.parameters().set("fd_step", Json::number(opt.fd_step));
    auto summarize = [](const GradReport& r) {
        Json o = Json::object();
        o.set("entries", Json::integer(static_cast<std::int64_t>(r.entries_checked)));
        o.set("max_rel_err", Json::number(r.max_rel_err));
        o.set("pass", Json::boolean(r.pass));
        return o;
    };
    report.results().set("flow_wrt_scores", summarize(flow_report));
    report.results().set("loss_wrt_target", summarize(loss_report));
    report.results().set("pass", Json::boolean(pass));
    report.write(out);

    if (!pass) {
        throw VerifyError("gradient check exceeded tolerance, see " +
                          (out / kOutReport).string());
    }
}

void cmd_similarity(const SimilarityOptions& opt) {
    const fs::path out = require_out_dir(opt.out);
    const FeatureMap night = FeatureMap::from_tensor(read_tensor(opt.night), "night");
    const FeatureMap day = FeatureMap::from_tensor(read_tensor(opt.day), "day");
    const auto [px, py] = parse_int_pair(opt.point, "--point");

    const BinaryMask mask = similarity_map(night, px, py, day, opt.threshold);
    write_tensor(mask.to_tensor(), out / kOutSimilarity);

    ReportBuilder report("similarity");
    report.add_input("night", opt.night);
    report.add_input("day", opt.day);
    report.add_output("similarity", kOutSimilarity);
    report.parameters().set("point_x", Json::integer(px));
    report.parameters().set("point_y", Json::integer(py));
    report.parameters().set("threshold", Json::number(opt.threshold));
    const double coverage =
        static_cast<double>(mask.count_ones()) / static_cast<double>(mask.bits.size());
    report.results().set("coverage", Json::number(coverage));
    report.write(out);
}

} // namespace glass::cli
