#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace glass::cli {

struct SynthOptions {
    std::string out;
    std::string size = "16x16";
    int channels = 8;
    int classes = 19;
    std::string shift = "3,2";
    double lambda = 0.5;
    double ref_dist_m = 10.0;
    double cross_track_m = 0.25;
    double gps_noise_m = 0.0;
    std::uint64_t seed = 1;
};

struct MatchOptions {
    std::string day_local, day_global, night_local, night_global;
    double alpha = 1e4;
    int threads = 0;
    std::string out;
};

struct PseudolabelOptions {
    std::string bundle;
    double alpha = 1e4;
    int threads = 0;
    std::string out;
};

struct LossOptions {
    std::string bundle;
    std::string labels;  // output directory of the pseudolabel command
    std::string mu;      // empty keeps the defaults
    std::string dynamic_classes = "default";
    double l_light = 0.0;
    double l_adv = 0.0;
    double l_dis = 0.0;
    std::string seg_pred;    // optional supervised pair
    std::string seg_labels;
    std::string out;
};

struct NoiseSweepOptions {
    std::string levels = "0,2,5";
    int trials = 20;
    std::uint64_t seed = 1;
    double alpha = 1e4;
    int threads = 0;
    std::string out;
};

struct GradcheckOptions {
    std::size_t probes = 100;
    double alpha = 10.0;
    std::uint64_t seed = 7;
    double tolerance = 1e-4;
    double fd_step = 1e-5;
    std::string out;
};

struct SimilarityOptions {
    std::string night;
    std::string day;
    std::string point = "0,0";
    double threshold = 0.25;
    std::string out;
};

struct FixtureOptions {
    std::string dir;
    std::string work;  // scratch directory for verify; defaults inside dir
};

void cmd_synth(const SynthOptions& opt);
void cmd_match(const MatchOptions& opt);
void cmd_pseudolabel(const PseudolabelOptions& opt);
void cmd_loss(const LossOptions& opt);
void cmd_noise_sweep(const NoiseSweepOptions& opt);
void cmd_gradcheck(const GradcheckOptions& opt);  // throws VerifyError on failure
void cmd_similarity(const SimilarityOptions& opt);
void cmd_fixtures_regen(const FixtureOptions& opt);
void cmd_fixtures_verify(const FixtureOptions& opt);  // throws VerifyError on failure

// Path of the running binary, used to re-invoke subcommands for fixtures.
std::filesystem::path self_exe();

} // namespace glass::cli
