#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "commands.hpp"
#include "glass/errors.hpp"
#include "glass/version.hpp"

namespace {

int exit_code_for(const glass::Error& e) {
    if (dynamic_cast<const glass::VerifyError*>(&e)) return 5;
    if (dynamic_cast<const glass::GeometryError*>(&e)) return 4;
    if (dynamic_cast<const glass::ShapeError*>(&e)) return 3;
    // ParseError and InputError both mean "the input was unusable".
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    using namespace glass::cli;

    CLI::App app{"GPS-guided day/night correspondence and pseudo-label toolkit"};
    app.set_version_flag("--version",
                         std::string(glass::kToolName) + " " + glass::kToolVersion);
    app.require_subcommand(1);

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene bundle");
    synth_cmd->add_option("--out", synth.out, "Output bundle directory")->required();
    synth_cmd->add_option("--size", synth.size, "Grid size HxW");
    synth_cmd->add_option("--channels", synth.channels, "Feature channels per scale");
    synth_cmd->add_option("--classes", synth.classes, "Segmentation classes");
    synth_cmd->add_option("--shift", synth.shift, "Night translation dx,dy in pixels");
    synth_cmd->add_option("--lambda", synth.lambda, "Night position along day->reference");
    synth_cmd->add_option("--ref-dist", synth.ref_dist_m, "Day->reference distance in metres");
    synth_cmd->add_option("--cross-track", synth.cross_track_m,
                          "Perpendicular offset of the night fix in metres");
    synth_cmd->add_option("--gps-noise", synth.gps_noise_m,
                          "Extra radial GPS error on the night fix in metres");
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");

    MatchOptions match;
    auto* match_cmd =
        app.add_subcommand("match", "Correlate two frames and emit both flows");
    match_cmd->add_option("--day-local", match.day_local, "Day local features")->required();
    match_cmd->add_option("--day-global", match.day_global, "Day global features")->required();
    match_cmd->add_option("--night-local", match.night_local, "Night local features")
        ->required();
    match_cmd->add_option("--night-global", match.night_global, "Night global features")
        ->required();
    match_cmd->add_option("--alpha", match.alpha, "Softmax temperature");
    match_cmd->add_option("--threads", match.threads, "Worker count, 0 = auto");
    match_cmd->add_option("--out", match.out, "Output directory")->required();

    PseudolabelOptions pseudo;
    auto* pseudo_cmd = app.add_subcommand(
        "pseudolabel", "Run the full pipeline on a bundle: flows, warps, confidence");
    pseudo_cmd->add_option("--bundle", pseudo.bundle, "Scene bundle directory")->required();
    pseudo_cmd->add_option("--alpha", pseudo.alpha, "Softmax temperature");
    pseudo_cmd->add_option("--threads", pseudo.threads, "Worker count, 0 = auto");
    pseudo_cmd->add_option("--out", pseudo.out, "Output directory")->required();

    LossOptions loss;
    auto* loss_cmd =
        app.add_subcommand("loss", "Compute warping losses and training objectives");
    loss_cmd->add_option("--bundle", loss.bundle, "Scene bundle directory")->required();
    loss_cmd->add_option("--labels", loss.labels, "Directory written by pseudolabel")
        ->required();
    loss_cmd->add_option("--mu", loss.mu, "Objective weights mu1,mu2,mu3,mu4");
    loss_cmd->add_option("--dynamic-classes", loss.dynamic_classes,
                         "'default', 'none' or a comma list of class indices");
    loss_cmd->add_option("--light", loss.l_light, "Light-enhancement term");
    loss_cmd->add_option("--adv", loss.l_adv, "Adversarial term");
    loss_cmd->add_option("--dis", loss.l_dis, "Discriminator term");
    loss_cmd->add_option("--seg-pred", loss.seg_pred, "Predicted class probabilities");
    loss_cmd->add_option("--seg-labels", loss.seg_labels, "Ground-truth labels");
    loss_cmd->add_option("--out", loss.out, "Output directory")->required();

    NoiseSweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand(
        "noise-sweep", "Measure confidence decay under injected GPS error");
    sweep_cmd->add_option("--levels", sweep.levels, "Ascending error levels in metres");
    sweep_cmd->add_option("--trials", sweep.trials, "Scenes per level");
    sweep_cmd->add_option("--seed", sweep.seed, "Sweep seed");
    sweep_cmd->add_option("--alpha", sweep.alpha, "Softmax temperature");
    sweep_cmd->add_option("--threads", sweep.threads, "Worker count, 0 = auto");
    sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();

    GradcheckOptions grad;
    auto* grad_cmd = app.add_subcommand(
        "gradcheck", "Verify analytic derivatives against finite differences");
    grad_cmd->add_option("--probes", grad.probes, "Probes per check");
    grad_cmd->add_option("--alpha", grad.alpha, "Softmax temperature for the flow check");
    grad_cmd->add_option("--seed", grad.seed, "Probe seed");
    grad_cmd->add_option("--tolerance", grad.tolerance, "Relative error tolerance");
    grad_cmd->add_option("--fd-step", grad.fd_step, "Central difference step");
    grad_cmd->add_option("--out", grad.out, "Output directory")->required();

    SimilarityOptions sim;
    auto* sim_cmd = app.add_subcommand(
        "similarity", "Threshold one night pixel's similarity over a day frame");
    sim_cmd->add_option("--night", sim.night, "Night feature tensor")->required();
    sim_cmd->add_option("--day", sim.day, "Day feature tensor")->required();
    sim_cmd->add_option("--point", sim.point, "Night pixel x,y");
    sim_cmd->add_option("--threshold", sim.threshold, "Similarity threshold");
    sim_cmd->add_option("--out", sim.out, "Output directory")->required();

    FixtureOptions fx;
    auto* fx_cmd = app.add_subcommand("fixtures", "Golden fixture maintenance");
    fx_cmd->require_subcommand(1);
    auto* fx_verify = fx_cmd->add_subcommand(
        "verify", "Re-run every fixture and compare against the manifest");
    fx_verify->add_option("--dir", fx.dir, "Fixture directory")->required();
    fx_verify->add_option("--work", fx.work, "Scratch directory");
    auto* fx_regen = fx_cmd->add_subcommand(
        "regen", "Regenerate fixture inputs, expected outputs and the manifest");
    fx_regen->add_option("--dir", fx.dir, "Fixture directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth_cmd->parsed()) cmd_synth(synth);
        if (match_cmd->parsed()) cmd_match(match);
        if (pseudo_cmd->parsed()) cmd_pseudolabel(pseudo);
        if (loss_cmd->parsed()) cmd_loss(loss);
        if (sweep_cmd->parsed()) cmd_noise_sweep(sweep);
        if (grad_cmd->parsed()) cmd_gradcheck(grad);
        if (sim_cmd->parsed()) cmd_similarity(sim);
        if (fx_cmd->parsed()) {
            if (fx_verify->parsed()) cmd_fixtures_verify(fx);
            if (fx_regen->parsed()) cmd_fixtures_regen(fx);
        }
    } catch (const glass::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
