#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "glass/digest.hpp"
#include "glass/errors.hpp"
#include "glass/fixtures.hpp"

namespace glass::cli {

namespace fs = std::filesystem;

namespace {

// The built-in fixture set. Inputs are generated first (deterministic seeds),
// then every fixture runs one CLI invocation whose outputs are pinned in the
// manifest. {ROOT} expands to the fixture directory, {OUT} to the output
// directory of the current run (expected/ during regen, the scratch dir
// during verify).
struct InputStep {
    std::vector<std::string> args;
};

std::vector<InputStep> input_steps() {
    return {
        {{"synth", "--out", "{ROOT}/inputs/identity", "--size", "12x12",
          "--channels", "6", "--classes", "19", "--shift", "0,0",
          "--lambda", "1", "--seed", "11"}},
        {{"synth", "--out", "{ROOT}/inputs/translated", "--size", "16x16",
          "--channels", "8", "--classes", "19", "--shift", "3,2",
          "--lambda", "0.5", "--seed", "21"}},
        {{"pseudolabel", "--bundle", "{ROOT}/inputs/translated",
          "--alpha", "10000", "--threads", "1",
          "--out", "{ROOT}/inputs/translated_labels"}},
    };
}

FixtureOutput out_spec(std::string file, ToleranceClass tol) {
    FixtureOutput o;
    o.file = std::move(file);
    o.tolerance = tol;
    return o;
}

std::vector<Fixture> builtin_fixtures() {
    using TC = ToleranceClass;
    std::vector<Fixture> v;

    Fixture match;
    match.name = "match-translated";
    match.args = {"match",
                  "--day-local", "{ROOT}/inputs/translated/day_local.glt",
                  "--day-global", "{ROOT}/inputs/translated/day_global.glt",
                  "--night-local", "{ROOT}/inputs/translated/night_local.glt",
                  "--night-global", "{ROOT}/inputs/translated/night_global.glt",
                  "--alpha", "10000", "--threads", "1", "--out", "{OUT}"};
    match.coverage = {"feature-correlation", "softmax-temperature", "soft-argmax-flow"};
    match.outputs = {out_spec("flow_day_to_night.glt", TC::Abs1e6),
                     out_spec("flow_night_to_day.glt", TC::Abs1e6),
                     out_spec("report.json", TC::BitExact)};
    v.push_back(std::move(match));

    Fixture ident;
    ident.name = "pseudolabel-identity";
    ident.args = {"pseudolabel", "--bundle", "{ROOT}/inputs/identity",
                  "--alpha", "10000", "--threads", "1", "--out", "{OUT}"};
    ident.coverage = {"reference-selection", "gps-flow-scaling",
                      "confidence-agreement", "confidence-map"};
    ident.outputs = {out_spec("p_night_to_day.glt", TC::BitExact),
                     out_spec("p_day_to_night.glt", TC::BitExact),
                     out_spec("p_night_to_day_intra.glt", TC::BitExact),
                     out_spec("p_day_to_night_intra.glt", TC::BitExact),
                     out_spec("conf_night_to_day.glt", TC::BitExact),
                     out_spec("conf_day_to_night.glt", TC::BitExact),
                     out_spec("oob_night_to_day.glt", TC::BitExact),
                     out_spec("oob_day_to_night.glt", TC::BitExact),
                     out_spec("report.json", TC::BitExact)};
    v.push_back(std::move(ident));

    Fixture trans;
    trans.name = "pseudolabel-translated";
    trans.args = {"pseudolabel", "--bundle", "{ROOT}/inputs/translated",
                  "--alpha", "10000", "--threads", "1", "--out", "{OUT}"};
    trans.coverage = {"feature-correlation", "soft-argmax-flow",
                      "gps-flow-scaling", "confidence-map"};
    trans.outputs = {out_spec("p_night_to_day.glt", TC::Abs1e6),
                     out_spec("p_day_to_night.glt", TC::Abs1e6),
                     out_spec("p_night_to_day_intra.glt", TC::Abs1e6),
                     out_spec("p_day_to_night_intra.glt", TC::Abs1e6),
                     out_spec("conf_night_to_day.glt", TC::BitExact),
                     out_spec("conf_day_to_night.glt", TC::BitExact),
                     out_spec("report.json", TC::BitExact)};
    v.push_back(std::move(trans));

    Fixture loss;
    loss.name = "loss-breakdown";
    loss.args = {"loss", "--bundle", "{ROOT}/inputs/translated",
                 "--labels", "{ROOT}/inputs/translated_labels",
                 "--light", "2", "--adv", "3", "--dis", "1",
                 "--seg-pred", "{ROOT}/inputs/translated_labels/p_night_to_day.glt",
                 "--seg-labels", "{ROOT}/inputs/translated/labels_day.glt",
                 "--out", "{OUT}"};
    loss.coverage = {"cross-entropy", "warping-loss-n2d", "warping-loss-d2n",
                     "dynamic-ignore-mask", "objective-day", "objective-night",
                     "objective-source"};
    loss.outputs = {out_spec("report.json", TC::BitExact)};
    v.push_back(std::move(loss));

    Fixture sweep;
    sweep.name = "noise-sweep-small";
    sweep.args = {"noise-sweep", "--levels", "0,2,5", "--trials", "4",
                  "--seed", "5", "--alpha", "10000", "--threads", "1",
                  "--out", "{OUT}"};
    sweep.coverage = {"gps-noise-sweep"};
    sweep.outputs = {out_spec("sweep.csv", TC::BitExact),
                     out_spec("report.json", TC::BitExact)};
    v.push_back(std::move(sweep));

    Fixture sim;
    sim.name = "similarity-probe";
    sim.args = {"similarity",
                "--night", "{ROOT}/inputs/translated/night_local.glt",
                "--day", "{ROOT}/inputs/translated/day_local.glt",
                "--point", "5,4", "--threshold", "0.25", "--out", "{OUT}"};
    sim.coverage = {"similarity-map"};
    sim.outputs = {out_spec("similarity.glt", TC::BitExact),
                   out_spec("report.json", TC::BitExact)};
    v.push_back(std::move(sim));

    return v;
}

std::string expand(const std::string& s, const std::string& root, const std::string& out) {
    std::string r = s;
    auto replace_all = [&r](const std::string& from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = r.find(from, pos)) != std::string::npos) {
            r.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all("{ROOT}", root);
    replace_all("{OUT}", out);
    return r;
}

int run_self(const std::vector<std::string>& args, const std::string& root,
             const std::string& out) {
    std::string cmd = "'" + self_exe().string() + "'";
    for (const std::string& a : args) {
        const std::string e = expand(a, root, out);
        if (e.find('\'') != std::string::npos) {
            throw InputError("fixture argument contains a quote: " + e);
        }
        cmd += " '" + e + "'";
    }
    const int status = std::system(cmd.c_str());
    if (status == -1) throw InputError("failed to spawn: " + cmd);
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128;
}

} // namespace

std::filesystem::path self_exe() {
    std::error_code ec;
    fs::path p = fs::read_symlink("/proc/self/exe", ec);
    if (ec) throw InputError("cannot resolve own executable path");
    return p;
}

void cmd_fixtures_regen(const FixtureOptions& opt) {
    if (opt.dir.empty()) throw InputError("--dir is required");
    const fs::path dir = fs::absolute(opt.dir);
    fs::create_directories(dir);
    fs::remove_all(dir / "inputs");
    fs::remove_all(dir / "expected");
    fs::remove_all(dir / "_check");
    const std::string root = dir.string();

    for (const InputStep& step : input_steps()) {
        const int rc = run_self(step.args, root, "");
        if (rc != 0) {
            throw InputError("fixture input generation failed (exit " +
                             std::to_string(rc) + ")");
        }
    }

    FixtureManifest manifest;
    manifest.fixtures = builtin_fixtures();
    for (Fixture& fx : manifest.fixtures) {
        const fs::path out = dir / "expected" / fx.name;
        fs::create_directories(out);
        const int rc = run_self(fx.args, root, out.string());
        if (rc != 0) {
            throw InputError("fixture '" + fx.name + "' failed (exit " +
                             std::to_string(rc) + ")");
        }
        for (FixtureOutput& o : fx.outputs) {
            o.digest = digest_file(out / o.file);
        }
    }
    write_manifest(manifest, dir / "manifest.json");
}

void cmd_fixtures_verify(const FixtureOptions& opt) {
    if (opt.dir.empty()) throw InputError("--dir is required");
    const fs::path dir = fs::absolute(opt.dir);
    const FixtureManifest manifest = read_manifest(dir / "manifest.json");
    if (manifest.fixtures.empty()) {
        throw VerifyError("manifest lists no fixtures");
    }
    const std::string root = dir.string();
    const fs::path work = opt.work.empty() ? dir / "_check" : fs::absolute(opt.work);

    std::size_t failures = 0;
    for (const std::string& gap : coverage_gaps(manifest)) {
        std::printf("FAIL coverage: %s\n", gap.c_str());
        ++failures;
    }

    for (const Fixture& fx : manifest.fixtures) {
        const fs::path out = work / fx.name;
        fs::remove_all(out);
        fs::create_directories(out);
        const int rc = run_self(fx.args, root, out.string());
        if (rc != 0) {
            std::printf("FAIL %s: command exited with %d\n", fx.name.c_str(), rc);
            ++failures;
            continue;
        }
        bool ok = true;
        for (const FixtureOutput& o : fx.outputs) {
            const FixtureCheck check =
                compare_output(fx, o, dir / "expected" / fx.name, out);
            if (!check.ok) {
                std::printf("FAIL %s: %s\n", fx.name.c_str(), check.detail.c_str());
                ok = false;
                ++failures;
            }
        }
        if (ok) std::printf("ok %s\n", fx.name.c_str());
    }

    std::printf("%zu fixtures, %zu failures\n", manifest.fixtures.size(), failures);
    if (failures != 0) {
        throw VerifyError("fixture verification failed");
    }
}

} // namespace glass::cli
