#include "glass/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "glass/digest.hpp"
#include "glass/errors.hpp"
#include "glass/json_canon.hpp"
#include "glass/tensor_io.hpp"

namespace glass {

const char* to_string(ToleranceClass t) {
    switch (t) {
        case ToleranceClass::BitExact: return "bit-exact";
        case ToleranceClass::Abs1e6: return "abs-1e-6";
        case ToleranceClass::Abs1e4: return "abs-1e-4";
    }
    return "bit-exact";
}

ToleranceClass tolerance_from_string(const std::string& s) {
    if (s == "bit-exact") return ToleranceClass::BitExact;
    if (s == "abs-1e-6") return ToleranceClass::Abs1e6;
    if (s == "abs-1e-4") return ToleranceClass::Abs1e4;
    throw ParseError("manifest: unknown tolerance class '" + s + "'");
}

const std::vector<std::string>& required_coverage() {
    static const std::vector<std::string> tags = {
        "feature-correlation",  // dense cosine scores between frames
        "softmax-temperature",  // score sharpening ahead of the expectation
        "soft-argmax-flow",     // coordinate expectation per source pixel
        "reference-selection",  // forward/backward frame choice from GPS
        "gps-flow-scaling",     // projecting the night fix into a flow scale
        "confidence-agreement", // neighbourhood argmax agreement test
        "confidence-map",       // the binary map with out-of-bounds forcing
        "cross-entropy",        // one-hot supervised log term
        "warping-loss-n2d",     // night-to-day warping loss
        "warping-loss-d2n",     // day-to-night warping loss
        "dynamic-ignore-mask",  // dynamic-class disagreement exclusion
        "objective-day",        // day-branch composition
        "objective-night",      // night-branch composition
        "objective-source",     // source-branch composition
        "gps-noise-sweep",      // zero-fraction growth under GPS error
        "similarity-map",       // thresholded single-point similarity probe
    };
    return tags;
}

std::vector<std::string> coverage_gaps(const FixtureManifest& m) {
    std::set<std::string> have;
    for (const auto& fx : m.fixtures) {
        for (const auto& tag : fx.coverage) have.insert(tag);
    }
    std::set<std::string> want(required_coverage().begin(), required_coverage().end());
    std::vector<std::string> gaps;
    for (const auto& tag : want) {
        if (!have.count(tag)) gaps.push_back("missing: " + tag);
    }
    for (const auto& tag : have) {
        if (!want.count(tag)) gaps.push_back("unknown: " + tag);
    }
    return gaps;
}

FixtureManifest read_manifest(const std::filesystem::path& path) {
    const Json doc = Json::parse(read_file_bytes(path));
    FixtureManifest m;
    for (const Json& item : doc.at("fixtures").items()) {
        Fixture fx;
        fx.name = item.at("name").as_string();
        for (const Json& a : item.at("args").items()) fx.args.push_back(a.as_string());
        for (const Json& tag : item.at("coverage").items()) {
            fx.coverage.push_back(tag.as_string());
        }
        for (const Json& out : item.at("outputs").items()) {
            FixtureOutput fo;
            fo.file = out.at("file").as_string();
            fo.digest = out.at("digest").as_string();
            fo.tolerance = tolerance_from_string(out.at("tolerance").as_string());
            fx.outputs.push_back(std::move(fo));
        }
        m.fixtures.push_back(std::move(fx));
    }
    return m;
}

void write_manifest(const FixtureManifest& m, const std::filesystem::path& path) {
    Json arr = Json::array();
    for (const auto& fx : m.fixtures) {
        Json item = Json::object();
        item.set("name", Json::string(fx.name));
        Json args = Json::array();
        for (const auto& a : fx.args) args.push(Json::string(a));
        item.set("args", std::move(args));
        Json cov = Json::array();
        for (const auto& tag : fx.coverage) cov.push(Json::string(tag));
        item.set("coverage", std::move(cov));
        Json outs = Json::array();
        for (const auto& out : fx.outputs) {
            Json o = Json::object();
            o.set("file", Json::string(out.file));
            o.set("digest", Json::string(out.digest));
            o.set("tolerance", Json::string(to_string(out.tolerance)));
            outs.push(std::move(o));
        }
        item.set("outputs", std::move(outs));
        arr.push(std::move(item));
    }
    Json doc = Json::object();
    doc.set("fixtures", std::move(arr));
    write_file_bytes(path, doc.dump());
}

namespace {

FixtureCheck tensor_close(const Fixture& fx, const FixtureOutput& out,
                          const std::filesystem::path& expected,
                          const std::filesystem::path& actual, double tol) {
    const Tensor want = read_tensor(expected);
    const Tensor got = read_tensor(actual);
    if (want.dims != got.dims) {
        return {fx.name, out.file + ": shape differs from the expected tensor", false};
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < want.data.size(); ++i) {
        worst = std::max(worst,
                         std::abs(static_cast<double>(want.data[i]) - got.data[i]));
    }
    if (worst > tol) {
        return {fx.name,
                out.file + ": max deviation " + format_number(worst) + " exceeds " +
                    format_number(tol),
                false};
    }
    return {fx.name, "", true};
}

} // namespace

FixtureCheck compare_output(const Fixture& fx, const FixtureOutput& out,
                            const std::filesystem::path& expected_root,
                            const std::filesystem::path& actual_root) {
    const std::filesystem::path expected = expected_root / out.file;
    const std::filesystem::path actual = actual_root / out.file;
    if (!std::filesystem::exists(expected)) {
        return {fx.name, out.file + ": expected file is missing", false};
    }
    if (!std::filesystem::exists(actual)) {
        return {fx.name, out.file + ": run produced no such file", false};
    }

    // The manifest digest pins the expected bytes themselves, so a corrupted
    // checkout fails loudly instead of silently verifying against it.
    const std::string expected_bytes = read_file_bytes(expected);
    if (digest_bytes(expected_bytes) != out.digest) {
        return {fx.name, out.file + ": expected file does not match its manifest digest",
                false};
    }

    try {
        switch (out.tolerance) {
            case ToleranceClass::BitExact: {
                if (read_file_bytes(actual) != expected_bytes) {
                    return {fx.name, out.file + ": bytes differ", false};
                }
                return {fx.name, "", true};
            }
            case ToleranceClass::Abs1e6:
                return tensor_close(fx, out, expected, actual, 1e-6);
            case ToleranceClass::Abs1e4:
                return tensor_close(fx, out, expected, actual, 1e-4);
        }
    } catch (const Error& e) {
        return {fx.name, out.file + ": " + e.what(), false};
    }
    return {fx.name, out.file + ": unknown tolerance", false};
}

} // namespace glass
