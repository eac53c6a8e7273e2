#include <algorithm>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "glass/digest.hpp"
#include "glass/errors.hpp"
#include "glass/fixtures.hpp"
#include "glass/tensor_io.hpp"
#include "helpers.hpp"

using namespace glass;

namespace {

Fixture minimal_fixture() {
    Fixture fx;
    fx.name = "sample";
    fx.args = {"synth", "--out", "{OUT}"};
    fx.coverage = {"feature-correlation"};
    fx.outputs.push_back({"report.json", "0123456789abcdef", ToleranceClass::BitExact});
    return fx;
}

} // namespace

TEST_CASE("the required coverage list is fixed and duplicate-free") {
    const auto& tags = required_coverage();
    CHECK(tags.size() == 16);
    const std::set<std::string> unique(tags.begin(), tags.end());
    CHECK(unique.size() == tags.size());
    CHECK(std::count(tags.begin(), tags.end(), "feature-correlation") == 1);
    CHECK(std::count(tags.begin(), tags.end(), "gps-noise-sweep") == 1);
    CHECK(std::count(tags.begin(), tags.end(), "similarity-map") == 1);
}

TEST_CASE("coverage gaps report both directions") {
    FixtureManifest m;
    Fixture fx = minimal_fixture();
    fx.coverage = required_coverage();
    m.fixtures.push_back(fx);
    CHECK(coverage_gaps(m).empty());

    // Drop one tag: it must come back as a gap.
    m.fixtures[0].coverage.erase(m.fixtures[0].coverage.begin());
    auto gaps = coverage_gaps(m);
    REQUIRE(gaps.size() == 1);
    CHECK(gaps[0].find(required_coverage()[0]) != std::string::npos);

    // Add an unknown tag: also a gap.
    m.fixtures[0].coverage = required_coverage();
    m.fixtures[0].coverage.push_back("made-up-tag");
    gaps = coverage_gaps(m);
    REQUIRE(gaps.size() == 1);
    CHECK(gaps[0].find("made-up-tag") != std::string::npos);
}

TEST_CASE("manifests round-trip through disk") {
    FixtureManifest m;
    Fixture fx = minimal_fixture();
    fx.args = {"match", "--day-local", "{ROOT}/inputs/a.glt", "--out", "{OUT}"};
    fx.coverage = {"feature-correlation", "soft-argmax-flow"};
    fx.outputs.push_back({"flow.glt", "deadbeefdeadbeef", ToleranceClass::Abs1e6});
    m.fixtures.push_back(fx);
    m.fixtures.push_back(minimal_fixture());
    m.fixtures[1].name = "other";

    const auto dir = testutil::temp_dir("manifest_roundtrip");
    const auto path = dir / "manifest.json";
    write_manifest(m, path);
    const FixtureManifest back = read_manifest(path);
    REQUIRE(back.fixtures.size() == 2);
    CHECK(back.fixtures[0].name == "sample");
    CHECK(back.fixtures[0].args == m.fixtures[0].args);
    CHECK(back.fixtures[0].coverage == m.fixtures[0].coverage);
    REQUIRE(back.fixtures[0].outputs.size() == 2);
    CHECK(back.fixtures[0].outputs[1].file == "flow.glt");
    CHECK(back.fixtures[0].outputs[1].digest == "deadbeefdeadbeef");
    CHECK(back.fixtures[0].outputs[1].tolerance == ToleranceClass::Abs1e6);
    CHECK(back.fixtures[1].name == "other");

    // Writing the same manifest twice gives identical bytes.
    const auto path2 = dir / "manifest2.json";
    write_manifest(back, path2);
    CHECK(digest_file(path) == digest_file(path2));
}

TEST_CASE("tolerance names map both ways") {
    CHECK(tolerance_from_string("bit-exact") == ToleranceClass::BitExact);
    CHECK(tolerance_from_string("abs-1e-6") == ToleranceClass::Abs1e6);
    CHECK(tolerance_from_string("abs-1e-4") == ToleranceClass::Abs1e4);
    CHECK(to_string(ToleranceClass::BitExact) == std::string("bit-exact"));
    CHECK(to_string(ToleranceClass::Abs1e4) == std::string("abs-1e-4"));
    CHECK_THROWS_AS(tolerance_from_string("approximately"), ParseError);
}

TEST_CASE("output comparison distinguishes its failure modes") {
    const auto dir = testutil::temp_dir("fixture_compare");
    const auto expected_root = dir / "expected";
    const auto actual_root = dir / "actual";
    std::filesystem::create_directories(expected_root);
    std::filesystem::create_directories(actual_root);

    Fixture fx = minimal_fixture();
    FixtureOutput out;
    out.file = "report.json";
    out.tolerance = ToleranceClass::BitExact;

    // Expected file missing entirely.
    FixtureCheck check = compare_output(fx, out, expected_root, actual_root);
    CHECK_FALSE(check.ok);
    CHECK(!check.detail.empty());

    // Byte-identical contents with the right digest pass.
    testutil::write_raw(expected_root / "report.json", "{\"x\":1}\n");
    testutil::write_raw(actual_root / "report.json", "{\"x\":1}\n");
    out.digest = digest_file(expected_root / "report.json");
    check = compare_output(fx, out, expected_root, actual_root);
    CHECK(check.ok);

    // A pinned digest that no longer matches the expected file is an error
    // even when actual and expected agree.
    out.digest = "0000000000000000";
    check = compare_output(fx, out, expected_root, actual_root);
    CHECK_FALSE(check.ok);
    CHECK(check.detail.find("digest") != std::string::npos);

    // Differing bytes under bit-exact comparison fail.
    out.digest = digest_file(expected_root / "report.json");
    testutil::write_raw(actual_root / "report.json", "{\"x\":2}\n");
    check = compare_output(fx, out, expected_root, actual_root);
    CHECK_FALSE(check.ok);

    // Missing actual output fails too.
    std::filesystem::remove(actual_root / "report.json");
    check = compare_output(fx, out, expected_root, actual_root);
    CHECK_FALSE(check.ok);
}

TEST_CASE("tensor outputs may differ inside their tolerance band") {
    const auto dir = testutil::temp_dir("fixture_tolerance");
    const auto expected_root = dir / "expected";
    const auto actual_root = dir / "actual";
    std::filesystem::create_directories(expected_root);
    std::filesystem::create_directories(actual_root);

    Tensor t;
    t.dims = {2, 2};
    t.data = {0.25f, 0.5f, 0.75f, 1.0f};
    write_tensor(t, expected_root / "field.glt");
    Tensor nudged = t;
    nudged.data[2] += 5e-7f;
    write_tensor(nudged, actual_root / "field.glt");

    Fixture fx = minimal_fixture();
    FixtureOutput out;
    out.file = "field.glt";
    out.digest = digest_file(expected_root / "field.glt");

    out.tolerance = ToleranceClass::BitExact;
    CHECK_FALSE(compare_output(fx, out, expected_root, actual_root).ok);

    out.tolerance = ToleranceClass::Abs1e6;
    CHECK(compare_output(fx, out, expected_root, actual_root).ok);

    // Past the band it fails again, and the wider class still allows it.
    nudged.data[2] = t.data[2] + 2e-5f;
    write_tensor(nudged, actual_root / "field.glt");
    CHECK_FALSE(compare_output(fx, out, expected_root, actual_root).ok);
    out.tolerance = ToleranceClass::Abs1e4;
    CHECK(compare_output(fx, out, expected_root, actual_root).ok);

    // Shape changes are never inside tolerance.
    Tensor reshaped;
    reshaped.dims = {4, 1};
    reshaped.data = t.data;
    write_tensor(reshaped, actual_root / "field.glt");
    CHECK_FALSE(compare_output(fx, out, expected_root, actual_root).ok);
}
