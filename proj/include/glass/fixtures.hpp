#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace glass {

// How an expected output is compared with a fresh run.
enum class ToleranceClass {
    BitExact,   // byte-for-byte
    Abs1e6,     // tensors compared element-wise, |diff| <= 1e-6
    Abs1e4,
};

const char* to_string(ToleranceClass t);
ToleranceClass tolerance_from_string(const std::string& s);  // ParseError on unknown

struct FixtureOutput {
    std::string file;     // path relative to the fixture's output directory
    std::string digest;   // fnv1a64 of the expected bytes
    ToleranceClass tolerance = ToleranceClass::BitExact;
};

struct Fixture {
    std::string name;
    std::vector<std::string> args;      // CLI arguments; {OUT} and {ROOT} expand
    std::vector<std::string> coverage;  // capability tags, see required_coverage()
    std::vector<FixtureOutput> outputs;
};

struct FixtureManifest {
    std::vector<Fixture> fixtures;
};

// The capability tags every manifest must cover, one per pipeline contract:
// the matching chain, the GPS chain, the label cross-checks, every loss term
// and objective, the noise sweep and the similarity probe.
const std::vector<std::string>& required_coverage();

// Tags in the manifest but not required, or required but missing, make this
// return the offending tags; empty means complete.
std::vector<std::string> coverage_gaps(const FixtureManifest& m);

FixtureManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const FixtureManifest& m, const std::filesystem::path& path);

struct FixtureCheck {
    std::string fixture;
    std::string detail;  // empty when ok
    bool ok = false;
};

// Compares one produced output against the expected file per its tolerance
// class. expected_path must exist (reported as failure, not a crash).
FixtureCheck compare_output(const Fixture& fx, const FixtureOutput& out,
                            const std::filesystem::path& expected_root,
                            const std::filesystem::path& actual_root);

} // namespace glass
