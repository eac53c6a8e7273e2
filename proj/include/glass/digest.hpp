#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace glass {

// FNV-1a 64-bit over raw bytes, rendered as 16 lowercase hex digits. Used to
// fingerprint inputs in run reports and expected outputs in the fixture
// manifest; content addressing only, no adversarial requirements.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::filesystem::path& path);  // ParseError when unreadable

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::string& bytes);

} // namespace glass
