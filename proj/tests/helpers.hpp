#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace testutil {

// Fresh scratch directory per test case; wiped on entry so reruns are clean.
inline std::filesystem::path temp_dir(const std::string& name) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "glass_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_raw(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Runs fn, requires it to throw E, and checks the message mentions `needle`.
template <typename E, typename Fn>
void check_throws_with(Fn&& fn, const std::string& needle) {
    bool thrown = false;
    std::string message;
    try {
        fn();
    } catch (const E& e) {
        thrown = true;
        message = e.what();
    }
    CHECK_MESSAGE(thrown, "expected an exception mentioning '" << needle << "'");
    if (thrown) {
        CHECK_MESSAGE(message.find(needle) != std::string::npos,
                      "message '" << message << "' does not mention '" << needle << "'");
    }
}

} // namespace testutil
