#pragma once

namespace glass {

inline constexpr const char* kToolName = "glass";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace glass
