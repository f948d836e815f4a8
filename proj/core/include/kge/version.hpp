#pragma once

namespace kge {

inline constexpr const char* kVersion = "0.1.0";

inline const char* library_version() { return kVersion; }

}  // namespace kge
