#pragma once

namespace rnl {

inline constexpr const char* kToolName = "rnl";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace rnl
