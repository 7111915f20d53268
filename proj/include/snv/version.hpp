#pragma once

namespace snv {

inline constexpr const char* kToolName = "snv";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kGenerator = "philox4x32-10";

} // namespace snv
