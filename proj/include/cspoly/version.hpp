#pragma once

namespace cspoly {

inline constexpr const char* kToolName = "cspoly";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace cspoly
